#include "vortex/kernels.hpp"

#include <omp.h>

#include <algorithm>

namespace vortex::kernels {

namespace {

PairScan merge_scans(const std::vector<PairScan>& rows) {
    PairScan best;
    for (const auto& r : rows)
        if (r.min_distance < best.min_distance) best = r;
    return best;
}

template <class Backend>
double green_rows(const Backend& b, std::span<const Vec2> x, std::span<const double> w,
                  PairScan* scan) {
    const std::size_t n = x.size();
    std::vector<double> rows(n, 0.0);
    std::vector<PairScan> scans(n);
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long li = 0; li < ln; ++li) {
        const auto i = static_cast<std::size_t>(li);
        CompensatedSum row;
        PairScan s;
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2 d = min_image(x[i] - x[j]);
            const double r = norm(d);
            if (r < s.min_distance) s = {r, i, j};
            row.add(w[j] * b.green(d));
        }
        rows[i] = w[i] * row.value();
        scans[i] = s;
    }
    CompensatedSum total;
    for (double r : rows) total.add(r);
    if (scan) *scan = merge_scans(scans);
    return 2.0 * total.value();
}

template <class Backend>
void velocity_rows(const Backend& b, std::span<const Vec2> x, std::span<const double> w,
                   double scale, std::span<Vec2> out, PairScan* scan) {
    const std::size_t n = x.size();
    thread_local std::vector<Vec2> pair_kernel;
    pair_kernel.resize(n * (n - 1) / 2);
    auto offset = [n](std::size_t i) { return i * n - i * (i + 1) / 2; };
    std::vector<PairScan> scans(n);
    const long ln = static_cast<long>(n);
    Vec2* buf = pair_kernel.data();
#pragma omp parallel
    {
#pragma omp for schedule(dynamic, 4)
        for (long li = 0; li < ln; ++li) {
            const auto i = static_cast<std::size_t>(li);
            PairScan s;
            Vec2* rowbuf = buf + offset(i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const Vec2 d = min_image(x[i] - x[j]);
                const double r2 = norm2(d);
                if (r2 < s.min_distance * s.min_distance) s = {std::sqrt(r2), i, j};
                rowbuf[j - i - 1] = b.kernel(d);
            }
            scans[i] = s;
        }
#pragma omp for schedule(static)
        for (long li = 0; li < ln; ++li) {
            const auto i = static_cast<std::size_t>(li);
            CompensatedSum vx, vy;
            for (std::size_t j = 0; j < i; ++j) {
                const Vec2 k = buf[offset(j) + (i - j - 1)];
                vx.add(-w[j] * k.x);
                vy.add(-w[j] * k.y);
            }
            const Vec2* rowbuf = buf + offset(i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const Vec2 k = rowbuf[j - i - 1];
                vx.add(w[j] * k.x);
                vy.add(w[j] * k.y);
            }
            out[i] = {scale * vx.value(), scale * vy.value()};
        }
    }
    if (scan) *scan = merge_scans(scans);
}

}  // namespace

double green_pair_sum(std::span<const Vec2> x, std::span<const double> w,
                      const GreenEvaluator& g, PairScan* scan) {
    return std::visit([&](const auto& b) { return green_rows(b, x, w, scan); }, g.impl());
}

double green_pair_sum_serial(std::span<const Vec2> x, std::span<const double> w,
                             const GreenEvaluator& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (i != j) sum += w[i] * w[j] * g.green(x[i] - x[j]);
    return sum;
}

double log_pair_sum(std::span<const Vec2> x, std::span<const double> w, PairScan* scan) {
    const std::size_t n = x.size();
    std::vector<double> rows(n, 0.0);
    std::vector<PairScan> scans(n);
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long li = 0; li < ln; ++li) {
        const auto i = static_cast<std::size_t>(li);
        CompensatedSum row;
        PairScan s;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r2 = norm2(min_image(x[i] - x[j]));
            if (r2 < s.min_distance * s.min_distance) s = {std::sqrt(r2), i, j};
            row.add(w[j] * (-0.5 * std::log(r2)));
        }
        rows[i] = w[i] * row.value();
        scans[i] = s;
    }
    CompensatedSum total;
    for (double r : rows) total.add(r);
    if (scan) *scan = merge_scans(scans);
    return 2.0 * total.value();
}

double log_pair_sum_serial(std::span<const Vec2> x, std::span<const double> w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (i != j) sum += w[i] * w[j] * std::log(1.0 / torus_distance(x[i], x[j]));
    return sum;
}

void biot_savart_velocity(std::span<const Vec2> x, std::span<const double> w,
                          const GreenEvaluator& g, double scale, std::span<Vec2> out,
                          PairScan* scan) {
    if (x.size() < 2) {
        std::fill(out.begin(), out.end(), Vec2{});
        if (scan) *scan = PairScan{};
        return;
    }
    std::visit([&](const auto& b) { velocity_rows(b, x, w, scale, out, scan); }, g.impl());
}

void biot_savart_velocity_serial(std::span<const Vec2> x, std::span<const double> w,
                                 const GreenEvaluator& g, double scale, std::span<Vec2> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        Vec2 v{};
        for (std::size_t j = 0; j < x.size(); ++j)
            if (j != i) v += w[j] * g.biot_savart(x[i] - x[j]);
        out[i] = scale * v;
    }
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

}  // namespace vortex::kernels
