#pragma once

// O(N^2) pairwise kernels. Each has an OpenMP version and a plain serial
// reference kept for testing. The OpenMP versions evaluate rows in
// parallel and reduce them in a fixed order, so their results do not depend
// on the thread count.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "vortex/green.hpp"
#include "vortex/torus.hpp"

namespace vortex {

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace kernels {

struct PairScan {
    double min_distance = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    std::size_t j = 0;
};

// sum over i != j of w_i w_j G(x_i - x_j).
double green_pair_sum(std::span<const Vec2> x, std::span<const double> w,
                      const GreenEvaluator& g, PairScan* scan = nullptr);
double green_pair_sum_serial(std::span<const Vec2> x, std::span<const double> w,
                             const GreenEvaluator& g);

// sum over i != j of w_i w_j log(1 / d(x_i, x_j)), minimum-image distance.
double log_pair_sum(std::span<const Vec2> x, std::span<const double> w,
                    PairScan* scan = nullptr);
double log_pair_sum_serial(std::span<const Vec2> x, std::span<const double> w);

// v_i = scale * sum_{j != i} w_j K(x_i - x_j). Pair kernels are evaluated
// once per unordered pair; their antisymmetry is exact.
void biot_savart_velocity(std::span<const Vec2> x, std::span<const double> w,
                          const GreenEvaluator& g, double scale, std::span<Vec2> out,
                          PairScan* scan = nullptr);
void biot_savart_velocity_serial(std::span<const Vec2> x, std::span<const double> w,
                                 const GreenEvaluator& g, double scale, std::span<Vec2> out);

// sum over i != j of w_i w_j f(x_i, x_j) for a symmetric f, visiting each
// unordered pair once.
template <class F>
double symmetric_pair_sum(std::span<const Vec2> x, std::span<const double> w, F&& f) {
    const std::size_t n = x.size();
    std::vector<double> rows(n, 0.0);
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (long li = 0; li < ln; ++li) {
        const auto i = static_cast<std::size_t>(li);
        CompensatedSum row;
        for (std::size_t j = i + 1; j < n; ++j) row.add(w[j] * f(x[i], x[j]));
        rows[i] = w[i] * row.value();
    }
    CompensatedSum total;
    for (double r : rows) total.add(r);
    return 2.0 * total.value();
}

int max_threads();
void set_threads(int n);

}  // namespace kernels
}  // namespace vortex
