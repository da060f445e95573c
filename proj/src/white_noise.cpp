#include "vortex/white_noise.hpp"

#include <algorithm>
#include <cmath>

#include "vortex/error.hpp"
#include "vortex/kernels.hpp"

namespace vortex {

SpectralField sample_truncated_wn(int cutoff, Rng& rng) {
    if (cutoff < 1) throw InvalidArgument("sample_truncated_wn: cutoff must be >= 1");
    SpectralField f(cutoff);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& c : f.coeffs()) c = normal(rng);
    return f;
}

double renormalized_energy(const SpectralField& f) {
    const auto& modes = f.modes();
    const auto c = f.coeffs();
    CompensatedSum sum;
    for (std::size_t i = 0; i < c.size(); ++i)
        sum.add((c[i] * c[i] - 1.0) / static_cast<double>(modes[i].norm2()));
    return sum.value() / (8.0 * pi * pi);
}

double quad_green_truncated(const SpectralField& f) {
    const auto& modes = f.modes();
    const auto c = f.coeffs();
    CompensatedSum sum;
    for (std::size_t i = 0; i < c.size(); ++i)
        sum.add(c[i] * c[i] / static_cast<double>(modes[i].norm2()));
    return -sum.value() / (4.0 * pi * pi);
}

LatticeSums lattice_sums(int cutoff) {
    if (cutoff < 1) throw InvalidArgument("lattice_sums: cutoff must be >= 1");
    // Sum by shells of increasing |k|^2 so small terms are added last.
    const std::int64_t n2 = std::int64_t(cutoff) * cutoff;
    std::vector<std::int64_t> multiplicity(static_cast<std::size_t>(n2 + 1), 0);
    for (std::int64_t a = -cutoff; a <= cutoff; ++a)
        for (std::int64_t b = -cutoff; b <= cutoff; ++b) {
            const std::int64_t q = a * a + b * b;
            if (q > 0 && q <= n2) ++multiplicity[static_cast<std::size_t>(q)];
        }
    CompensatedSum s2, s4;
    for (std::int64_t q = 1; q <= n2; ++q) {
        const auto m = static_cast<double>(multiplicity[static_cast<std::size_t>(q)]);
        if (m == 0.0) continue;
        const double qd = static_cast<double>(q);
        s2.add(m / qd);
        s4.add(m / (qd * qd));
    }
    return {s2.value() / (8.0 * pi * pi), s4.value() / (32.0 * pi * pi * pi * pi)};
}

double bump(double rho, double radius) {
    const double inner = 0.5 * radius;
    if (rho <= inner) return 1.0;
    if (rho >= radius) return 0.0;
    const double t = (rho - inner) / inner;
    const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    return 1.0 - s;
}

MollifiedGreen::MollifiedGreen(int n, GreenEvaluator g, double radius)
    : n_(n), radius_(radius), g_(std::move(g)) {
    if (n < 1) throw InvalidArgument("MollifiedGreen: index must be >= 1");
    if (!(radius > 0.0 && radius <= 0.5))
        throw InvalidArgument("MollifiedGreen: radius must be in (0, 1/2]");
}

double MollifiedGreen::operator()(Vec2 d) const {
    const Vec2 m = min_image(d);
    const double rho = n_ * norm(m);
    const double chi = bump(rho, radius_);
    if (chi == 1.0) return 0.0;
    return g_.green(m) * (1.0 - chi);
}

std::vector<double> grid_kernel_weights(const ConvolutionKernel& f, int cutoff, int grid) {
    if (2 * cutoff >= grid)
        throw InvalidArgument("grid_kernel_weights: grid must exceed twice the cutoff");
    const auto M = static_cast<std::size_t>(grid);
    std::vector<double> values(M * M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            values[i * M + j] = f(Vec2{static_cast<double>(i) / grid, static_cast<double>(j) / grid});
    const auto modes = lattice(cutoff);
    std::vector<double> cx(M), sx(M), cy(M), sy(M);
    std::vector<double> weights(modes->size());
    for (std::size_t m = 0; m < modes->size(); ++m) {
        const WaveIndex k = (*modes)[m];
        for (std::size_t i = 0; i < M; ++i) {
            const double ax = two_pi * k.k1 * static_cast<double>(i) / grid;
            const double ay = two_pi * k.k2 * static_cast<double>(i) / grid;
            cx[i] = std::cos(ax);
            sx[i] = std::sin(ax);
            cy[i] = std::cos(ay);
            sy[i] = std::sin(ay);
        }
        CompensatedSum acc;
        for (std::size_t i = 0; i < M; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < M; ++j)
                row += values[i * M + j] * (cx[i] * cy[j] - sx[i] * sy[j]);
            acc.add(row);
        }
        weights[m] = acc.value() / static_cast<double>(M * M);
    }
    return weights;
}

double quad_kernel_grid(const SpectralField& field, const std::vector<double>& weights) {
    const auto c = field.coeffs();
    if (weights.size() != c.size())
        throw InvalidArgument("quad_kernel_grid: weights do not match the field cutoff");
    CompensatedSum sum;
    for (std::size_t i = 0; i < c.size(); ++i) sum.add(weights[i] * c[i] * c[i]);
    return sum.value();
}

MomentEstimate moments(const std::vector<double>& values) {
    MomentEstimate est;
    est.samples = values.size();
    if (values.empty()) return est;
    const double n = static_cast<double>(values.size());
    CompensatedSum s;
    for (double v : values) s.add(v);
    est.mean = s.value() / n;
    CompensatedSum s2, s4;
    for (double v : values) {
        const double d = v - est.mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    if (values.size() < 2) return est;
    est.variance = s2.value() / (n - 1.0);
    est.mean_se = std::sqrt(est.variance / n);
    const double m4 = s4.value() / n;
    const double m2 = s2.value() / n;
    // Var of the sample variance ~ (m4 - m2^2 (n-3)/(n-1)) / n
    est.variance_se = std::sqrt(std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n));
    return est;
}

MomentEstimate quad_kernel_mc(int cutoff, const ConvolutionKernel& f, std::size_t samples,
                              Rng& rng, int grid) {
    if (grid == 0) grid = 4 * cutoff;
    const auto weights = grid_kernel_weights(f, cutoff, grid);
    std::vector<double> values;
    values.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s)
        values.push_back(quad_kernel_grid(sample_truncated_wn(cutoff, rng), weights));
    return moments(values);
}

ConditionedField condition_wn(int cutoff, const EnergyWindow& window, Rng& rng,
                              std::size_t max_attempts) {
    if (max_attempts < 1) throw InvalidArgument("condition_wn: max_attempts must be >= 1");
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        auto f = sample_truncated_wn(cutoff, rng);
        const double e = renormalized_energy(f);
        if (window.contains(e)) return {std::move(f), attempt, e};
    }
    throw AcceptanceFailure(max_attempts);
}

SpectralField support_witness(EnergyWindow window, int cutoff) {
    if (!std::isfinite(window.a)) throw InvalidArgument("support_witness: needs a finite lower end");
    if (!(window.b - window.a <= 1.0)) window = EnergyWindow(window.a, window.a + 1.0);
    const double a = window.a;
    const double delta = (window.b - window.a) / 5.0;
    const double L = lattice_sums(cutoff).L;
    double c = 0.0;
    if (a + 2.0 * delta > 0.0) {
        c = (a + 3.5 * delta) / L;
    } else if (a + 3.0 * delta >= 0.0) {
        c = 0.0;
    } else {
        if (!(L > -a))
            throw InvalidArgument("support_witness: cutoff too small (L = " + std::to_string(L) +
                                  " must exceed -a = " + std::to_string(-a) + ")");
        c = (a + 1.5 * delta) / L;
    }
    SpectralField f(cutoff);
    const double value = std::sqrt(1.0 + c);
    std::fill(f.coeffs().begin(), f.coeffs().end(), value);
    return f;
}

}  // namespace vortex
