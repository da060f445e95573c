#include "vortex/verify.hpp"

#include <algorithm>
#include <cmath>

#include "vortex/gas.hpp"
#include "vortex/green.hpp"
#include "vortex/io.hpp"
#include "vortex/kernels.hpp"
#include "vortex/rng.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/white_noise.hpp"

namespace vortex {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

CheckResult make(std::string name, double residual, double tolerance, std::string detail = {}) {
    return {std::move(name), residual, tolerance, residual <= tolerance, std::move(detail)};
}

}  // namespace

VarianceCheck variance_identity(std::size_t n, int mollifier, std::size_t samples,
                                std::uint64_t seed, int grid) {
    const MollifiedGreen gn(mollifier, GreenEvaluator::expansion());
    CompensatedSum sq;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double v = gn(Vec2{(i + 0.5) / grid, (j + 0.5) / grid});
            sq.add(v * v);
        }
    const double integral = sq.value() / (static_cast<double>(grid) * grid);

    std::vector<double> values(samples);
    const long ls = static_cast<long>(samples);
#pragma omp parallel for schedule(dynamic, 16)
    for (long s = 0; s < ls; ++s) {
        Rng rng = stream_rng(seed, static_cast<std::uint64_t>(s));
        const auto c = sample_lambda(n, IntensityLaw::gaussian, rng);
        values[static_cast<std::size_t>(s)] = quadratic_form(c, [&](Vec2 x, Vec2 y) { return gn(x - y); });
    }
    const auto m = moments(values);
    VarianceCheck out;
    out.variance = m.variance;
    out.variance_se = m.variance_se;
    out.mean = m.mean;
    out.mean_se = m.mean_se;
    out.target = 2.0 * integral;
    out.finite_target = 2.0 * integral * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
    return out;
}

std::vector<CheckResult> run_identity_checks(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const GreenEvaluator g = GreenEvaluator::expansion();

    {
        const auto rep = validate_dft(g, 128, 32);
        out.push_back(make("green-dft", rep.max_relative_error, 1e-6,
                           "grid=128 kmax=32 backend=" + g.describe()));
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < o.configs; ++s) {
            Rng rng = stream_rng(o.seed, s);
            const std::size_t n = 2 + static_cast<std::size_t>(rng() % 99);
            const auto c = sample_lambda(n, IntensityLaw::gaussian, rng);
            const double h = hamiltonian(c, g);
            const double q = quadratic_form(c, [&](Vec2 x, Vec2 y) { return g.green(x - y); });
            worst = std::max(worst, rel(h, -0.5 * q));
        }
        out.push_back(make("hamiltonian-quadratic-form", worst, 1e-12,
                           std::to_string(o.configs) + " configs, N in [2,100]"));
    }
    {
        const double L = lattice_sums(16).L;
        double worst = 0.0;
        Rng rng = stream_rng(o.seed, 1u << 20);
        for (std::size_t s = 0; s < o.fields; ++s) {
            const auto f = sample_truncated_wn(16, rng);
            worst = std::max(worst, rel(quad_green_truncated(f), -2.0 * renormalized_energy(f) - 2.0 * L));
        }
        out.push_back(make("truncation-identity", worst, 1e-12,
                           std::to_string(o.fields) + " fields, cutoff 16"));
    }
    {
        const auto v = variance_identity(50, 4, o.variance_samples, o.seed ^ 0x5bd1e995u);
        const double z = std::abs(v.variance - v.target) / v.variance_se;
        out.push_back(make("variance-identity", z, 3.0,
                           "var=" + io::fmt(v.variance) + " target=" + io::fmt(v.target) +
                               " se=" + io::fmt(v.variance_se) + " (residual in SE units)"));
    }
    {
        double worst = 0.0;
        for (std::size_t s = 0; s < 10; ++s) {
            Rng rng = stream_rng(o.seed, (2u << 20) + s);
            const auto c = sample_lambda(100, IntensityLaw::gaussian, rng);
            const auto v = velocity_field(c, g);
            double mx = 0.0, my = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                mx += c.intensity(i) * v[i].x;
                my += c.intensity(i) * v[i].y;
                scale += std::abs(c.intensity(i)) * norm(v[i]);
            }
            worst = std::max(worst, std::hypot(mx, my) / scale);
        }
        out.push_back(make("momentum", worst, 1e-13, "sum xi_i v_i relative to sum |xi_i v_i|"));
    }
    return out;
}

}  // namespace vortex
