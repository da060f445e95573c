#include "vortex/gas.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "vortex/error.hpp"

namespace vortex {

namespace {

void require_separated(const kernels::PairScan& scan, const char* what) {
    if (scan.min_distance < coincidence_tolerance)
        throw CoincidentPositions(std::string(what) + ": vortices " + std::to_string(scan.i) +
                                  " and " + std::to_string(scan.j) + " coincide");
}

}  // namespace

double hamiltonian(const VortexConfig& c, const GreenEvaluator& g) {
    if (c.size() < 2) return 0.0;
    kernels::PairScan scan;
    const double s = kernels::green_pair_sum(c.positions(), c.intensities(), g, &scan);
    require_separated(scan, "hamiltonian");
    return -s / (2.0 * static_cast<double>(c.size()));
}

double interaction_energy(const VortexConfig& c, KernelChoice kernel, IntensityScale scale,
                          const GreenEvaluator* g) {
    if (c.size() < 2) return 0.0;
    const double factor =
        scale == IntensityScale::sqrt_n ? 1.0 / static_cast<double>(c.size()) : 1.0;
    kernels::PairScan scan;
    double s = 0.0;
    if (kernel == KernelChoice::min_image_log) {
        s = kernels::log_pair_sum(c.positions(), c.intensities(), &scan);
    } else {
        static const GreenEvaluator fallback = GreenEvaluator::expansion();
        s = -kernels::green_pair_sum(c.positions(), c.intensities(), g ? *g : fallback, &scan);
    }
    require_separated(scan, "interaction_energy");
    return factor * s;
}

VortexConfig sample_lambda(std::size_t n, IntensityLaw law, Rng& rng) {
    if (n < 1) throw InvalidArgument("sample_lambda: need n >= 1");
    if (law == IntensityLaw::rademacher && n % 2 != 0)
        throw InvalidArgument("sample_lambda: balanced rademacher law needs an even count");
    if (law == IntensityLaw::fixed)
        throw InvalidArgument("sample_lambda: the fixed law has no sampler");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Vec2> pos(n);
    for (auto& p : pos) {
        const double x = unif(rng);
        const double y = unif(rng);
        p = {x, y};
    }
    std::vector<double> xi(n);
    if (law == IntensityLaw::gaussian) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (auto& v : xi) v = normal(rng);
    } else {
        for (std::size_t i = 0; i < n; ++i) xi[i] = i < n / 2 ? 1.0 : -1.0;
    }
    return VortexConfig(std::move(pos), std::move(xi), law);
}

Conditioned condition_energy(const ConfigSampler& sampler, const EnergyWindow& window,
                             const EnergyFunction& energy_fn, std::size_t max_attempts,
                             Rng& rng) {
    if (max_attempts < 1) throw InvalidArgument("condition_energy: max_attempts must be >= 1");
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        VortexConfig c = sampler(rng);
        const double e = energy_fn(c);
        if (window.contains(e)) return {std::move(c), attempt, e};
    }
    throw AcceptanceFailure(max_attempts);
}

VortexConfig make_clustered(std::size_t n_free, std::span<const std::size_t> cluster_sizes,
                            double diameter, Rng& rng) {
    if (!(diameter > 0.0)) throw InvalidArgument("make_clustered: diameter must be positive");
    const std::size_t clustered =
        std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), std::size_t{0});
    const std::size_t total = n_free + clustered;
    if (total == 0 || total % 2 != 0)
        throw InvalidArgument("make_clustered: total vortex count must be even and positive");

    // Largest clusters first, each to the currently lighter sign.
    std::vector<std::size_t> order(cluster_sizes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cluster_sizes[a] > cluster_sizes[b]; });
    std::vector<double> sign(cluster_sizes.size(), 1.0);
    std::size_t plus = 0, minus = 0;
    for (std::size_t idx : order) {
        if (plus <= minus) {
            sign[idx] = 1.0;
            plus += cluster_sizes[idx];
        } else {
            sign[idx] = -1.0;
            minus += cluster_sizes[idx];
        }
    }
    if (plus > total / 2 || minus > total / 2)
        throw InvalidArgument("make_clustered: cluster sizes cannot be sign-balanced");

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Vec2> pos;
    std::vector<double> xi;
    pos.reserve(total);
    xi.reserve(total);
    const double radius = 0.5 * diameter;
    for (std::size_t c = 0; c < cluster_sizes.size(); ++c) {
        const double cx = unif(rng);
        const double cy = unif(rng);
        for (std::size_t m = 0; m < cluster_sizes[c]; ++m) {
            const double r = radius * std::sqrt(unif(rng));
            const double theta = two_pi * unif(rng);
            pos.push_back({cx + r * std::cos(theta), cy + r * std::sin(theta)});
            xi.push_back(sign[c]);
        }
    }
    const std::size_t free_plus = total / 2 - plus;
    for (std::size_t i = 0; i < n_free; ++i) {
        const double x = unif(rng);
        const double y = unif(rng);
        pos.push_back({x, y});
        xi.push_back(i < free_plus ? 1.0 : -1.0);
    }
    return VortexConfig(std::move(pos), std::move(xi),
                        cluster_sizes.empty() ? IntensityLaw::rademacher : IntensityLaw::fixed);
}

SpectralField empirical_vorticity(const VortexConfig& c, int cutoff) {
    SpectralField field(cutoff);
    const IndexSet& modes = field.modes();
    const std::size_t n = c.size();
    const int M = cutoff;
    // T(k) = sum_i xi_i exp(2 pi i k.x_i) on the positive half-lattice.
    std::vector<std::complex<double>> total(modes.size(), 0.0);
    std::vector<std::complex<double>> ex(M + 1), ey(2 * M + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = c.position(i);
        const auto sx = std::polar(1.0, two_pi * p.x);
        const auto sy = std::polar(1.0, two_pi * p.y);
        ex[0] = 1.0;
        for (int k = 1; k <= M; ++k) ex[k] = ex[k - 1] * sx;
        ey[M] = 1.0;
        for (int k = 1; k <= M; ++k) {
            ey[M + k] = ey[M + k - 1] * sy;
            ey[M - k] = std::conj(ey[M + k]);
        }
        const double w = c.intensity(i);
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const WaveIndex k = modes[m];
            if (!k.positive_half()) continue;
            total[m] += w * ex[k.k1] * ey[M + k.k2];
        }
    }
    const double scale = std::numbers::sqrt2 / std::sqrt(static_cast<double>(n));
    auto coeffs = field.coeffs();
    for (std::size_t m = 0; m < modes.size(); ++m) {
        if (!modes[m].positive_half()) continue;
        coeffs[m] = scale * total[m].real();
        coeffs[modes.partner(m)] = -scale * total[m].imag();
    }
    return field;
}

}  // namespace vortex
