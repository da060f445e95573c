#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vortex/config.hpp"
#include "vortex/green.hpp"
#include "vortex/kernels.hpp"
#include "vortex/rng.hpp"
#include "vortex/spectral_field.hpp"

namespace vortex {

// Positions closer than this are treated as coincident.
inline constexpr double coincidence_tolerance = 1e-12;

// H_N = -(1/2N) sum_{i != j} xi_i xi_j G(x_i - x_j).
double hamiltonian(const VortexConfig& c, const GreenEvaluator& g);

// sum_{i != j} s_i s_j k(x_i - x_j), s_i = xi_i or xi_i / sqrt(N).
// min_image_log: k = log(1/d) with d the minimum-image distance.
// torus_green:   k = -G, so that with sqrt_n scaling the result is 2 H_N.
double interaction_energy(const VortexConfig& c, KernelChoice kernel = KernelChoice::min_image_log,
                          IntensityScale scale = IntensityScale::sqrt_n,
                          const GreenEvaluator* g = nullptr);

// <omega_N (x) omega_N, f> = (1/N) sum_{i != j} xi_i xi_j f(x_i, x_j) for a
// symmetric f; the diagonal is excluded.
template <class F>
double quadratic_form(const VortexConfig& c, F&& f) {
    const double n = static_cast<double>(c.size());
    return kernels::symmetric_pair_sum(c.positions(), c.intensities(), std::forward<F>(f)) / n;
}

// Positions iid uniform, intensities iid N(0,1) (gaussian) or exactly n/2
// of +1 and n/2 of -1 (rademacher, balanced).
VortexConfig sample_lambda(std::size_t n, IntensityLaw law, Rng& rng);

using ConfigSampler = std::function<VortexConfig(Rng&)>;
using EnergyFunction = std::function<double(const VortexConfig&)>;

struct Conditioned {
    VortexConfig config;
    std::size_t attempts;
    double energy;
};

// Draw from `sampler` until energy_fn lands in the window.
Conditioned condition_energy(const ConfigSampler& sampler, const EnergyWindow& window,
                             const EnergyFunction& energy_fn, std::size_t max_attempts, Rng& rng);

// n_free uniform vortices plus same-sign clusters of the given sizes, each
// uniform in a disc of the given diameter around a uniform centre. Signs
// are balanced overall (+1 / -1 counts equal).
VortexConfig make_clustered(std::size_t n_free, std::span<const std::size_t> cluster_sizes,
                            double diameter, Rng& rng);

// Real-basis coefficients of (1/sqrt N) sum_i xi_i delta_{x_i} for
// 0 < |l| <= cutoff; the mean mode is dropped.
SpectralField empirical_vorticity(const VortexConfig& c, int cutoff);

}  // namespace vortex
