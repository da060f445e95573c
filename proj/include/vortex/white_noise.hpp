#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "vortex/config.hpp"
#include "vortex/green.hpp"
#include "vortex/rng.hpp"
#include "vortex/spectral_field.hpp"

namespace vortex {

// iid N(0,1) coefficients over 0 < |k| <= cutoff.
SpectralField sample_truncated_wn(int cutoff, Rng& rng);

// (1/8pi^2) sum_k (c_k^2 - 1) / |k|^2
double renormalized_energy(const SpectralField& f);

// <w_N (x) w_N, G> = -(1/4pi^2) sum_k c_k^2 / |k|^2
double quad_green_truncated(const SpectralField& f);

struct LatticeSums {
    double L;   // (1/8pi^2)  sum 1/|k|^2
    double S4;  // (1/32pi^4) sum 1/|k|^4
};

LatticeSums lattice_sums(int cutoff);

// Radial C^2 cutoff: 1 on [0, r/2], 0 beyond r, quintic smoothstep between.
double bump(double rho, double radius);

// G_n(x) = G(x) (1 - chi(n x)), G_n(0) = 0.
class MollifiedGreen {
public:
    MollifiedGreen(int n, GreenEvaluator g, double radius = 0.1);

    int index() const noexcept { return n_; }
    double radius() const noexcept { return radius_; }
    // Value at a separation (minimum image taken).
    double operator()(Vec2 d) const;
    double operator()(Vec2 x, Vec2 y) const { return (*this)(x - y); }

private:
    int n_;
    double radius_;
    GreenEvaluator g_;
};

// Even convolution kernel f(x - y) on the torus.
using ConvolutionKernel = std::function<double(Vec2)>;

// Weights w_k = (1/M^2) sum_x f(x) cos(2 pi k.x) on the M x M grid x = j/M.
// With these, the grid double quadrature of f against a field of cutoff
// < M/2 collapses to sum_k w_k c_k^2.
std::vector<double> grid_kernel_weights(const ConvolutionKernel& f, int cutoff, int grid);

// Grid double quadrature (1/M^4) sum_{x,y} f(x-y) w(x) w(y), computed
// through grid_kernel_weights.
double quad_kernel_grid(const SpectralField& field, const std::vector<double>& weights);

struct MomentEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double mean_se = 0.0;      // standard error of the mean
    double variance_se = 0.0;  // standard error of the variance
    std::size_t samples = 0;
};

MomentEstimate moments(const std::vector<double>& values);

// Monte-Carlo mean and variance of <w_N (x) w_N, f> over truncated white
// noise; grid resolution defaults to 4 * cutoff.
MomentEstimate quad_kernel_mc(int cutoff, const ConvolutionKernel& f, std::size_t samples,
                              Rng& rng, int grid = 0);

struct ConditionedField {
    SpectralField field;
    std::size_t attempts;
    double energy;
};

ConditionedField condition_wn(int cutoff, const EnergyWindow& window, Rng& rng,
                              std::size_t max_attempts);

// Deterministic field with c_k^2 = 1 + c for all k, whose renormalized
// energy lies inside [a + d, b - d], d = (b - a)/5. Windows wider than 1 are
// shrunk to [a, a + 1] first.
SpectralField support_witness(EnergyWindow window, int cutoff);

}  // namespace vortex
