#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vortex/spectral_field.hpp"

namespace vortex {

enum class SpectrumNorm { shell_sum, per_mode };

const char* to_string(SpectrumNorm n);

// Integer shells (k - 1/2, k + 1/2] for k = 1..k_max, restricted to
// |l| <= k_max so that the shell energies add up to the full truncated sum.
struct ShellSpectrum {
    int k_max = 0;
    SpectrumNorm norm = SpectrumNorm::shell_sum;
    std::vector<double> energy;       // energy[k - 1]
    std::vector<std::size_t> count;   // lattice points in shell k

    double at(int k) const { return energy.at(static_cast<std::size_t>(k - 1)); }
    double total() const;  // sum of shell energies (shell_sum only)
    // Same shells under the other normalization.
    ShellSpectrum normalized(SpectrumNorm n) const;
};

// E(k) = (1/8 pi^2) sum_{l in shell k} |w^(l)|^2 / |l|^2.
ShellSpectrum energy_spectrum(const SpectralField& f, int k_max,
                              SpectrumNorm norm = SpectrumNorm::shell_sum);

// Shell-wise mean of spectra sharing k_max and normalization.
ShellSpectrum average_spectra(std::span<const ShellSpectrum> spectra);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root mean square of the log residuals
    double window_lo = 1.0;
    double window_hi = 3.0;
    std::size_t shells = 0;
};

// Least squares of log E(k) on log k over shells with log k in [lo, hi].
SlopeFit fit_slope(const ShellSpectrum& s, double log_lo = 1.0, double log_hi = 3.0);

// Bins are left-closed [e_i, e_{i+1}); the last bin also takes its right
// edge.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    std::size_t underflow = 0;
    std::size_t overflow = 0;

    std::size_t in_range() const;
};

Histogram histogram(std::span<const double> values, std::vector<double> edges);
std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::span<const double> a, std::span<const double> b);

}  // namespace vortex
