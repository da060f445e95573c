#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "vortex/torus.hpp"

namespace vortex {

// Torus Green function G (zero mean, Laplacian G = delta_0 - 1) and the
// Biot-Savart kernel K = (d2 G, -d1 G).
//
// Every backend works on a separation already reduced to [-1/2,1/2)^2 and
// away from the origin; GreenEvaluator::green / biot_savart do the reduction
// and the singularity check.

// Plain Fourier truncation at |k| <= cutoff. Slow; used as an oracle.
struct SpectralGreen {
    int cutoff = 0;
    std::shared_ptr<const IndexSet> modes;  // positive half only is used

    double green(Vec2 d) const;
    Vec2 kernel(Vec2 d) const;
};

// Gaussian splitting: real-space images with E1 on the short-range side,
// a Gaussian-damped Fourier series on the long-range side.
struct EwaldGreen {
    double splitting = 14.0;   // eta: short part decays like exp(-eta r^2)
    int image_range = 2;       // images n with |n|_inf <= image_range
    int fourier_cutoff = 8;    // modes with |k| <= fourier_cutoff

    struct Mode {
        int k1, k2;
        double weight;  // exp(-pi^2 |k|^2 / eta) / |k|^2
    };
    std::vector<Mode> modes;  // positive half-lattice only

    double green(Vec2 d) const;
    Vec2 kernel(Vec2 d) const;
    double short_range(Vec2 d) const;
    double long_range(Vec2 d) const;
};

// G(z) = (1/2pi) sum_{|n|_inf<=1} ln|z - n| - |z|^2/4 + sum_j a_j Re z^{4j}
// on the fundamental cell. The remainder is harmonic (up to the quadratic)
// in |z| < 2, and square-lattice symmetry leaves only powers z^{4j} with
// real coefficients. Coefficients are fitted from an Ewald evaluator.
struct ExpansionGreen {
    static constexpr int terms = 10;
    std::array<double, terms + 1> coeff{};  // coeff[0] is the constant

    double green(Vec2 d) const noexcept {
        double prod = 1.0;
        for (int a = -1; a <= 1; ++a) {
            const double dx = d.x - a;
            for (int b = -1; b <= 1; ++b) {
                const double dy = d.y - b;
                prod *= dx * dx + dy * dy;
            }
        }
        // w = z^4
        const double x2 = d.x * d.x, y2 = d.y * d.y;
        const double z2r = x2 - y2, z2i = 2.0 * d.x * d.y;
        const double wr = z2r * z2r - z2i * z2i, wi = 2.0 * z2r * z2i;
        double pr = coeff[terms], pi_ = 0.0;
        for (int j = terms - 1; j >= 0; --j) {
            const double tr = pr * wr - pi_ * wi + coeff[j];
            pi_ = pr * wi + pi_ * wr;
            pr = tr;
        }
        return std::log(prod) / (4.0 * pi) - 0.25 * (x2 + y2) + pr;
    }

    Vec2 kernel(Vec2 d) const noexcept {
        double gx = 0.0, gy = 0.0;
        for (int a = -1; a <= 1; ++a) {
            const double dx = d.x - a;
            for (int b = -1; b <= 1; ++b) {
                const double dy = d.y - b;
                const double inv = 1.0 / (dx * dx + dy * dy);
                gx += dx * inv;
                gy += dy * inv;
            }
        }
        gx *= 1.0 / two_pi;
        gy *= 1.0 / two_pi;
        gx -= 0.5 * d.x;
        gy -= 0.5 * d.y;
        // F'(z) = sum_j 4j a_j z^{4j-1} = z^3 * sum_j 4j a_j w^{j-1}
        const double x2 = d.x * d.x, y2 = d.y * d.y;
        const double z2r = x2 - y2, z2i = 2.0 * d.x * d.y;
        const double wr = z2r * z2r - z2i * z2i, wi = 2.0 * z2r * z2i;
        double pr = 4.0 * terms * coeff[terms], pi_ = 0.0;
        for (int j = terms - 1; j >= 1; --j) {
            const double tr = pr * wr - pi_ * wi + 4.0 * j * coeff[j];
            pi_ = pr * wi + pi_ * wr;
            pr = tr;
        }
        const double z3r = z2r * d.x - z2i * d.y, z3i = z2r * d.y + z2i * d.x;
        const double fr = pr * z3r - pi_ * z3i, fi = pr * z3i + pi_ * z3r;
        gx += fr;
        gy -= fi;
        return {gy, -gx};
    }
};

enum class GreenBackend { spectral, ewald, expansion };

const char* to_string(GreenBackend b);

class GreenEvaluator {
public:
    using Impl = std::variant<SpectralGreen, EwaldGreen, ExpansionGreen>;

    static constexpr double default_guard = 1e-10;

    // Reference truncation at |k| <= cutoff.
    static GreenEvaluator spectral(int cutoff);
    // Ewald splitting sized for the target absolute tolerance.
    static GreenEvaluator ewald(double tolerance = 1e-14);
    // Near-image expansion fitted from an Ewald evaluator (production).
    static GreenEvaluator expansion();

    GreenBackend backend() const noexcept { return static_cast<GreenBackend>(impl_.index()); }
    // Declared absolute accuracy of green() and biot_savart() for
    // separations of at least reference_distance. The truncated series
    // converges more slowly near the origin; its bound grows like 1/r.
    static constexpr double reference_distance = 0.02;
    double tolerance() const noexcept { return tolerance_; }
    double kernel_tolerance() const noexcept { return kernel_tolerance_; }
    double tolerance_at(double distance) const noexcept { return tolerance_ * distance_factor(distance); }
    double kernel_tolerance_at(double distance) const noexcept {
        return kernel_tolerance_ * distance_factor(distance);
    }
    double guard() const noexcept { return guard_; }
    GreenEvaluator with_guard(double guard) const;

    // Checked evaluation at an arbitrary torus point or separation.
    double green(Vec2 x) const;
    Vec2 biot_savart(Vec2 x) const;

    const Impl& impl() const noexcept { return impl_; }
    std::string describe() const;

private:
    GreenEvaluator(Impl impl, double tolerance, double kernel_tolerance)
        : impl_(std::move(impl)), tolerance_(tolerance), kernel_tolerance_(kernel_tolerance) {}
    Vec2 checked_separation(Vec2 x) const;
    double distance_factor(double distance) const noexcept {
        return backend() == GreenBackend::spectral ? reference_distance / distance : 1.0;
    }

    Impl impl_;
    double tolerance_;
    double kernel_tolerance_;
    double guard_ = default_guard;
};

// Fit the near-image expansion from a reference evaluator by sampling the
// regular remainder on the circle |z| = radius.
ExpansionGreen fit_expansion(const EwaldGreen& reference, double radius = 0.8,
                             int samples = 256);

// Grid-DFT validation of an evaluator. The grid is offset by half a cell so
// the origin is never sampled; the periodic aliasing of the exact
// coefficients onto the grid is summed in closed form and removed before
// comparing with -1/(4 pi^2 |k|^2).
struct DftReport {
    double max_relative_error = 0.0;
    WaveIndex worst{};
    double mean = 0.0;  // grid average of G
};

DftReport validate_dft(const GreenEvaluator& g, int grid, int kmax);

// Sum over m in Z^2 of (-1)^{m1+m2} / |k/M + m|^2, zero term skipped.
double alternating_alias_sum(WaveIndex k, int grid);

}  // namespace vortex
