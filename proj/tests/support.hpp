#pragma once

// Shared helpers for the unit tests: independent brute-force oracles that do
// not go through the library code paths under test.

#include <cmath>
#include <complex>
#include <vector>

#include "vortex/torus.hpp"

namespace testing {

// Direct Fourier series of G truncated at |k|^2 <= m^2, summed over the full
// lattice in complex form.
inline double green_series(vortex::Vec2 x, int m) {
    double s = 0.0;
    for (int a = -m; a <= m; ++a)
        for (int b = -m; b <= m; ++b) {
            const int q = a * a + b * b;
            if (q == 0 || q > m * m) continue;
            s += std::cos(vortex::two_pi * (a * x.x + b * x.y)) / q;
        }
    return -s / (4.0 * vortex::pi * vortex::pi);
}

// Sample mean and standard error.
struct Stat {
    double mean = 0.0, se = 0.0, var = 0.0, var_se = 0.0;
};

inline Stat stat(const std::vector<double>& v) {
    Stat s;
    const double n = static_cast<double>(v.size());
    for (double x : v) s.mean += x;
    s.mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = x - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    s.var = m2 / (n - 1.0);
    s.se = std::sqrt(s.var / n);
    m4 /= n;
    s.var_se = std::sqrt(std::max(0.0, (m4 - (m2 / n) * (m2 / n)) / n));
    return s;
}

inline double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace testing
