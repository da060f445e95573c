#include "vortex/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vortex/error.hpp"
#include "vortex/kernels.hpp"

namespace vortex {

const char* to_string(SpectrumNorm n) {
    return n == SpectrumNorm::shell_sum ? "shell-sum" : "per-mode";
}

double ShellSpectrum::total() const {
    CompensatedSum s;
    for (double e : energy) s.add(e);
    return s.value();
}

ShellSpectrum ShellSpectrum::normalized(SpectrumNorm n) const {
    if (n == norm) return *this;
    ShellSpectrum out = *this;
    out.norm = n;
    for (std::size_t i = 0; i < energy.size(); ++i) {
        if (count[i] == 0) continue;
        const double c = static_cast<double>(count[i]);
        out.energy[i] = n == SpectrumNorm::per_mode ? energy[i] / c : energy[i] * c;
    }
    return out;
}

namespace {

// Shell of a lattice point: k with k - 1/2 < |l| <= k + 1/2. Exact in
// integers: (2k-1)^2 < 4|l|^2 <= (2k+1)^2.
int shell_of(std::int64_t l2) {
    int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(l2)) + 0.5));
    while (k > 0 && 4 * l2 <= std::int64_t(2 * k - 1) * (2 * k - 1)) --k;
    while (4 * l2 > std::int64_t(2 * k + 1) * (2 * k + 1)) ++k;
    return k;
}

}  // namespace

ShellSpectrum energy_spectrum(const SpectralField& f, int k_max, SpectrumNorm norm) {
    if (k_max < 1 || k_max > f.cutoff())
        throw InvalidArgument("energy_spectrum: k_max must be in [1, field cutoff]");
    ShellSpectrum s;
    s.k_max = k_max;
    const auto shells = static_cast<std::size_t>(k_max);
    s.energy.assign(shells, 0.0);
    s.count.assign(shells, 0);
    std::vector<CompensatedSum> acc(shells);
    const auto& modes = f.modes();
    const auto c = f.coeffs();
    const std::int64_t kmax2 = std::int64_t(k_max) * k_max;
    // Summing over l and -l, |w^(l)|^2 + |w^(-l)|^2 = c_l^2 + c_{-l}^2, so
    // each real coefficient contributes c^2 / |l|^2 to its own shell.
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const std::int64_t l2 = modes[i].norm2();
        if (l2 > kmax2) continue;
        const auto k = static_cast<std::size_t>(shell_of(l2) - 1);
        acc[k].add(c[i] * c[i] / static_cast<double>(l2));
        ++s.count[k];
    }
    const double scale = 1.0 / (8.0 * pi * pi);
    for (std::size_t k = 0; k < shells; ++k) s.energy[k] = acc[k].value() * scale;
    return norm == SpectrumNorm::shell_sum ? s : s.normalized(norm);
}

ShellSpectrum average_spectra(std::span<const ShellSpectrum> spectra) {
    if (spectra.empty()) throw InvalidArgument("average_spectra: no spectra");
    ShellSpectrum out = spectra.front();
    for (const auto& s : spectra)
        if (s.k_max != out.k_max || s.norm != out.norm)
            throw InvalidArgument("average_spectra: spectra differ in shells or normalization");
    const double n = static_cast<double>(spectra.size());
    for (std::size_t k = 0; k < out.energy.size(); ++k) {
        CompensatedSum acc;
        for (const auto& s : spectra) acc.add(s.energy[k]);
        out.energy[k] = acc.value() / n;
    }
    return out;
}

SlopeFit fit_slope(const ShellSpectrum& s, double log_lo, double log_hi) {
    if (!(log_lo < log_hi)) throw FitDomain("fit_slope: empty window");
    std::vector<double> xs, ys;
    for (int k = 1; k <= s.k_max; ++k) {
        const double lk = std::log(static_cast<double>(k));
        if (lk < log_lo || lk > log_hi) continue;
        const double e = s.at(k);
        if (!(e > 0.0))
            throw FitDomain("fit_slope: nonpositive energy in shell " + std::to_string(k));
        xs.push_back(lk);
        ys.push_back(std::log(e));
    }
    if (xs.size() < 3)
        throw FitDomain("fit_slope: fewer than 3 shells in the window");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.window_lo = log_lo;
    fit.window_hi = log_hi;
    fit.shells = xs.size();
    return fit;
}

std::size_t Histogram::in_range() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Histogram histogram(std::span<const double> values, std::vector<double> edges) {
    if (edges.size() < 2) throw InvalidArgument("histogram: need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw InvalidArgument("histogram: edges must be strictly increasing");
    Histogram h;
    h.counts.assign(edges.size() - 1, 0);
    for (double v : values) {
        if (v < edges.front()) {
            ++h.underflow;
        } else if (v > edges.back()) {
            ++h.overflow;
        } else if (v == edges.back()) {
            ++h.counts.back();
        } else {
            const auto it = std::upper_bound(edges.begin(), edges.end(), v);
            ++h.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
        }
    }
    h.edges = std::move(edges);
    return h;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
    if (bins < 1 || !(lo < hi)) throw InvalidArgument("uniform_edges: need bins >= 1 and lo < hi");
    std::vector<double> e(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    e.back() = hi;
    return e;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidArgument("ks_distance: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

}  // namespace vortex
