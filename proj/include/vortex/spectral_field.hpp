#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "vortex/torus.hpp"

namespace vortex {

// Truncated field sum_{0<|k|<=N} c_k e_k in the real basis. One real
// coefficient per member of lattice(N), in that set's order.
class SpectralField {
public:
    explicit SpectralField(int cutoff);  // all coefficients zero
    SpectralField(int cutoff, std::vector<double> coeffs);

    int cutoff() const noexcept { return modes_->cutoff(); }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const IndexSet& modes() const noexcept { return *modes_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<double> coeffs() noexcept { return coeffs_; }

    // Real-basis coefficient <w, e_k>; zero outside the cutoff.
    double coeff(WaveIndex k) const noexcept;
    // Complex coefficient int w(x) exp(-2 pi i k.x) dx; zero at k = 0.
    std::complex<double> complex_coeff(WaveIndex k) const noexcept;

    friend bool operator==(const SpectralField& a, const SpectralField& b) {
        return a.cutoff() == b.cutoff() && a.coeffs_ == b.coeffs_;
    }

private:
    std::shared_ptr<const IndexSet> modes_;
    std::vector<double> coeffs_;
};

}  // namespace vortex
