#include "vortex/spectral_field.hpp"

#include <numbers>

#include "vortex/error.hpp"

namespace vortex {

SpectralField::SpectralField(int cutoff) : modes_(lattice(cutoff)), coeffs_(modes_->size(), 0.0) {}

SpectralField::SpectralField(int cutoff, std::vector<double> coeffs)
    : modes_(lattice(cutoff)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != modes_->size())
        throw InvalidArgument("SpectralField: coefficient count does not match the cutoff");
}

double SpectralField::coeff(WaveIndex k) const noexcept {
    const auto i = modes_->find(k);
    return i == IndexSet::npos ? 0.0 : coeffs_[i];
}

std::complex<double> SpectralField::complex_coeff(WaveIndex k) const noexcept {
    if (k.is_zero()) return 0.0;
    const WaveIndex p = k.positive_half() ? k : -k;
    const std::complex<double> c{coeff(p), coeff(-p)};
    const auto v = c / std::numbers::sqrt2;
    return k.positive_half() ? v : std::conj(v);
}

}  // namespace vortex
