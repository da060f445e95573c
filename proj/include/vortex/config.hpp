#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vortex/torus.hpp"

namespace vortex {

enum class IntensityLaw { gaussian, rademacher, fixed };

const char* to_string(IntensityLaw law);
IntensityLaw parse_intensity_law(const std::string& s);

// N vortices: canonical torus positions and unscaled intensities xi_i.
// The 1/sqrt(N) scaling of the empirical vorticity is applied by the
// operations, never stored.
class VortexConfig {
public:
    VortexConfig(std::vector<Vec2> positions, std::vector<double> intensities,
                 IntensityLaw law = IntensityLaw::fixed);

    std::size_t size() const noexcept { return positions_.size(); }
    std::span<const Vec2> positions() const noexcept { return positions_; }
    std::span<const double> intensities() const noexcept { return intensities_; }
    const Vec2& position(std::size_t i) const noexcept { return positions_[i]; }
    double intensity(std::size_t i) const noexcept { return intensities_[i]; }
    IntensityLaw law() const noexcept { return law_; }

    // Same intensities, new positions (canonicalised).
    VortexConfig with_positions(std::vector<Vec2> positions) const;

    // Smallest minimum-image distance over pairs, with the attaining pair.
    struct ClosestPair {
        double distance = std::numeric_limits<double>::infinity();
        std::size_t i = 0, j = 0;
    };
    ClosestPair closest_pair() const;

    friend bool operator==(const VortexConfig&, const VortexConfig&) = default;

private:
    std::vector<Vec2> positions_;
    std::vector<double> intensities_;
    IntensityLaw law_;
};

// Closed energy interval [a, b]; either end may be infinite.
struct EnergyWindow {
    double a = -std::numeric_limits<double>::infinity();
    double b = std::numeric_limits<double>::infinity();

    EnergyWindow() = default;
    EnergyWindow(double lo, double hi);

    static EnergyWindow everything() { return {}; }
    bool contains(double e) const noexcept { return e >= a && e <= b; }
    double width() const noexcept { return b - a; }
};

// "a,b" with optional "inf" / "-inf".
EnergyWindow parse_window(const std::string& s);

enum class KernelChoice { torus_green, min_image_log };

const char* to_string(KernelChoice k);
KernelChoice parse_kernel_choice(const std::string& s);

// Whether interaction_energy uses xi_i as stored or xi_i / sqrt(N).
enum class IntensityScale { raw, sqrt_n };

}  // namespace vortex
