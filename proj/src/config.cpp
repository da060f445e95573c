#include "vortex/config.hpp"

#include <cmath>

#include "vortex/error.hpp"

namespace vortex {

const char* to_string(IntensityLaw law) {
    switch (law) {
        case IntensityLaw::gaussian: return "gaussian";
        case IntensityLaw::rademacher: return "rademacher";
        case IntensityLaw::fixed: return "fixed";
    }
    return "unknown";
}

IntensityLaw parse_intensity_law(const std::string& s) {
    if (s == "gaussian") return IntensityLaw::gaussian;
    if (s == "rademacher") return IntensityLaw::rademacher;
    if (s == "fixed") return IntensityLaw::fixed;
    throw ParseError("unknown intensity law '" + s + "' (gaussian|rademacher|fixed)");
}

VortexConfig::VortexConfig(std::vector<Vec2> positions, std::vector<double> intensities,
                           IntensityLaw law)
    : positions_(std::move(positions)), intensities_(std::move(intensities)), law_(law) {
    if (positions_.empty()) throw InvalidArgument("VortexConfig: need at least one vortex");
    if (positions_.size() != intensities_.size())
        throw InvalidArgument("VortexConfig: positions and intensities differ in length");
    for (auto& p : positions_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvalidArgument("VortexConfig: non-finite position");
        p = canonical(p);
    }
}

VortexConfig VortexConfig::with_positions(std::vector<Vec2> positions) const {
    return VortexConfig(std::move(positions), intensities_, law_);
}

VortexConfig::ClosestPair VortexConfig::closest_pair() const {
    ClosestPair best;
    for (std::size_t i = 0; i < positions_.size(); ++i)
        for (std::size_t j = i + 1; j < positions_.size(); ++j) {
            const double d = torus_distance(positions_[i], positions_[j]);
            if (d < best.distance) best = {d, i, j};
        }
    return best;
}

EnergyWindow::EnergyWindow(double lo, double hi) : a(lo), b(hi) {
    if (!(lo < hi)) throw InvalidArgument("EnergyWindow: need a < b");
}

namespace {

double parse_bound(const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("bad window bound '" + s + "'");
    }
    if (used != s.size()) throw ParseError("bad window bound '" + s + "'");
    return v;
}

}  // namespace

EnergyWindow parse_window(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ParseError("window must be 'a,b', got '" + s + "'");
    const double a = parse_bound(s.substr(0, comma));
    const double b = parse_bound(s.substr(comma + 1));
    if (!(a < b)) throw ParseError("window needs a < b, got '" + s + "'");
    return EnergyWindow(a, b);
}

const char* to_string(KernelChoice k) {
    return k == KernelChoice::torus_green ? "torus-green" : "min-image-log";
}

KernelChoice parse_kernel_choice(const std::string& s) {
    if (s == "torus-green") return KernelChoice::torus_green;
    if (s == "min-image-log") return KernelChoice::min_image_log;
    throw ParseError("unknown kernel '" + s + "' (torus-green|min-image-log)");
}

}  // namespace vortex
