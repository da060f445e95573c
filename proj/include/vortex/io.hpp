#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortex/config.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/spectral_field.hpp"
#include "vortex/spectrum.hpp"

namespace vortex::io {

namespace fs = std::filesystem;

// Shortest text that reads back to the same double (%.17g).
std::string fmt(double v);

// Plain-text key=value file, keys kept in insertion order.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value) { set(key, fmt(value)); }
    void set(const std::string& key, long value) { set(key, std::to_string(value)); }
    void set(const std::string& key, int value) { set(key, std::to_string(value)); }
    void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }

    std::optional<std::string> get(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
        return entries_;
    }

    void write(const fs::path& path) const;
    static Manifest read(const fs::path& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// 64-bit FNV-1a, printed as 16 hex digits.
std::string content_hash(const std::string& text);

void write_config_csv(const fs::path& path, const VortexConfig& c);
VortexConfig read_config_csv(const fs::path& path, IntensityLaw law = IntensityLaw::fixed);

void write_field_csv(const fs::path& path, const SpectralField& f);
SpectralField read_field_csv(const fs::path& path);

void write_trajectory_csv(const fs::path& path, const TrajectoryRecord& traj);
void write_diagnostics_csv(const fs::path& path, const TrajectoryRecord& traj);

void write_spectrum_csv(const fs::path& path, const ShellSpectrum& s);
ShellSpectrum read_spectrum_csv(const fs::path& path);
void write_histogram_csv(const fs::path& path, const Histogram& h);
void write_slope_report(const fs::path& path, const SlopeFit& fit);

// One column of numbers, header `value`.
void write_values_csv(const fs::path& path, const std::string& header,
                      const std::vector<double>& values);

}  // namespace vortex::io
