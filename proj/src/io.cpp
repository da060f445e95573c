#include "vortex/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vortex/error.hpp"

namespace vortex::io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double to_double(const std::string& s, const fs::path& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
}

// Rows of a CSV with the given header, parsed to doubles.
std::vector<std::vector<double>> read_table(const fs::path& path, const std::string& header) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != header)
        throw ParseError(path.string() + ": expected header '" + header + "'");
    const std::size_t cols = split(header, ',').size();
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != cols)
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(cols) + " columns");
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(to_double(c, path, lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void Manifest::set(const std::string& key, const std::string& value) {
    if (key.empty() || key.find_first_of("=\n") != std::string::npos)
        throw InvalidArgument("manifest key '" + key + "' is not valid");
    if (value.find('\n') != std::string::npos)
        throw InvalidArgument("manifest value for '" + key + "' contains a newline");
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

std::optional<std::string> Manifest::get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

void Manifest::write(const fs::path& path) const {
    auto out = open_out(path);
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

Manifest Manifest::read(const fs::path& path) {
    auto in = open_in(path);
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(path.string() + ": line without '='");
        m.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

std::string content_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_config_csv(const fs::path& path, const VortexConfig& c) {
    auto out = open_out(path);
    out << "xi,x1,x2\n";
    for (std::size_t i = 0; i < c.size(); ++i)
        out << fmt(c.intensity(i)) << ',' << fmt(c.position(i).x) << ',' << fmt(c.position(i).y)
            << '\n';
}

VortexConfig read_config_csv(const fs::path& path, IntensityLaw law) {
    const auto rows = read_table(path, "xi,x1,x2");
    if (rows.empty()) throw ParseError(path.string() + ": no vortices");
    std::vector<Vec2> x;
    std::vector<double> xi;
    for (const auto& r : rows) {
        xi.push_back(r[0]);
        x.push_back({r[1], r[2]});
    }
    return VortexConfig(std::move(x), std::move(xi), law);
}

void write_field_csv(const fs::path& path, const SpectralField& f) {
    auto out = open_out(path);
    out << "k1,k2,coeff\n";
    const auto c = f.coeffs();
    for (std::size_t i = 0; i < f.size(); ++i)
        out << f.modes()[i].k1 << ',' << f.modes()[i].k2 << ',' << fmt(c[i]) << '\n';
}

SpectralField read_field_csv(const fs::path& path) {
    const auto rows = read_table(path, "k1,k2,coeff");
    if (rows.empty()) throw ParseError(path.string() + ": empty field");
    std::int64_t max2 = 0;
    std::vector<std::pair<WaveIndex, double>> entries;
    for (const auto& r : rows) {
        if (r[0] != std::floor(r[0]) || r[1] != std::floor(r[1]))
            throw ParseError(path.string() + ": non-integer wave index");
        WaveIndex k{static_cast<int>(r[0]), static_cast<int>(r[1])};
        if (k.is_zero()) throw ParseError(path.string() + ": zero wave index");
        max2 = std::max(max2, k.norm2());
        entries.emplace_back(k, r[2]);
    }
    int cutoff = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max2))));
    while (std::int64_t(cutoff) * cutoff < max2) ++cutoff;
    SpectralField f(cutoff);
    if (entries.size() != f.size())
        throw ParseError(path.string() + ": expected all " + std::to_string(f.size()) +
                         " modes of cutoff " + std::to_string(cutoff));
    std::vector<bool> seen(f.size(), false);
    for (const auto& [k, v] : entries) {
        const auto i = f.modes().find(k);
        if (seen[i]) throw ParseError(path.string() + ": duplicate wave index");
        seen[i] = true;
        f.coeffs()[i] = v;
    }
    return f;
}

void write_trajectory_csv(const fs::path& path, const TrajectoryRecord& traj) {
    auto out = open_out(path);
    out << "t,i,xi,x1,x2\n";
    for (std::size_t r = 0; r < traj.states.size(); ++r) {
        const auto& s = traj.states[r];
        const std::string t = fmt(traj.times[r]);
        for (std::size_t i = 0; i < s.size(); ++i)
            out << t << ',' << i << ',' << fmt(s.intensity(i)) << ',' << fmt(s.position(i).x)
                << ',' << fmt(s.position(i).y) << '\n';
    }
}

void write_diagnostics_csv(const fs::path& path, const TrajectoryRecord& traj) {
    auto out = open_out(path);
    out << "t,hamiltonian,drift,min_separation\n";
    for (const auto& d : traj.diagnostics)
        out << fmt(d.t) << ',' << fmt(d.hamiltonian) << ',' << fmt(d.drift) << ','
            << fmt(d.min_separation) << '\n';
}

void write_spectrum_csv(const fs::path& path, const ShellSpectrum& s) {
    auto out = open_out(path);
    out << "k,E,count\n";
    for (int k = 1; k <= s.k_max; ++k)
        out << k << ',' << fmt(s.at(k)) << ',' << s.count[static_cast<std::size_t>(k - 1)] << '\n';
}

ShellSpectrum read_spectrum_csv(const fs::path& path) {
    const auto rows = read_table(path, "k,E,count");
    ShellSpectrum s;
    s.k_max = static_cast<int>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][0] != static_cast<double>(i + 1))
            throw ParseError(path.string() + ": shells must be 1, 2, ... in order");
        s.energy.push_back(rows[i][1]);
        s.count.push_back(static_cast<std::size_t>(rows[i][2]));
    }
    return s;
}

void write_histogram_csv(const fs::path& path, const Histogram& h) {
    auto out = open_out(path);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out << fmt(h.edges[b]) << ',' << fmt(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
}

void write_slope_report(const fs::path& path, const SlopeFit& fit) {
    Manifest m;
    m.set("slope", fit.slope);
    m.set("intercept", fit.intercept);
    m.set("window_lo", fit.window_lo);
    m.set("window_hi", fit.window_hi);
    m.set("residual", fit.residual);
    m.set("shells", fit.shells);
    m.write(path);
}

void write_values_csv(const fs::path& path, const std::string& header,
                      const std::vector<double>& values) {
    auto out = open_out(path);
    out << header << '\n';
    for (double v : values) out << fmt(v) << '\n';
}

}  // namespace vortex::io
