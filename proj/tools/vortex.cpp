// Command-line front end: samplers, dynamics, analysis, the identity suite
// and the scripted experiments. Exit codes: 0 ok, 1 internal error, 2 usage
// or input error, 3 acceptance failure, 4 near-collision, 5 verification
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "vortex/dynamics.hpp"
#include "vortex/error.hpp"
#include "vortex/experiments.hpp"
#include "vortex/gas.hpp"
#include "vortex/io.hpp"
#include "vortex/kernels.hpp"
#include "vortex/rng.hpp"
#include "vortex/spectrum.hpp"
#include "vortex/verify.hpp"
#include "vortex/white_noise.hpp"

namespace fs = std::filesystem;
using namespace vortex;

namespace {

enum Exit { ok = 0, internal = 1, usage = 2, acceptance = 3, collision = 4, verify_failed = 5 };

constexpr const char* out_root_env = "VORTEX_OUT_ROOT";

struct UsageError : Error {
    using Error::Error;
};

fs::path out_root() {
    const char* root = std::getenv(out_root_env);
    return fs::path(root && *root ? root : "runs");
}

fs::path output_dir(const std::string& out, const std::string& id) {
    return out.empty() ? out_root() / id : fs::path(out);
}

fs::path output_dir(const std::string& out, const std::string& id, std::uint64_t seed) {
    return out.empty() ? out_root() / ExperimentManifest::directory_name(id, seed) : fs::path(out);
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ParseError("cannot read " + p.string());
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

// ------------------------------------------------------------------ sample

struct SampleArgs {
    std::string kind = "vortex";
    std::size_t n = 200;
    std::string law = "rademacher";
    std::string window;
    std::string energy = "hamiltonian";
    std::string kernel = "torus-green";
    std::size_t max_attempts = 1000000;
    std::uint64_t seed = 7;
    std::string out;
};

int cmd_sample(const SampleArgs& a) {
    const fs::path dir = output_dir(a.out, "sample", a.seed);
    const EnergyWindow window = a.window.empty() ? EnergyWindow{} : parse_window(a.window);
    Rng rng = stream_rng(a.seed, 0);
    io::Manifest m;
    m.set("command", "sample");
    m.set("kind", a.kind);
    m.set("seed", std::to_string(a.seed));
    m.set("window", io::fmt(window.a) + "," + io::fmt(window.b));
    m.set("max_attempts", a.max_attempts);
    std::size_t attempts = 1;
    double energy = 0.0;
    if (a.kind == "vortex") {
        const IntensityLaw law = parse_intensity_law(a.law);
        const KernelChoice kernel = parse_kernel_choice(a.kernel);
        if (a.energy != "hamiltonian" && a.energy != "interaction")
            throw UsageError("--energy must be hamiltonian or interaction");
        const GreenEvaluator g = GreenEvaluator::expansion();
        EnergyFunction fn = [&](const VortexConfig& c) {
            return a.energy == "hamiltonian" ? hamiltonian(c, g)
                                             : interaction_energy(c, kernel, IntensityScale::sqrt_n, &g);
        };
        auto res = condition_energy([&](Rng& r) { return sample_lambda(a.n, law, r); }, window, fn,
                                    a.max_attempts, rng);
        attempts = res.attempts;
        energy = res.energy;
        io::write_config_csv(dir / "config.csv", res.config);
        m.set("n", a.n);
        m.set("intensity_law", a.law);
        m.set("energy", a.energy);
        m.set("kernel", a.energy == "hamiltonian" ? "torus-green" : to_string(kernel));
        m.set("green", g.describe());
        m.set("outputs", "config.csv");
    } else if (a.kind == "wn") {
        if (a.n < 1) throw UsageError("--n (cutoff) must be >= 1");
        auto res = condition_wn(static_cast<int>(a.n), window, rng, a.max_attempts);
        attempts = res.attempts;
        energy = res.energy;
        io::write_field_csv(dir / "field.csv", res.field);
        m.set("n_cut", a.n);
        m.set("energy", "renormalized");
        m.set("outputs", "field.csv");
    } else {
        throw UsageError("--kind must be vortex or wn");
    }
    m.set("attempts", attempts);
    m.set("energy_value", energy);
    m.write(dir / "manifest.txt");
    std::printf("attempts=%zu acceptance=%s energy=%s dir=%s\n", attempts,
                io::fmt(1.0 / static_cast<double>(attempts)).c_str(), io::fmt(energy).c_str(),
                dir.string().c_str());
    return ok;
}

// ------------------------------------------------------------------ evolve

struct EvolveArgs {
    std::string in;
    double h = 1e-4;
    long steps = 0;
    long record_every = 100;
    double guard = default_collision_guard;
    bool reverse = false;
    std::string out;
};

int cmd_evolve(const EvolveArgs& a) {
    if (a.steps < 1) throw UsageError("--steps must be >= 1");
    if (!(a.h > 0.0)) throw UsageError("--h must be > 0");
    const VortexConfig c = io::read_config_csv(a.in);
    const GreenEvaluator g = GreenEvaluator::expansion();
    const fs::path dir = output_dir(a.out, "evolve");
    io::Manifest m;
    m.set("command", "evolve");
    m.set("in", a.in);
    m.set("n", c.size());
    m.set("h", a.h);
    m.set("steps", a.steps);
    m.set("record_every", a.record_every);
    m.set("guard", a.guard);
    m.set("reverse", a.reverse ? "true" : "false");
    m.set("scheme", "heun");
    m.set("green", g.describe());
    m.set("status", "running");
    m.write(dir / "manifest.txt");
    EvolveOptions opt;
    opt.guard = a.guard;
    opt.reverse = a.reverse;
    try {
        const auto traj = evolve(c, a.h, a.steps, g, a.record_every, opt);
        io::write_trajectory_csv(dir / "trajectory.csv", traj);
        io::write_diagnostics_csv(dir / "diagnostics.csv", traj);
        io::write_config_csv(dir / "final.csv", traj.final_state());
        m.set("status", "ok");
        m.set("max_abs_drift", traj.max_abs_drift());
        m.set("outputs", "trajectory.csv,diagnostics.csv,final.csv");
        m.write(dir / "manifest.txt");
        std::printf("steps=%ld records=%zu max_abs_drift=%s dir=%s\n", a.steps, traj.times.size(),
                    io::fmt(traj.max_abs_drift()).c_str(), dir.string().c_str());
    } catch (const NearCollision& e) {
        m.set("status", "failed");
        m.set("failure", e.what());
        m.write(dir / "manifest.txt");
        throw;
    }
    return ok;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
    std::string in;
    int k_max = 32;
    std::string norm = "shell-sum";
    double fit_lo = 1.0, fit_hi = 3.0;
    std::string out;
};

int cmd_spectrum(const SpectrumArgs& a) {
    const std::string header = first_line(a.in);
    SpectralField field(1);
    if (header == "xi,x1,x2") {
        field = empirical_vorticity(io::read_config_csv(a.in), a.k_max);
    } else if (header == "k1,k2,coeff") {
        field = io::read_field_csv(a.in);
    } else {
        throw ParseError(a.in + ": expected a configuration or field CSV");
    }
    SpectrumNorm norm;
    if (a.norm == "shell-sum")
        norm = SpectrumNorm::shell_sum;
    else if (a.norm == "per-mode")
        norm = SpectrumNorm::per_mode;
    else
        throw UsageError("--norm must be shell-sum or per-mode");
    const auto s = energy_spectrum(field, a.k_max, norm);
    const fs::path dir = output_dir(a.out, "spectrum");
    io::write_spectrum_csv(dir / "spectrum.csv", s);
    io::Manifest m;
    m.set("command", "spectrum");
    m.set("in", a.in);
    m.set("k_max", a.k_max);
    m.set("norm", a.norm);
    std::string outputs = "spectrum.csv";
    try {
        const auto fit = fit_slope(s, a.fit_lo, a.fit_hi);
        io::write_slope_report(dir / "slope.txt", fit);
        outputs += ",slope.txt";
        std::printf("slope=%s ", io::fmt(fit.slope).c_str());
    } catch (const FitDomain& e) {
        m.set("fit", e.what());
        std::printf("slope=unavailable ");
    }
    m.set("outputs", outputs);
    m.write(dir / "manifest.txt");
    int nonzero = 0;
    for (double e : s.energy) nonzero += e != 0.0;
    std::printf("nonzero_shells=%d dir=%s\n", nonzero, dir.string().c_str());
    return ok;
}

// -------------------------------------------------------------------- hist

struct HistArgs {
    std::string in;
    std::string column;
    std::size_t bins = 60;
    std::optional<double> lo, hi;
    std::string out;
};

int cmd_hist(const HistArgs& a) {
    std::ifstream in(a.in);
    if (!in) throw ParseError("cannot read " + a.in);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    {
        std::istringstream is(line);
        std::string cell;
        while (std::getline(is, cell, ',')) names.push_back(cell);
    }
    std::size_t col = names.size() - 1;
    if (!a.column.empty()) {
        const auto it = std::find(names.begin(), names.end(), a.column);
        if (it == names.end()) throw ParseError(a.in + ": no column '" + a.column + "'");
        col = static_cast<std::size_t>(it - names.begin());
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string cell;
        for (std::size_t c = 0; c <= col; ++c)
            if (!std::getline(is, cell, ',')) throw ParseError(a.in + ": short row");
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ParseError(a.in + ": bad number '" + cell + "'");
        }
    }
    double lo = a.lo.value_or(0.0), hi = a.hi.value_or(1.0);
    if (!values.empty()) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        if (!a.lo) lo = *mn;
        if (!a.hi) hi = *mx > lo ? *mx : lo + 1.0;
    }
    const auto h = histogram(values, uniform_edges(lo, hi, a.bins));
    const fs::path dir = output_dir(a.out, "hist");
    io::write_histogram_csv(dir / "histogram.csv", h);
    io::Manifest m;
    m.set("command", "hist");
    m.set("in", a.in);
    m.set("column", names[col]);
    m.set("bins", a.bins);
    m.set("lo", lo);
    m.set("hi", hi);
    m.set("underflow", h.underflow);
    m.set("overflow", h.overflow);
    m.set("outputs", "histogram.csv");
    m.write(dir / "manifest.txt");
    std::printf("values=%zu in_range=%zu underflow=%zu overflow=%zu dir=%s\n", values.size(),
                h.in_range(), h.underflow, h.overflow, dir.string().c_str());
    return ok;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const VerifyOptions& o) {
    bool all = true;
    for (const auto& c : run_identity_checks(o)) {
        std::printf("%-28s residual=%s tolerance=%s %s  %s\n", c.name.c_str(),
                    io::fmt(c.residual).c_str(), io::fmt(c.tolerance).c_str(),
                    c.passed ? "PASS" : "FAIL", c.detail.c_str());
        if (!c.passed) {
            std::fprintf(stderr, "verification failed: %s\n", c.name.c_str());
            all = false;
        }
    }
    return all ? ok : verify_failed;
}

// -------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string id;
    std::string profile = "desk";
    std::uint64_t seed = 7;
    std::string out;
    std::optional<std::size_t> samples;
    std::optional<long> steps;
};

int cmd_experiment(const ExperimentArgs& a) {
    if (a.profile != "desk" && a.profile != "full") throw UsageError("--profile must be desk or full");
    const bool full = a.profile == "full";
    const fs::path root = a.out.empty() ? out_root() : fs::path(a.out);
    auto start = [&](const std::string& id, io::Manifest params) {
        params.set("profile", a.profile);
        return ExperimentManifest(id, a.seed, params, root);
    };
    if (a.id == "free-ensemble") {
        FreeEnsembleParams p;
        p.seed = a.seed;
        p.samples = a.samples.value_or(full ? 10000 : 2000);
        auto run = start(a.id, to_manifest(p));
        const auto r = exp_free_ensemble(p, &run);
        std::printf("threshold=%s scaled_quantile=%s top_slope=%s dir=%s\n", io::fmt(r.threshold).c_str(),
                    io::fmt(r.scaled_quantile).c_str(), io::fmt(r.top_slope.slope).c_str(),
                    run.directory().string().c_str());
    } else if (a.id == "clustered-evolution") {
        ClusteredParams p = full ? ClusteredParams::full() : ClusteredParams::desk();
        p.seed = a.seed;
        if (a.samples) p.samples = *a.samples;
        if (a.steps) p.steps = *a.steps;
        auto run = start(a.id, to_manifest(p));
        const auto r = exp_clustered_evolution(p, &run);
        std::printf("initial_slope=%s final_slope=%s free_slope=%s excluded=%zu dir=%s\n",
                    io::fmt(r.initial_slope.slope).c_str(), io::fmt(r.final_slope.slope).c_str(),
                    io::fmt(r.free_slope.slope).c_str(), r.excluded, run.directory().string().c_str());
    } else if (a.id == "hamiltonian-convergence") {
        ConvergenceParams p;
        p.seed = a.seed;
        p.samples = a.samples.value_or(full ? 10000 : 2000);
        auto run = start(a.id, to_manifest(p));
        const auto r = exp_hamiltonian_convergence(p, &run);
        for (const auto& row : r.rows)
            std::printf("n=%zu ks=%s mass_gap=%s\n", row.n, io::fmt(row.ks).c_str(), io::fmt(row.mass_gap).c_str());
        std::printf("dir=%s\n", run.directory().string().c_str());
    } else if (a.id == "triviality") {
        TrivialityParams p;
        p.seed = a.seed;
        p.samples = a.samples.value_or(1000);
        auto run = start(a.id, to_manifest(p));
        const auto r = exp_triviality(p, &run);
        for (const auto& row : r.rows)
            std::printf("n=%zu estimate=%s se=%s acceptance=%s\n", row.n, io::fmt(row.estimate).c_str(),
                        io::fmt(row.se).c_str(), io::fmt(row.acceptance).c_str());
        std::printf("dir=%s\n", run.directory().string().c_str());
    } else {
        throw UsageError("unknown experiment '" + a.id +
                         "' (free-ensemble|clustered-evolution|hamiltonian-convergence|triviality)");
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-vortex statistical mechanics on the flat torus"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML file of flag values; flags on the command line win");
    app.allow_config_extras(false);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: all cores); outputs do not depend on it")
        ->check(CLI::NonNegativeNumber);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Draw a vortex configuration or white-noise field");
    sample->add_option("--kind", sa.kind, "vortex or wn")->check(CLI::IsMember({"vortex", "wn"}));
    sample->add_option("--n", sa.n, "Vortex count, or the cutoff for wn")->check(CLI::PositiveNumber);
    sample->add_option("--law", sa.law, "gaussian or rademacher")->check(CLI::IsMember({"gaussian", "rademacher"}));
    sample->add_option("--window", sa.window, "Energy window a,b (inf allowed)");
    sample->add_option("--energy", sa.energy, "Conditioning energy for vortices: hamiltonian or interaction");
    sample->add_option("--kernel", sa.kernel, "Interaction kernel: torus-green or min-image-log");
    sample->add_option("--max-attempts", sa.max_attempts)->check(CLI::PositiveNumber);
    sample->add_option("--seed", sa.seed);
    sample->add_option("--out", sa.out, "Output directory");

    EvolveArgs ea;
    auto* evolvec = app.add_subcommand("evolve", "Integrate the point-vortex dynamics (Heun)");
    evolvec->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    evolvec->add_option("--in", ea.in, "Configuration CSV (xi,x1,x2)")->required();
    evolvec->add_option("--h", ea.h, "Step size");
    evolvec->add_option("--steps", ea.steps, "Number of steps (>= 1)")->required();
    evolvec->add_option("--record-every", ea.record_every)->check(CLI::PositiveNumber);
    evolvec->add_option("--guard", ea.guard, "Near-collision distance");
    evolvec->add_flag("--reverse", ea.reverse, "Integrate with the velocity reversed");
    evolvec->add_option("--out", ea.out, "Output directory");

    SpectrumArgs pa;
    auto* spectrum = app.add_subcommand("spectrum", "Shell energy spectrum of a configuration or field");
    spectrum->add_option("--in", pa.in, "Configuration or field CSV")->required();
    spectrum->add_option("--k-max", pa.k_max)->check(CLI::PositiveNumber);
    spectrum->add_option("--norm", pa.norm, "shell-sum or per-mode");
    spectrum->add_option("--fit-lo", pa.fit_lo, "Slope window lower end in log k");
    spectrum->add_option("--fit-hi", pa.fit_hi, "Slope window upper end in log k");
    spectrum->add_option("--out", pa.out, "Output directory");

    HistArgs ha;
    double hist_lo = 0.0, hist_hi = 0.0;
    auto* hist = app.add_subcommand("hist", "Histogram one column of a CSV");
    hist->add_option("--in", ha.in)->required();
    hist->add_option("--column", ha.column, "Column name (default: last)");
    hist->add_option("--bins", ha.bins)->check(CLI::PositiveNumber);
    auto* lo_opt = hist->add_option("--lo", hist_lo);
    auto* hi_opt = hist->add_option("--hi", hist_hi);
    hist->add_option("--out", ha.out, "Output directory");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Run the exact-identity suite");
    verify->add_option("--seed", vo.seed);
    verify->add_option("--configs", vo.configs)->check(CLI::PositiveNumber);
    verify->add_option("--fields", vo.fields)->check(CLI::PositiveNumber);
    verify->add_option("--variance-samples", vo.variance_samples)->check(CLI::Range(2, 100000000));

    ExperimentArgs xa;
    std::size_t x_samples = 0;
    long x_steps = 0;
    auto* experiment = app.add_subcommand("experiment", "Run a scripted experiment");
    experiment->add_option("id", xa.id, "free-ensemble | clustered-evolution | hamiltonian-convergence | triviality")->required();
    experiment->add_option("--profile", xa.profile, "desk or full");
    experiment->add_option("--seed", xa.seed);
    experiment->add_option("--out", xa.out, "Output root (default $VORTEX_OUT_ROOT or ./runs)");
    auto* xs_opt = experiment->add_option("--samples", x_samples)->check(CLI::PositiveNumber);
    auto* xt_opt = experiment->add_option("--steps", x_steps)->check(CLI::NonNegativeNumber);

    for (auto* sub : app.get_subcommands({})) sub->allow_config_extras(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    if (threads > 0) kernels::set_threads(threads);
    if (*lo_opt) ha.lo = hist_lo;
    if (*hi_opt) ha.hi = hist_hi;
    if (*xs_opt) xa.samples = x_samples;
    if (*xt_opt) xa.steps = x_steps;

    try {
        if (*sample) return cmd_sample(sa);
        if (*evolvec) return cmd_evolve(ea);
        if (*spectrum) return cmd_spectrum(pa);
        if (*hist) return cmd_hist(ha);
        if (*verify) return cmd_verify(vo);
        if (*experiment) return cmd_experiment(xa);
    } catch (const AcceptanceFailure& e) {
        std::fprintf(stderr, "acceptance failure: %s\n", e.what());
        return acceptance;
    } catch (const NearCollision& e) {
        std::fprintf(stderr, "near collision: %s\n", e.what());
        return collision;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage: %s\n", e.what());
        return usage;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return usage;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return internal;
    }
    return usage;
}
