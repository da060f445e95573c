#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vortex/config.hpp"
#include "vortex/io.hpp"
#include "vortex/spectrum.hpp"

namespace vortex {

// One experiment run. With a non-empty root the run owns the directory
// root/<id>-seed<seed>; the manifest is written on construction (status
// running) and rewritten by finish() or fail(). With an empty root nothing
// touches the disk.
class ExperimentManifest {
public:
    ExperimentManifest(std::string id, std::uint64_t seed, const io::Manifest& params,
                       const std::filesystem::path& root);

    const std::string& id() const noexcept { return id_; }
    std::uint64_t seed() const noexcept { return seed_; }
    bool writes() const noexcept { return !dir_.empty(); }
    const std::filesystem::path& directory() const noexcept { return dir_; }
    // Hash of id, seed and parameters; identical inputs give identical runs.
    const std::string& input_hash() const noexcept { return hash_; }

    // Path of an output file, recorded in the manifest.
    std::filesystem::path output(const std::string& name);
    const std::vector<std::string>& outputs() const noexcept { return outputs_; }

    void finish(const io::Manifest& results);
    void fail(const std::string& what);

    static std::string directory_name(const std::string& id, std::uint64_t seed);

private:
    void write(const std::string& status, const io::Manifest& results) const;

    std::string id_;
    std::uint64_t seed_;
    io::Manifest params_;
    std::filesystem::path dir_;
    std::string hash_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------- free gas

struct FreeEnsembleParams {
    std::size_t samples = 10000;
    std::size_t n = 200;
    std::size_t top = 11;
    int k_max = 32;                    // spectrum shells
    std::size_t bins = 60;
    KernelChoice kernel = KernelChoice::torus_green;  // ranking convention
    double fit_lo = 1.0, fit_hi = 3.0;
    std::uint64_t seed = 7;
};

struct FreeEnsembleResult {
    std::vector<double> energy;        // ranking convention
    std::vector<double> energy_alt;    // the other convention
    Histogram hist;
    std::vector<std::size_t> top_index;  // by decreasing energy
    double threshold = 0.0;            // smallest energy in the top group
    // Value at rank ceil(samples * top / 10000) from the top: the same
    // tail mass as the 11-of-10000 threshold at any sample count.
    double scaled_quantile = 0.0;
    ShellSpectrum top_spectrum;
    SlopeFit top_slope;
};

FreeEnsembleResult exp_free_ensemble(const FreeEnsembleParams& p,
                                     ExperimentManifest* run = nullptr);

// ------------------------------------------------------- clustered dynamics

struct ClusteredParams {
    std::size_t samples = 10;
    std::size_t n = 200;
    std::vector<std::size_t> clusters{2, 4, 8};
    std::size_t cluster_repeats = 5;   // copies of the cluster list
    double diameter = 0.01;
    long steps = 30000;
    double h = 2e-4;
    long record_every = 500;
    int k_max = 32;
    double fit_lo = 1.0, fit_hi = 3.0;
    std::uint64_t seed = 7;

    static ClusteredParams desk();
    static ClusteredParams full();  // 120000 steps at h = 1e-4
};

struct ClusteredSample {
    bool excluded = false;
    std::string failure;
    double energy = 0.0;        // torus-green convention
    double energy_alt = 0.0;    // min-image-log convention
    double max_drift = 0.0;
    std::vector<StepDiagnostics> series;
};

struct ClusteredResult {
    std::vector<ClusteredSample> samples;
    std::size_t excluded = 0;
    ShellSpectrum initial, final, free;
    SlopeFit initial_slope, final_slope, free_slope;
    double mean_energy = 0.0;
};

ClusteredResult exp_clustered_evolution(const ClusteredParams& p,
                                        ExperimentManifest* run = nullptr);

// ------------------------------------------------ Hamiltonian convergence

struct ConvergenceParams {
    std::vector<std::size_t> n_list{25, 100, 400};
    int n_cut_ref = 64;
    std::size_t samples = 10000;
    EnergyWindow window{0.0, 0.5};
    std::uint64_t seed = 7;
};

struct ConvergenceRow {
    std::size_t n = 0;
    double ks = 0.0;
    double mass = 0.0;      // fraction of H_N in the window
    double mass_gap = 0.0;  // |mass - reference mass|
    double mean = 0.0, variance = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double reference_mass = 0.0;
    double reference_mean = 0.0, reference_variance = 0.0;
    double s4_reference = 0.0;  // exact variance of the reference law
};

ConvergenceResult exp_hamiltonian_convergence(const ConvergenceParams& p,
                                              ExperimentManifest* run = nullptr);

// ---------------------------------------------------------- triviality

using SiteFunction = std::function<double(double xi, Vec2 x)>;

struct TrivialityParams {
    std::vector<std::size_t> n_list{50, 200};
    EnergyWindow window{0.05, 0.5};
    std::size_t samples = 1000;
    std::size_t max_attempts = 1000000;
    std::uint64_t seed = 7;
    std::string phi_name = "xi*cos(2*pi*x1)";
    SiteFunction phi = [](double xi, Vec2 x) { return xi * std::cos(two_pi * x.x); };
};

struct TrivialityRow {
    std::size_t n = 0;
    double estimate = 0.0;   // I_N
    double se = 0.0;
    double acceptance = 0.0;
    double iid_prediction = 0.0;  // Var(phi) / N
};

struct TrivialityResult {
    std::vector<TrivialityRow> rows;
    double phi_mean = 0.0;      // int phi under N(0,1) x uniform
    double phi_variance = 0.0;
};

// Mean and variance of phi under N(0,1) x uniform by product quadrature.
std::pair<double, double> product_moments(const SiteFunction& phi);

TrivialityResult exp_triviality(const TrivialityParams& p, ExperimentManifest* run = nullptr);

// Parameter listings for manifests.
io::Manifest to_manifest(const FreeEnsembleParams& p);
io::Manifest to_manifest(const ClusteredParams& p);
io::Manifest to_manifest(const ConvergenceParams& p);
io::Manifest to_manifest(const TrivialityParams& p);

}  // namespace vortex
