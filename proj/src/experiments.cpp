#include "vortex/experiments.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>

#include "vortex/dynamics.hpp"
#include "vortex/error.hpp"
#include "vortex/gas.hpp"
#include "vortex/kernels.hpp"
#include "vortex/rng.hpp"
#include "vortex/white_noise.hpp"

namespace vortex {

namespace fs = std::filesystem;

// ------------------------------------------------------------- manifest

std::string ExperimentManifest::directory_name(const std::string& id, std::uint64_t seed) {
    return id + "-seed" + std::to_string(seed);
}

ExperimentManifest::ExperimentManifest(std::string id, std::uint64_t seed,
                                       const io::Manifest& params, const fs::path& root)
    : id_(std::move(id)), seed_(seed), params_(params), start_(std::chrono::steady_clock::now()) {
    std::ostringstream text;
    text << id_ << '\n' << seed_ << '\n';
    for (const auto& [k, v] : params_.entries()) text << k << '=' << v << '\n';
    hash_ = io::content_hash(text.str());
    if (!root.empty()) {
        dir_ = root / directory_name(id_, seed_);
        fs::create_directories(dir_);
        write("running", {});
    }
}

fs::path ExperimentManifest::output(const std::string& name) {
    if (std::find(outputs_.begin(), outputs_.end(), name) == outputs_.end())
        outputs_.push_back(name);
    return dir_ / name;
}

void ExperimentManifest::write(const std::string& status, const io::Manifest& results) const {
    if (dir_.empty()) return;
    io::Manifest m;
    m.set("experiment", id_);
    m.set("seed", std::to_string(seed_));
    m.set("input_hash", hash_);
    m.set("status", status);
    for (const auto& [k, v] : params_.entries()) m.set("param." + k, v);
    std::string outs;
    for (const auto& o : outputs_) outs += (outs.empty() ? "" : ",") + o;
    m.set("outputs", outs);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    m.set("wall_clock_seconds", wall);
    for (const auto& [k, v] : results.entries()) m.set("result." + k, v);
    m.write(dir_ / "manifest.txt");
}

void ExperimentManifest::finish(const io::Manifest& results) { write("ok", results); }

void ExperimentManifest::fail(const std::string& what) {
    io::Manifest r;
    r.set("failure", what);
    write("failed", r);
}

namespace {

// Runs body(i) for i in [0, n) across threads; the first exception (lowest
// index) is rethrown after the loop.
template <class F>
void parallel_members(std::size_t n, F&& body) {
    std::vector<std::exception_ptr> errors(n);
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long li = 0; li < ln; ++li) {
        try {
            body(static_cast<std::size_t>(li));
        } catch (...) {
            errors[static_cast<std::size_t>(li)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

const GreenEvaluator& production_green() {
    static const GreenEvaluator g = GreenEvaluator::expansion();
    return g;
}

KernelChoice other(KernelChoice k) {
    return k == KernelChoice::torus_green ? KernelChoice::min_image_log : KernelChoice::torus_green;
}

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

// Stream index for member s of the sub-ensemble tagged by `group`.
std::uint64_t member_stream(std::uint64_t group, std::size_t s) {
    return (group << 32) + static_cast<std::uint64_t>(s);
}

void add_fit(io::Manifest& m, const std::string& prefix, const SlopeFit& f) {
    m.set(prefix + "_slope", f.slope);
    m.set(prefix + "_intercept", f.intercept);
    m.set(prefix + "_residual", f.residual);
}

template <class F>
auto guarded(ExperimentManifest* run, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        if (run) run->fail(e.what());
        throw;
    }
}

}  // namespace

io::Manifest to_manifest(const FreeEnsembleParams& p) {
    io::Manifest m;
    m.set("samples", p.samples);
    m.set("n", p.n);
    m.set("top", p.top);
    m.set("k_max", p.k_max);
    m.set("bins", p.bins);
    m.set("kernel", to_string(p.kernel));
    m.set("fit_lo", p.fit_lo);
    m.set("fit_hi", p.fit_hi);
    m.set("intensity_law", "rademacher");
    return m;
}

io::Manifest to_manifest(const ClusteredParams& p) {
    io::Manifest m;
    m.set("samples", p.samples);
    m.set("n", p.n);
    m.set("clusters", join(p.clusters));
    m.set("cluster_repeats", p.cluster_repeats);
    m.set("diameter", p.diameter);
    m.set("steps", p.steps);
    m.set("h", p.h);
    m.set("record_every", p.record_every);
    m.set("k_max", p.k_max);
    m.set("fit_lo", p.fit_lo);
    m.set("fit_hi", p.fit_hi);
    m.set("green", production_green().describe());
    return m;
}

io::Manifest to_manifest(const ConvergenceParams& p) {
    io::Manifest m;
    m.set("n_list", join(p.n_list));
    m.set("n_cut_ref", p.n_cut_ref);
    m.set("samples", p.samples);
    m.set("window", io::fmt(p.window.a) + "," + io::fmt(p.window.b));
    m.set("intensity_law", "gaussian");
    m.set("green", production_green().describe());
    return m;
}

io::Manifest to_manifest(const TrivialityParams& p) {
    io::Manifest m;
    m.set("n_list", join(p.n_list));
    m.set("window", io::fmt(p.window.a) + "," + io::fmt(p.window.b));
    m.set("samples", p.samples);
    m.set("max_attempts", p.max_attempts);
    m.set("phi", p.phi_name);
    m.set("intensity_law", "gaussian");
    return m;
}

// ------------------------------------------------------------- free gas

FreeEnsembleResult exp_free_ensemble(const FreeEnsembleParams& p, ExperimentManifest* run) {
    return guarded(run, [&] {
        if (p.samples < 1 || p.top < 1) throw InvalidArgument("free ensemble: need samples, top >= 1");
        FreeEnsembleResult r;
        r.energy.resize(p.samples);
        r.energy_alt.resize(p.samples);
        const auto& g = production_green();
        auto draw = [&](std::size_t s) {
            Rng rng = stream_rng(p.seed, s);
            return sample_lambda(p.n, IntensityLaw::rademacher, rng);
        };
        parallel_members(p.samples, [&](std::size_t s) {
            const VortexConfig c = draw(s);
            r.energy[s] = interaction_energy(c, p.kernel, IntensityScale::sqrt_n, &g);
            r.energy_alt[s] = interaction_energy(c, other(p.kernel), IntensityScale::sqrt_n, &g);
        });

        const auto [lo, hi] = std::minmax_element(r.energy.begin(), r.energy.end());
        const double span = *hi > *lo ? *hi - *lo : 1.0;
        r.hist = histogram(r.energy, uniform_edges(*lo, *lo + span, p.bins));

        std::vector<std::size_t> order(p.samples);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return r.energy[a] > r.energy[b]; });
        const std::size_t top = std::min(p.top, p.samples);
        r.top_index.assign(order.begin(), order.begin() + static_cast<long>(top));
        r.threshold = r.energy[r.top_index.back()];
        const double scaled = std::ceil(static_cast<double>(p.samples) * static_cast<double>(p.top) / 10000.0);
        const auto rank = std::clamp<std::size_t>(static_cast<std::size_t>(scaled), 1, p.samples);
        r.scaled_quantile = r.energy[order[rank - 1]];

        std::vector<ShellSpectrum> spectra;
        for (std::size_t idx : r.top_index)
            spectra.push_back(energy_spectrum(empirical_vorticity(draw(idx), p.k_max), p.k_max));
        r.top_spectrum = average_spectra(spectra);
        r.top_slope = fit_slope(r.top_spectrum, p.fit_lo, p.fit_hi);

        if (run) {
            if (run->writes()) {
                std::ofstream out(run->output("energies.csv"), std::ios::binary);
                out << "sample," << to_string(p.kernel) << ',' << to_string(other(p.kernel)) << '\n';
                for (std::size_t s = 0; s < p.samples; ++s)
                    out << s << ',' << io::fmt(r.energy[s]) << ',' << io::fmt(r.energy_alt[s]) << '\n';
                std::ofstream topf(run->output("top.csv"), std::ios::binary);
                topf << "rank,sample,energy\n";
                for (std::size_t i = 0; i < top; ++i)
                    topf << i + 1 << ',' << r.top_index[i] << ',' << io::fmt(r.energy[r.top_index[i]]) << '\n';
                io::write_histogram_csv(run->output("histogram.csv"), r.hist);
                io::write_spectrum_csv(run->output("spectrum_top.csv"), r.top_spectrum);
                io::write_slope_report(run->output("slope_top.txt"), r.top_slope);
            }
            const double mean = std::accumulate(r.energy.begin(), r.energy.end(), 0.0) / static_cast<double>(p.samples);
            const double mean_alt = std::accumulate(r.energy_alt.begin(), r.energy_alt.end(), 0.0) / static_cast<double>(p.samples);
            io::Manifest res;
            res.set("threshold", r.threshold);
            res.set("scaled_quantile", r.scaled_quantile);
            res.set("mean_energy", mean);
            res.set("mean_energy_alt", mean_alt);
            res.set("underflow", r.hist.underflow);
            res.set("overflow", r.hist.overflow);
            add_fit(res, "top", r.top_slope);
            run->finish(res);
        }
        return r;
    });
}

// ------------------------------------------------------- clustered dynamics

ClusteredParams ClusteredParams::desk() { return {}; }

ClusteredParams ClusteredParams::full() {
    ClusteredParams p;
    p.steps = 120000;
    p.h = 1e-4;
    p.record_every = 1000;
    return p;
}

ClusteredResult exp_clustered_evolution(const ClusteredParams& p, ExperimentManifest* run) {
    return guarded(run, [&] {
        if (p.samples < 1) throw InvalidArgument("clustered evolution: need samples >= 1");
        if (p.steps < 0) throw InvalidArgument("clustered evolution: steps must be >= 0");
        std::vector<std::size_t> sizes;
        for (std::size_t r = 0; r < p.cluster_repeats; ++r)
            sizes.insert(sizes.end(), p.clusters.begin(), p.clusters.end());
        const std::size_t clustered = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
        if (clustered > p.n) throw InvalidArgument("clustered evolution: clusters exceed n");
        const auto& g = production_green();

        ClusteredResult r;
        r.samples.resize(p.samples);
        std::vector<ShellSpectrum> init(p.samples), fin(p.samples), free(p.samples);
        parallel_members(p.samples, [&](std::size_t s) {
            Rng rng = stream_rng(p.seed, member_stream(1, s));
            const VortexConfig c = make_clustered(p.n - clustered, sizes, p.diameter, rng);
            Rng free_rng = stream_rng(p.seed, member_stream(2, s));
            const VortexConfig f = sample_lambda(p.n, IntensityLaw::rademacher, free_rng);
            free[s] = energy_spectrum(empirical_vorticity(f, p.k_max), p.k_max);
            auto& out = r.samples[s];
            out.energy = interaction_energy(c, KernelChoice::torus_green, IntensityScale::sqrt_n, &g);
            out.energy_alt = interaction_energy(c, KernelChoice::min_image_log);
            init[s] = energy_spectrum(empirical_vorticity(c, p.k_max), p.k_max);
            if (p.steps == 0) {
                fin[s] = init[s];
                return;
            }
            try {
                const auto traj = evolve(c, p.h, p.steps, g, p.record_every);
                out.series = traj.diagnostics;
                out.max_drift = traj.max_abs_drift();
                fin[s] = energy_spectrum(empirical_vorticity(traj.final_state(), p.k_max), p.k_max);
            } catch (const NearCollision& e) {
                out.excluded = true;
                out.failure = e.what();
            }
        });

        std::vector<ShellSpectrum> kept_init, kept_fin;
        double energy_sum = 0.0;
        for (std::size_t s = 0; s < p.samples; ++s) {
            energy_sum += r.samples[s].energy;
            if (r.samples[s].excluded) {
                ++r.excluded;
                continue;
            }
            kept_init.push_back(init[s]);
            kept_fin.push_back(fin[s]);
        }
        if (kept_fin.empty()) throw Error("clustered evolution: every sample collided");
        r.mean_energy = energy_sum / static_cast<double>(p.samples);
        r.initial = average_spectra(kept_init);
        r.final = average_spectra(kept_fin);
        r.free = average_spectra(free);
        r.initial_slope = fit_slope(r.initial, p.fit_lo, p.fit_hi);
        r.final_slope = fit_slope(r.final, p.fit_lo, p.fit_hi);
        r.free_slope = fit_slope(r.free, p.fit_lo, p.fit_hi);

        if (run) {
            if (run->writes()) {
                io::write_spectrum_csv(run->output("spectrum_initial.csv"), r.initial);
                io::write_spectrum_csv(run->output("spectrum_final.csv"), r.final);
                io::write_spectrum_csv(run->output("spectrum_free.csv"), r.free);
                io::write_slope_report(run->output("slope_initial.txt"), r.initial_slope);
                io::write_slope_report(run->output("slope_final.txt"), r.final_slope);
                io::write_slope_report(run->output("slope_free.txt"), r.free_slope);
                std::ofstream smp(run->output("samples.csv"), std::ios::binary);
                smp << "sample,status,energy_torus_green,energy_min_image_log,max_drift\n";
                std::ofstream ser(run->output("energy_series.csv"), std::ios::binary);
                ser << "sample,t,hamiltonian,drift,min_separation\n";
                for (std::size_t s = 0; s < p.samples; ++s) {
                    const auto& o = r.samples[s];
                    smp << s << ',' << (o.excluded ? "excluded" : "ok") << ',' << io::fmt(o.energy)
                        << ',' << io::fmt(o.energy_alt) << ',' << io::fmt(o.max_drift) << '\n';
                    for (const auto& d : o.series)
                        ser << s << ',' << io::fmt(d.t) << ',' << io::fmt(d.hamiltonian) << ','
                            << io::fmt(d.drift) << ',' << io::fmt(d.min_separation) << '\n';
                }
            }
            io::Manifest res;
            res.set("excluded", r.excluded);
            res.set("mean_energy", r.mean_energy);
            double worst = 0.0;
            for (const auto& o : r.samples) worst = std::max(worst, o.max_drift);
            res.set("max_drift", worst);
            add_fit(res, "initial", r.initial_slope);
            add_fit(res, "final", r.final_slope);
            add_fit(res, "free", r.free_slope);
            run->finish(res);
        }
        return r;
    });
}

// ------------------------------------------------ Hamiltonian convergence

ConvergenceResult exp_hamiltonian_convergence(const ConvergenceParams& p, ExperimentManifest* run) {
    return guarded(run, [&] {
        if (p.samples < 1) throw InvalidArgument("convergence: need samples >= 1");
        for (std::size_t i = 1; i < p.n_list.size(); ++i)
            if (!(p.n_list[i] > p.n_list[i - 1]))
                throw InvalidArgument("convergence: n_list must be increasing");
        const auto& g = production_green();
        ConvergenceResult r;

        std::vector<double> ref(p.samples);
        parallel_members(p.samples, [&](std::size_t s) {
            Rng rng = stream_rng(p.seed, member_stream(0, s));
            ref[s] = renormalized_energy(sample_truncated_wn(p.n_cut_ref, rng));
        });
        auto mass = [&](const std::vector<double>& v) {
            const auto in = std::count_if(v.begin(), v.end(), [&](double e) { return p.window.contains(e); });
            return static_cast<double>(in) / static_cast<double>(v.size());
        };
        const auto ref_m = moments(ref);
        r.reference_mass = mass(ref);
        r.reference_mean = ref_m.mean;
        r.reference_variance = ref_m.variance;
        r.s4_reference = lattice_sums(p.n_cut_ref).S4;

        std::vector<std::vector<double>> values;
        for (std::size_t n : p.n_list) {
            std::vector<double> h(p.samples);
            parallel_members(p.samples, [&](std::size_t s) {
                Rng rng = stream_rng(p.seed, member_stream(n, s));
                h[s] = hamiltonian(sample_lambda(n, IntensityLaw::gaussian, rng), g);
            });
            const auto m = moments(h);
            ConvergenceRow row;
            row.n = n;
            row.ks = ks_distance(h, ref);
            row.mass = mass(h);
            row.mass_gap = std::abs(row.mass - r.reference_mass);
            row.mean = m.mean;
            row.variance = m.variance;
            r.rows.push_back(row);
            values.push_back(std::move(h));
        }

        if (run) {
            if (run->writes()) {
                std::ofstream out(run->output("convergence.csv"), std::ios::binary);
                out << "n,ks,mass,mass_gap,mean,variance\n";
                for (const auto& row : r.rows)
                    out << row.n << ',' << io::fmt(row.ks) << ',' << io::fmt(row.mass) << ','
                        << io::fmt(row.mass_gap) << ',' << io::fmt(row.mean) << ','
                        << io::fmt(row.variance) << '\n';
                io::write_values_csv(run->output("reference.csv"), "renormalized_energy", ref);
                for (std::size_t i = 0; i < p.n_list.size(); ++i)
                    io::write_values_csv(run->output("hamiltonian_n" + std::to_string(p.n_list[i]) + ".csv"),
                                         "hamiltonian", values[i]);
            }
            io::Manifest res;
            res.set("reference_mass", r.reference_mass);
            res.set("reference_variance", r.reference_variance);
            res.set("s4_reference", r.s4_reference);
            for (const auto& row : r.rows) {
                const std::string n = std::to_string(row.n);
                res.set("ks_n" + n, row.ks);
                res.set("mass_gap_n" + n, row.mass_gap);
            }
            run->finish(res);
        }
        return r;
    });
}

// ---------------------------------------------------------- triviality

std::pair<double, double> product_moments(const SiteFunction& phi) {
    // Trapezoid in xi over [-10, 10] against the Gaussian density (spectrally
    // accurate for smooth integrands) times a midpoint grid in x.
    constexpr int xi_points = 1001;
    constexpr int grid = 64;
    constexpr double span = 10.0;
    const double dxi = 2.0 * span / (xi_points - 1);
    CompensatedSum m1, m2;
    for (int a = 0; a < xi_points; ++a) {
        const double xi = -span + a * dxi;
        const double w = dxi * std::exp(-0.5 * xi * xi) / std::sqrt(two_pi) / (grid * grid) *
                         ((a == 0 || a == xi_points - 1) ? 0.5 : 1.0);
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double v = phi(xi, Vec2{(i + 0.5) / grid, (j + 0.5) / grid});
                m1.add(w * v);
                m2.add(w * v * v);
            }
    }
    const double mean = m1.value();
    return {mean, m2.value() - mean * mean};
}

TrivialityResult exp_triviality(const TrivialityParams& p, ExperimentManifest* run) {
    return guarded(run, [&] {
        if (p.samples < 2) throw InvalidArgument("triviality: need samples >= 2");
        if (!p.phi) throw InvalidArgument("triviality: no test function");
        const auto& g = production_green();
        TrivialityResult r;
        std::tie(r.phi_mean, r.phi_variance) = product_moments(p.phi);
        const bool vacuous = std::isinf(p.window.a) && std::isinf(p.window.b);

        std::vector<std::vector<double>> dev2_all;
        for (std::size_t n : p.n_list) {
            std::vector<double> dev2(p.samples);
            std::vector<std::size_t> attempts(p.samples);
            parallel_members(p.samples, [&](std::size_t s) {
                Rng rng = stream_rng(p.seed, member_stream(n, s));
                auto sampler = [n](Rng& r) { return sample_lambda(n, IntensityLaw::gaussian, r); };
                Conditioned c = vacuous
                    ? Conditioned{sampler(rng), 1, 0.0}
                    : condition_energy(sampler, p.window,
                                       [&](const VortexConfig& v) { return hamiltonian(v, g); },
                                       p.max_attempts, rng);
                CompensatedSum acc;
                for (std::size_t i = 0; i < n; ++i) acc.add(p.phi(c.config.intensity(i), c.config.position(i)));
                const double d = acc.value() / static_cast<double>(n) - r.phi_mean;
                dev2[s] = d * d;
                attempts[s] = c.attempts;
            });
            const auto m = moments(dev2);
            TrivialityRow row;
            row.n = n;
            row.estimate = m.mean;
            row.se = m.mean_se;
            const double total = static_cast<double>(std::accumulate(attempts.begin(), attempts.end(), std::size_t{0}));
            row.acceptance = static_cast<double>(p.samples) / total;
            row.iid_prediction = r.phi_variance / static_cast<double>(n);
            r.rows.push_back(row);
            dev2_all.push_back(std::move(dev2));
        }

        if (run) {
            if (run->writes()) {
                std::ofstream out(run->output("triviality.csv"), std::ios::binary);
                out << "n,estimate,se,acceptance,iid_prediction\n";
                for (const auto& row : r.rows)
                    out << row.n << ',' << io::fmt(row.estimate) << ',' << io::fmt(row.se) << ','
                        << io::fmt(row.acceptance) << ',' << io::fmt(row.iid_prediction) << '\n';
            }
            io::Manifest res;
            res.set("phi_mean", r.phi_mean);
            res.set("phi_variance", r.phi_variance);
            for (const auto& row : r.rows) {
                const std::string n = std::to_string(row.n);
                res.set("estimate_n" + n, row.estimate);
                res.set("acceptance_n" + n, row.acceptance);
            }
            run->finish(res);
        }
        return r;
    });
}

}  // namespace vortex
