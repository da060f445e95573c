#include "vortex/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "vortex/error.hpp"
#include "vortex/gas.hpp"
#include "vortex/kernels.hpp"

namespace vortex {

namespace {

void velocities(std::span<const Vec2> x, std::span<const double> xi, const GreenEvaluator& g,
                double guard, const char* stage, std::span<Vec2> out) {
    kernels::PairScan scan;
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    kernels::biot_savart_velocity(x, xi, g, scale, out, &scan);
    if (x.size() > 1 && scan.min_distance < guard)
        throw NearCollision(scan.i, scan.j, scan.min_distance, stage);
}

// Displacement of one Heun step of signed size h.
struct HeunWork {
    std::vector<Vec2> v0, v1, pred;

    void displacement(std::span<const Vec2> x, std::span<const double> xi, double h,
                      const GreenEvaluator& g, double guard, std::vector<Vec2>& dx) {
        const std::size_t n = x.size();
        v0.resize(n);
        v1.resize(n);
        pred.resize(n);
        dx.resize(n);
        velocities(x, xi, g, guard, "predictor", v0);
        for (std::size_t i = 0; i < n; ++i) pred[i] = canonical(x[i] + h * v0[i]);
        velocities(pred, xi, g, guard, "corrector", v1);
        for (std::size_t i = 0; i < n; ++i) dx[i] = (0.5 * h) * (v0[i] + v1[i]);
    }
};

}  // namespace

std::vector<Vec2> velocity_field(const VortexConfig& c, const GreenEvaluator& g, double guard) {
    std::vector<Vec2> v(c.size());
    velocities(c.positions(), c.intensities(), g, guard, "velocity", v);
    return v;
}

VortexConfig heun_step(const VortexConfig& c, double h, const GreenEvaluator& g, double guard) {
    if (!(h >= 0.0)) throw InvalidArgument("heun_step: h must be >= 0");
    if (h == 0.0) return c;
    HeunWork work;
    std::vector<Vec2> dx;
    work.displacement(c.positions(), c.intensities(), h, g, guard, dx);
    std::vector<Vec2> next(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) next[i] = canonical(c.position(i) + dx[i]);
    return c.with_positions(std::move(next));
}

double TrajectoryRecord::max_abs_drift() const {
    double m = 0.0;
    for (const auto& d : diagnostics) m = std::max(m, std::abs(d.drift));
    return m;
}

TrajectoryRecord evolve(const VortexConfig& c, double h, long steps, const GreenEvaluator& g,
                        long record_every, const EvolveOptions& options) {
    if (steps < 1) throw InvalidArgument("evolve: steps must be >= 1");
    if (!(h > 0.0)) throw InvalidArgument("evolve: h must be > 0");
    if (record_every < 1) throw InvalidArgument("evolve: record_every must be >= 1");

    TrajectoryRecord rec;
    rec.h = h;
    rec.steps = steps;
    rec.record_every = record_every;

    const std::size_t n = c.size();
    const auto xi = c.intensities();
    std::vector<Vec2> x(c.positions().begin(), c.positions().end());
    std::vector<Vec2> unwrapped = x;
    const double signed_h = options.reverse ? -h : h;
    double h0 = 0.0;

    auto record = [&](long step) {
        const double t = static_cast<double>(step) * h;
        VortexConfig state = c.with_positions(x);
        StepDiagnostics d;
        d.t = t;
        d.hamiltonian = hamiltonian(state, g);
        if (step == 0) h0 = d.hamiltonian;
        d.drift = (d.hamiltonian - h0) / std::max(1.0, std::abs(h0));
        d.min_separation = state.closest_pair().distance;
        CompensatedSum mx, my;
        for (std::size_t i = 0; i < n; ++i) {
            mx.add(xi[i] * unwrapped[i].x);
            my.add(xi[i] * unwrapped[i].y);
        }
        d.moment = {mx.value(), my.value()};
        rec.times.push_back(t);
        rec.diagnostics.push_back(d);
        if (options.keep_states) rec.states.push_back(std::move(state));
    };

    record(0);
    HeunWork work;
    std::vector<Vec2> dx;
    for (long step = 1; step <= steps; ++step) {
        try {
            work.displacement(x, xi, signed_h, g, options.guard, dx);
        } catch (const NearCollision& e) {
            throw e.at_step(step);
        }
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = canonical(x[i] + dx[i]);
            unwrapped[i] += dx[i];
        }
        if (step % record_every == 0 || step == steps) record(step);
    }
    return rec;
}

TestFunction TestFunction::cosine(int k1, int k2) {
    const double a = two_pi * k1, b = two_pi * k2;
    return {[a, b](Vec2 x) { return std::cos(a * x.x + b * x.y); },
            [a, b](Vec2 x) {
                const double s = -std::sin(a * x.x + b * x.y);
                return Vec2{a * s, b * s};
            }};
}

TestFunction TestFunction::constant(double c) {
    return {[c](Vec2) { return c; }, [](Vec2) { return Vec2{}; }};
}

std::vector<double> weak_form_residual(const TrajectoryRecord& traj, const TestFunction& phi,
                                       const GreenEvaluator& g) {
    if (traj.states.size() != traj.times.size() || traj.states.empty())
        throw InvalidArgument("weak_form_residual: trajectory has no recorded states");
    for (std::size_t r = 1; r < traj.times.size(); ++r)
        if (traj.times[r] - traj.times[r - 1] > 1e-2 * (1.0 + 1e-12))
            throw InvalidArgument("weak_form_residual: records must be at most 1e-2 apart");

    const std::size_t records = traj.states.size();
    std::vector<double> pairing(records), flux(records);
    for (std::size_t r = 0; r < records; ++r) {
        const VortexConfig& s = traj.states[r];
        const double n = static_cast<double>(s.size());
        CompensatedSum p;
        for (std::size_t i = 0; i < s.size(); ++i) p.add(s.intensity(i) * phi.value(s.position(i)));
        pairing[r] = p.value() / std::sqrt(n);
        flux[r] = quadratic_form(s, [&](Vec2 x, Vec2 y) {
            const Vec2 k = g.biot_savart(x - y);
            return 0.5 * dot(k, phi.gradient(x) - phi.gradient(y));
        });
    }
    std::vector<double> residual(records, 0.0);
    double integral = 0.0;
    for (std::size_t r = 1; r < records; ++r) {
        integral += 0.5 * (traj.times[r] - traj.times[r - 1]) * (flux[r] + flux[r - 1]);
        residual[r] = pairing[r] - pairing[0] - integral;
    }
    return residual;
}

}  // namespace vortex
