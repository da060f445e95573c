#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "vortex/config.hpp"
#include "vortex/green.hpp"

namespace vortex {

// Vortices closer than this abort the integration.
inline constexpr double default_collision_guard = 1e-6;

// v_i = (1/sqrt N) sum_{j != i} xi_j K(x_i - x_j).
std::vector<Vec2> velocity_field(const VortexConfig& c, const GreenEvaluator& g,
                                 double guard = default_collision_guard);

// One Heun step: x* = x + h v(x), x' = x + (h/2)(v(x) + v(x*)).
VortexConfig heun_step(const VortexConfig& c, double h, const GreenEvaluator& g,
                       double guard = default_collision_guard);

struct EvolveOptions {
    double guard = default_collision_guard;
    bool reverse = false;        // integrate with -v
    bool keep_states = true;     // store a configuration per record
};

struct StepDiagnostics {
    double t = 0.0;
    double hamiltonian = 0.0;
    double drift = 0.0;            // (H(t) - H(0)) / max(1, |H(0)|)
    double min_separation = 0.0;
    Vec2 moment{};                 // sum_i xi_i x_i on unwrapped positions
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<VortexConfig> states;  // empty when keep_states is off
    std::vector<StepDiagnostics> diagnostics;
    double h = 0.0;
    long steps = 0;
    long record_every = 1;
    std::string scheme = "heun";

    const VortexConfig& final_state() const { return states.back(); }
    double max_abs_drift() const;
};

// `steps` Heun steps, recording at t = 0, every `record_every` steps and at
// the end. A near-collision is rethrown with the step index attached.
TrajectoryRecord evolve(const VortexConfig& c, double h, long steps, const GreenEvaluator& g,
                        long record_every = 1, const EvolveOptions& options = {});

struct TestFunction {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> gradient;

    // cos(2 pi k.x)
    static TestFunction cosine(int k1, int k2);
    static TestFunction constant(double c);
};

// For each recorded time t:
//   <w_t, phi> - <w_0, phi> - int_0^t <w_s (x) w_s, H_phi> ds,
// H_phi(x, y) = K(x - y).(grad phi(x) - grad phi(y)) / 2, integrated by the
// trapezoid rule over the recorded states.
std::vector<double> weak_form_residual(const TrajectoryRecord& traj, const TestFunction& phi,
                                       const GreenEvaluator& g);

}  // namespace vortex
