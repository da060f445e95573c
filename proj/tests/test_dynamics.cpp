#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/error.hpp"
#include "vortex/gas.hpp"

using namespace vortex;

namespace {

const GreenEvaluator& g() {
    static const GreenEvaluator e = GreenEvaluator::expansion();
    return e;
}

double max_displacement(const VortexConfig& a, const VortexConfig& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, torus_distance(a.position(i), b.position(i)));
    return m;
}

VortexConfig spread_config(std::size_t n, std::uint64_t seed) {
    // Rejection until all pairs are at least 0.05 apart, so the local error
    // constants stay moderate.
    Rng rng(seed);
    for (;;) {
        auto c = sample_lambda(n, IntensityLaw::gaussian, rng);
        if (c.closest_pair().distance > 0.05) return c;
    }
}

}  // namespace

TEST_CASE("a single vortex does not move") {
    const VortexConfig c({{0.3, 0.7}}, {2.0});
    const auto v = velocity_field(c, g());
    CHECK(v[0].x == 0.0);
    CHECK(v[0].y == 0.0);
    const auto tr = evolve(c, 0.01, 100, g(), 10);
    CHECK(tr.final_state() == c);
}

TEST_CASE("velocity matches the truncated-series oracle") {
    Rng rng(50);
    const auto c = spread_config(6, 51);
    const auto v = velocity_field(c, g());
    // Direct sum with K from the high-cutoff spectral backend.
    const auto s = GreenEvaluator::spectral(400);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Vec2 u{};
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (i == j) continue;
            const Vec2 d = min_image(c.position(i) - c.position(j));
            u = u + c.intensity(j) * s.biot_savart(d);
            (void)d;
        }
        u = (1.0 / std::sqrt(6.0)) * u;
        double tol = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (j != i)
                tol += std::abs(c.intensity(j)) *
                       s.kernel_tolerance_at(torus_distance(c.position(i), c.position(j)));
        CHECK(norm(v[i] - u) < tol / std::sqrt(6.0));
    }
}

TEST_CASE("two opposite vortices translate rigidly") {
    // A dipole moves as a unit; the separation is preserved.
    const VortexConfig c({{0.4, 0.5}, {0.6, 0.5}}, {1.0, -1.0});
    const auto tr = evolve(c, 1e-3, 200, g(), 50);
    const auto& f = tr.final_state();
    CHECK(torus_distance(f.position(0), f.position(1)) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(max_displacement(c, f) > 1e-3);
}

TEST_CASE("heun_step edge cases") {
    const auto c = spread_config(10, 52);
    CHECK(heun_step(c, 0.0, g()) == c);
    CHECK_THROWS_AS(heun_step(c, -1e-3, g()), InvalidArgument);
    CHECK_THROWS_AS(evolve(c, 1e-3, 0, g()), InvalidArgument);
}

TEST_CASE("local error is third order") {
    const auto c = spread_config(10, 53);
    // Reference from many small steps.
    auto err = [&](double h) {
        const auto coarse = heun_step(c, h, g());
        const auto fine = evolve(c, h / 64.0, 64, g(), 64).final_state();
        return max_displacement(coarse, fine);
    };
    const double e1 = err(2e-3), e2 = err(1e-3);
    CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(1.0 / 8.0));
}

TEST_CASE("conservation of energy and moment") {
    const auto c = spread_config(50, 54);
    const auto tr = evolve(c, 1e-4, 2000, g(), 100);
    CHECK(tr.max_abs_drift() < 1e-5);
    const Vec2 m0 = tr.diagnostics.front().moment;
    for (const auto& d : tr.diagnostics) {
        CHECK(std::abs(d.moment.x - m0.x) < 1e-10);
        CHECK(std::abs(d.moment.y - m0.y) < 1e-10);
    }
    CHECK(tr.times.size() == 21);
    CHECK(tr.times.back() == doctest::Approx(0.2));
}

TEST_CASE("drift shrinks with the step") {
    const auto c = spread_config(30, 55);
    const double d1 = evolve(c, 4e-4, 250, g(), 250).max_abs_drift();
    const double d2 = evolve(c, 2e-4, 500, g(), 500).max_abs_drift();
    CHECK(d2 < d1);
}

TEST_CASE("time reversal returns to the start") {
    const auto c = spread_config(20, 56);
    const auto fwd = evolve(c, 1e-4, 1000, g(), 1000);
    EvolveOptions back;
    back.reverse = true;
    const auto bwd = evolve(fwd.final_state(), 1e-4, 1000, g(), 1000, back);
    CHECK(max_displacement(c, bwd.final_state()) < 1e-8);
}

TEST_CASE("recording and states") {
    const auto c = spread_config(8, 57);
    const auto tr = evolve(c, 1e-3, 25, g(), 10);
    CHECK(tr.times.size() == 4);  // 0, 10, 20, 25
    CHECK(tr.times[3] == doctest::Approx(0.025));
    CHECK(tr.states.size() == 4);
    CHECK(tr.states.front() == c);
    EvolveOptions lean;
    lean.keep_states = false;
    const auto tl = evolve(c, 1e-3, 25, g(), 10, lean);
    CHECK(tl.states.empty());
    CHECK(tl.diagnostics.size() == 4);
    CHECK(tl.diagnostics.back().hamiltonian == tr.diagnostics.back().hamiltonian);
}

TEST_CASE("weak form residual") {
    const auto c = spread_config(20, 58);
    auto worst = [&](double h) {
        const long steps = std::lround(0.2 / h);
        const auto tr = evolve(c, h, steps, g(), 20);
        double m = 0.0;
        for (auto [k1, k2] : {std::pair{1, 0}, std::pair{1, 2}}) {
            const auto r = weak_form_residual(tr, TestFunction::cosine(k1, k2), g());
            CHECK(r.front() == 0.0);
            for (double x : r) m = std::max(m, std::abs(x));
        }
        return m;
    };
    const double a = worst(2e-4), b = worst(1e-4);
    CHECK(b < 1e-5);
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.25));
    const auto tr = evolve(c, 1e-4, 100, g(), 10);
    for (double x : weak_form_residual(tr, TestFunction::constant(3.0), g())) CHECK(std::abs(x) < 1e-14);
    const auto sparse = evolve(c, 1e-3, 40, g(), 20);
    CHECK_THROWS_AS(weak_form_residual(sparse, TestFunction::cosine(1, 0), g()), InvalidArgument);
}

TEST_CASE("near collision reports the step") {
    const VortexConfig c({{0.5, 0.5}, {0.5 + 1e-4, 0.5}}, {1.0, 1.0});
    EvolveOptions opt;
    opt.guard = 2e-4;
    try {
        evolve(c, 1e-3, 10, g(), 1, opt);
        FAIL("expected NearCollision");
    } catch (const NearCollision& e) {
        CHECK(e.step() == 1);  // steps are numbered from 1
        CHECK(e.first() == 0);
        CHECK(e.second() == 1);
        CHECK(e.stage() == "predictor");
    }
}

TEST_CASE("intensity-weighted velocity sum vanishes") {
    Rng rng(59);
    for (int s = 0; s < 5; ++s) {
        const auto c = sample_lambda(40, IntensityLaw::gaussian, rng);
        const auto v = velocity_field(c, g());
        Vec2 m{};
        for (std::size_t i = 0; i < c.size(); ++i) m = m + c.intensity(i) * v[i];
        CHECK(norm(m) < 1e-13);
    }
}

TEST_CASE("one evolve step equals heun_step and keeps intensities") {
    const auto c = spread_config(12, 60);
    const auto tr = evolve(c, 1e-3, 1, g());
    CHECK(tr.final_state() == heun_step(c, 1e-3, g()));
    const auto longer = evolve(c, 1e-3, 30, g(), 3);
    for (const auto& s : longer.states) {
        CHECK(s.size() == c.size());
        CHECK(std::equal(s.intensities().begin(), s.intensities().end(), c.intensities().begin()));
    }
    for (std::size_t i = 1; i < longer.times.size(); ++i) CHECK(longer.times[i] > longer.times[i - 1]);
}

TEST_CASE("conditioned samples stay in their window under the dynamics") {
    const EnergyWindow w(0.02, 0.2);
    Rng rng(61);
    auto sampler = [](Rng& r) { return sample_lambda(30, IntensityLaw::gaussian, r); };
    for (int s = 0; s < 3; ++s) {
        const auto cond = condition_energy(sampler, w, [](const VortexConfig& c) { return hamiltonian(c, g()); },
                                           100000, rng);
        if (cond.config.closest_pair().distance < 0.01) continue;
        const auto tr = evolve(cond.config, 1e-4, 1000, g(), 100);
        for (const auto& d : tr.diagnostics) {
            CHECK(d.hamiltonian >= w.a - 1e-3);
            CHECK(d.hamiltonian <= w.b + 1e-3);
        }
    }
}
