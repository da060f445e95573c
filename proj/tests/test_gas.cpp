#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "support.hpp"
#include "vortex/error.hpp"
#include "vortex/gas.hpp"
#include "vortex/kernels.hpp"
#include "vortex/white_noise.hpp"

using namespace vortex;

namespace {

const GreenEvaluator& g() {
    static const GreenEvaluator e = GreenEvaluator::expansion();
    return e;
}

VortexConfig pair_config(Vec2 d, double xi1, double xi2) {
    return VortexConfig({{0.1, 0.2}, Vec2{0.1, 0.2} + d}, {xi1, xi2});
}

}  // namespace

TEST_CASE("VortexConfig validation") {
    CHECK_THROWS_AS(VortexConfig({}, {}), InvalidArgument);
    CHECK_THROWS_AS(VortexConfig({{0, 0}}, {1.0, 2.0}), InvalidArgument);
    const VortexConfig c({{1.25, -0.5}}, {1.0});
    CHECK(c.position(0).x == doctest::Approx(0.25));
    CHECK(c.position(0).y == doctest::Approx(0.5));
}

TEST_CASE("hamiltonian examples") {
    CHECK(hamiltonian(VortexConfig({{0.3, 0.4}}, {1.0}), g()) == 0.0);
    // -G(1/2, 0)/2 with G from the independent Fourier-series oracle at M = 512.
    const double oracle = testing::green_series({0.5, 0.0}, 512);
    const auto c = pair_config({0.5, 0.0}, 1.0, 1.0);
    CHECK(std::abs(hamiltonian(c, g()) - (-oracle / 2.0)) < 1e-5);
    const auto flipped = pair_config({0.5, 0.0}, 1.0, -1.0);
    CHECK(hamiltonian(flipped, g()) == doctest::Approx(-hamiltonian(c, g())).epsilon(1e-15));
    CHECK_THROWS_AS(hamiltonian(VortexConfig({{0.1, 0.1}, {0.1, 0.1}}, {1.0, 1.0}), g()),
                    CoincidentPositions);
}

TEST_CASE("interaction energy examples") {
    const double d = std::exp(-1.0);
    CHECK(interaction_energy(VortexConfig({{0.3, 0.4}}, {1.0})) == 0.0);
    CHECK(interaction_energy(pair_config({d, 0.0}, 1.0, 1.0), KernelChoice::min_image_log,
                             IntensityScale::raw) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(interaction_energy(pair_config({d, 0.0}, 1.0, -1.0), KernelChoice::min_image_log,
                             IntensityScale::raw) == doctest::Approx(-2.0).epsilon(1e-14));
    // sqrt_n divides each intensity by sqrt 2.
    CHECK(interaction_energy(pair_config({0.0, d}, 1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    // torus-green with sqrt_n scaling is 2 H_N.
    Rng rng(5);
    const auto c = sample_lambda(40, IntensityLaw::gaussian, rng);
    CHECK(interaction_energy(c, KernelChoice::torus_green, IntensityScale::sqrt_n, &g()) ==
          doctest::Approx(2.0 * hamiltonian(c, g())).epsilon(1e-13));
    CHECK_THROWS_AS(interaction_energy(VortexConfig({{0.1, 0.1}, {0.1, 0.1}}, {1.0, 1.0})),
                    CoincidentPositions);
}

TEST_CASE("H_N = -1/2 <w_N (x) w_N, G>") {
    for (int s = 0; s < 20; ++s) {
        Rng rng = stream_rng(11, s);
        const auto c = sample_lambda(2 + s * 5, IntensityLaw::gaussian, rng);
        const double q = quadratic_form(c, [](Vec2 x, Vec2 y) { return g().green(x - y); });
        CHECK(testing::rel(hamiltonian(c, g()), -0.5 * q) < 1e-12);
    }
    CHECK(quadratic_form(VortexConfig({{0.2, 0.2}}, {3.0}), [](Vec2, Vec2) { return 1.0; }) == 0.0);
}

TEST_CASE("hamiltonian is permutation and translation invariant") {
    Rng rng(8);
    const auto c = sample_lambda(60, IntensityLaw::gaussian, rng);
    const double h = hamiltonian(c, g());
    std::vector<std::size_t> perm(c.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Vec2> px, tx;
    std::vector<double> pxi;
    for (std::size_t i : perm) {
        px.push_back(c.position(i));
        pxi.push_back(c.intensity(i));
    }
    for (std::size_t i = 0; i < c.size(); ++i) tx.push_back(c.position(i) + Vec2{0.377, 0.811});
    CHECK(hamiltonian(VortexConfig(px, pxi), g()) == doctest::Approx(h).epsilon(1e-12));
    CHECK(hamiltonian(c.with_positions(tx), g()) == doctest::Approx(h).epsilon(1e-10));
}

TEST_CASE("parallel pair kernels match the serial references") {
    Rng rng(9);
    const auto c = sample_lambda(150, IntensityLaw::gaussian, rng);
    const auto x = c.positions();
    const auto w = c.intensities();
    CHECK(testing::rel(kernels::green_pair_sum(x, w, g()), kernels::green_pair_sum_serial(x, w, g())) < 1e-12);
    CHECK(testing::rel(kernels::log_pair_sum(x, w), kernels::log_pair_sum_serial(x, w)) < 1e-12);
    std::vector<Vec2> a(c.size()), b(c.size());
    kernels::biot_savart_velocity(x, w, g(), 0.5, a);
    kernels::biot_savart_velocity_serial(x, w, g(), 0.5, b);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(norm(a[i] - b[i]) < 1e-12 * (1.0 + norm(b[i])));
}

TEST_CASE("parallel kernels do not depend on the thread count") {
    Rng rng(10);
    const auto c = sample_lambda(120, IntensityLaw::gaussian, rng);
    const int before = kernels::max_threads();
    kernels::set_threads(1);
    const double h1 = hamiltonian(c, g());
    std::vector<Vec2> v1(c.size()), v3(c.size());
    kernels::biot_savart_velocity(c.positions(), c.intensities(), g(), 1.0, v1);
    kernels::set_threads(3);
    const double h3 = hamiltonian(c, g());
    kernels::biot_savart_velocity(c.positions(), c.intensities(), g(), 1.0, v3);
    kernels::set_threads(before);
    CHECK(h1 == h3);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(v1[i] == v3[i]);
}

TEST_CASE("sample_lambda laws") {
    SUBCASE("gaussian intensities have mean 0 and variance 1") {
        Rng rng(12);
        std::vector<double> xi;
        for (int s = 0; s < 500; ++s) {
            const auto c = sample_lambda(200, IntensityLaw::gaussian, rng);
            xi.insert(xi.end(), c.intensities().begin(), c.intensities().end());
        }
        const auto st = testing::stat(xi);
        CHECK(std::abs(st.mean) < 3 * st.se);
        CHECK(std::abs(st.var - 1.0) < 3 * st.var_se);
    }
    SUBCASE("positions are uniform") {
        Rng rng(13);
        std::vector<double> x1;
        for (int s = 0; s < 500; ++s) {
            const auto c = sample_lambda(100, IntensityLaw::gaussian, rng);
            for (const auto& p : c.positions()) x1.push_back(p.x);
        }
        const auto st = testing::stat(x1);
        CHECK(std::abs(st.mean - 0.5) < 3 * st.se);
        CHECK(std::abs(st.var - 1.0 / 12.0) < 3 * st.var_se);
    }
    SUBCASE("rademacher is exactly balanced") {
        Rng rng(14);
        const auto c = sample_lambda(200, IntensityLaw::rademacher, rng);
        double sum = 0.0;
        for (double x : c.intensities()) {
            CHECK(std::abs(x) == 1.0);
            sum += x;
        }
        CHECK(sum == 0.0);
        CHECK_THROWS_AS(sample_lambda(201, IntensityLaw::rademacher, rng), InvalidArgument);
        CHECK_THROWS_AS(sample_lambda(0, IntensityLaw::gaussian, rng), InvalidArgument);
    }
}

TEST_CASE("condition_energy") {
    auto sampler = [](Rng& r) { return sample_lambda(30, IntensityLaw::gaussian, r); };
    auto energy = [](const VortexConfig& c) { return hamiltonian(c, g()); };
    Rng rng(15);
    SUBCASE("vacuous window accepts the first draw") {
        const auto r = condition_energy(sampler, EnergyWindow::everything(), energy, 5, rng);
        CHECK(r.attempts == 1);
    }
    SUBCASE("output satisfies the window") {
        const EnergyWindow w(0.02, 0.1);
        for (int i = 0; i < 20; ++i) {
            const auto r = condition_energy(sampler, w, energy, 100000, rng);
            CHECK(w.contains(r.energy));
            CHECK(w.contains(hamiltonian(r.config, g())));
        }
    }
    SUBCASE("acceptance frequency matches the unconditioned CDF mass") {
        const EnergyWindow w(0.0, 0.03);
        Rng a(16), b(17);
        const int draws = 4000;
        int inside = 0;
        for (int i = 0; i < draws; ++i) inside += w.contains(energy(sampler(a)));
        const double p = double(inside) / draws;
        std::size_t attempts = 0;
        const int accepted = 400;
        for (int i = 0; i < accepted; ++i) attempts += condition_energy(sampler, w, energy, 100000, b).attempts;
        const double rate = double(accepted) / double(attempts);
        // Binomial and geometric standard errors combined.
        const double se = std::sqrt(p * (1 - p) / draws + rate * rate * (1 - rate) / accepted);
        CHECK(std::abs(rate - p) < 3 * se);
    }
    SUBCASE("exhaustion reports the attempt count") {
        try {
            condition_energy(sampler, EnergyWindow(50.0, 51.0), energy, 7, rng);
            FAIL("expected AcceptanceFailure");
        } catch (const AcceptanceFailure& e) {
            CHECK(e.attempts() == 7);
        }
        CHECK_THROWS_AS(condition_energy(sampler, EnergyWindow::everything(), energy, 0, rng),
                        InvalidArgument);
    }
}

TEST_CASE("make_clustered") {
    SUBCASE("no clusters reproduces the balanced rademacher sampler") {
        Rng a(18), b(18);
        const auto c = make_clustered(200, {}, 0.01, a);
        const auto d = sample_lambda(200, IntensityLaw::rademacher, b);
        CHECK(c == d);
    }
    SUBCASE("clusters are tight, same-signed and balanced overall") {
        Rng rng(19);
        const std::vector<std::size_t> sizes{2, 4, 8, 2, 4, 8};
        const auto c = make_clustered(172, sizes, 0.01, rng);
        CHECK(c.size() == 200);
        std::size_t offset = 0;
        for (std::size_t s : sizes) {
            for (std::size_t i = offset; i < offset + s; ++i) {
                CHECK(c.intensity(i) == c.intensity(offset));
                for (std::size_t j = offset; j < offset + s; ++j)
                    CHECK(torus_distance(c.position(i), c.position(j)) <= 0.01 + 1e-15);
            }
            offset += s;
        }
        double sum = 0.0;
        for (double x : c.intensities()) sum += x;
        CHECK(sum == 0.0);
    }
    SUBCASE("impossible balance is rejected") {
        Rng rng(20);
        const std::vector<std::size_t> big{8};
        CHECK_THROWS_AS(make_clustered(2, big, 0.01, rng), InvalidArgument);
        CHECK_THROWS_AS(make_clustered(3, {}, 0.01, rng), InvalidArgument);
        CHECK_THROWS_AS(make_clustered(4, {}, 0.0, rng), InvalidArgument);
    }
}

TEST_CASE("empirical vorticity") {
    SUBCASE("single vortex at the origin") {
        const auto f = empirical_vorticity(VortexConfig({{0.0, 0.0}}, {1.0}), 6);
        for (const auto& k : f.modes().members()) {
            const auto z = f.complex_coeff(k);
            CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(z.imag()) < 1e-14);
        }
    }
    SUBCASE("matches the direct sum and is Hermitian") {
        Rng rng(21);
        const auto c = sample_lambda(37, IntensityLaw::gaussian, rng);
        const auto f = empirical_vorticity(c, 9);
        for (const auto& k : f.modes().members()) {
            std::complex<double> direct = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i)
                direct += c.intensity(i) *
                          std::polar(1.0, -two_pi * (k.k1 * c.position(i).x + k.k2 * c.position(i).y));
            direct /= std::sqrt(37.0);
            CHECK(std::abs(f.complex_coeff(k) - direct) < 1e-12);
            CHECK(std::abs(f.complex_coeff(-k) - std::conj(f.complex_coeff(k))) < 1e-15);
        }
    }
    SUBCASE("E |w^(l)|^2 = 1 under gaussian intensities") {
        std::vector<double> a, b;
        for (int s = 0; s < 10000; ++s) {
            Rng rng = stream_rng(22, s);
            const auto f = empirical_vorticity(sample_lambda(10, IntensityLaw::gaussian, rng), 3);
            a.push_back(std::norm(f.complex_coeff({1, 0})));
            b.push_back(std::norm(f.complex_coeff({2, -2})));
        }
        for (const auto* v : {&a, &b}) {
            const auto st = testing::stat(*v);
            CHECK(std::abs(st.mean - 1.0) < 3 * st.se);
        }
    }
}

TEST_CASE("window parsing") {
    const auto w = parse_window("0.51,inf");
    CHECK(w.a == 0.51);
    CHECK(std::isinf(w.b));
    CHECK(parse_window("-inf,2").contains(-1e300));
    CHECK_THROWS_AS(parse_window("1,1"), ParseError);
    CHECK_THROWS_AS(parse_window("x,1"), ParseError);
    CHECK_THROWS_AS(EnergyWindow(2.0, 1.0), InvalidArgument);
    CHECK(EnergyWindow(0.0, 1.0).contains(1.0));
    CHECK(EnergyWindow(0.0, 1.0).contains(0.0));
    CHECK(parse_kernel_choice("min-image-log") == KernelChoice::min_image_log);
    CHECK_THROWS_AS(parse_kernel_choice("log"), ParseError);
}

TEST_CASE("clustered ensemble energy is of the reported size") {
    // Ten samples, five copies of {2, 4, 8} among 200 vortices; the
    // torus-green convention lands within a factor 3 of 1.364966.
    std::vector<std::size_t> sizes;
    for (int r = 0; r < 5; ++r)
        for (std::size_t m : {2, 4, 8}) sizes.push_back(m);
    double sum = 0.0;
    for (int s = 0; s < 10; ++s) {
        Rng rng = stream_rng(23, s);
        const auto c = make_clustered(130, sizes, 0.01, rng);
        sum += interaction_energy(c, KernelChoice::torus_green, IntensityScale::sqrt_n, &g());
    }
    const double mean = sum / 10.0;
    CHECK(mean > 1.364966 / 3.0);
    CHECK(mean < 1.364966 * 3.0);
}

TEST_CASE("quadratic form of gaussian vortices has mean zero") {
    const MollifiedGreen gn(4, g());
    std::vector<double> q;
    for (int s = 0; s < 4000; ++s) {
        Rng rng = stream_rng(24, s);
        const auto c = sample_lambda(30, IntensityLaw::gaussian, rng);
        q.push_back(quadratic_form(c, [&](Vec2 x, Vec2 y) { return gn(x, y); }));
    }
    const auto st = testing::stat(q);
    CHECK(std::abs(st.mean) < 3 * st.se);
}
