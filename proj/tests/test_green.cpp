#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vortex/error.hpp"
#include "vortex/green.hpp"

using namespace vortex;

namespace {

const GreenEvaluator& ewald() {
    static const GreenEvaluator g = GreenEvaluator::ewald();
    return g;
}
const GreenEvaluator& expansion() {
    static const GreenEvaluator g = GreenEvaluator::expansion();
    return g;
}
const GreenEvaluator& spectral() {
    static const GreenEvaluator g = GreenEvaluator::spectral(256);
    return g;
}

std::vector<Vec2> random_points(int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec2> out;
    while (static_cast<int>(out.size()) < count) {
        const Vec2 p{u(rng), u(rng)};
        if (norm(min_image(p)) > 0.02) out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("every backend is even and has an odd kernel") {
    for (const GreenEvaluator* g : {&ewald(), &expansion(), &spectral()}) {
        CAPTURE(g->describe());
        for (const Vec2 x : random_points(200, 1)) {
            CHECK(std::abs(g->green(x) - g->green(-x)) < 1e-13);
            const Vec2 k = g->biot_savart(x) + g->biot_savart(-x);
            CHECK(norm(k) < 1e-12);
        }
        CHECK(norm(g->biot_savart({0.5, 0.5})) < 1e-12);
    }
}

TEST_CASE("spectral backend antisymmetry is exact") {
    const auto g = GreenEvaluator::spectral(40);
    for (const Vec2 x : random_points(100, 2)) {
        const Vec2 a = g.biot_savart(x), b = g.biot_savart(-x);
        CHECK(a.x == -b.x);
        CHECK(a.y == -b.y);
    }
}

TEST_CASE("Ewald and expansion backends agree to their declared tolerance") {
    for (const Vec2 x : random_points(2000, 3)) {
        CHECK(std::abs(ewald().green(x) - expansion().green(x)) <= expansion().tolerance());
        CHECK(norm(ewald().biot_savart(x) - expansion().biot_savart(x)) <=
              expansion().kernel_tolerance());
    }
}

TEST_CASE("spectral truncation converges to the Ewald values within its tolerance") {
    // Oracle: independently coded full-lattice cosine series.
    for (const Vec2 x : random_points(60, 4)) {
        const double series = testing::green_series(x, 256);
        CHECK(std::abs(series - spectral().green(x)) < 1e-12);
        const double r = norm(min_image(x));
        CHECK(std::abs(spectral().green(x) - ewald().green(x)) <= spectral().tolerance_at(r));
        CHECK(norm(spectral().biot_savart(x) - ewald().biot_savart(x)) <=
              spectral().kernel_tolerance_at(r));
    }
}

TEST_CASE("kernel matches central differences of G") {
    const double step = 1e-4;
    for (const GreenEvaluator* g : {&ewald(), &expansion()}) {
        for (const Vec2 x : random_points(200, 5)) {
            const double d1 = (g->green(x + Vec2{step, 0}) - g->green(x - Vec2{step, 0})) / (2 * step);
            const double d2 = (g->green(x + Vec2{0, step}) - g->green(x - Vec2{0, step})) / (2 * step);
            const Vec2 k = g->biot_savart(x);
            // O(step^2) with |G'''| ~ 1/(pi r^3), r >= 0.02
            CHECK(std::abs(k.x - d2) < 1e-3);
            CHECK(std::abs(k.y + d1) < 1e-3);
        }
    }
}

TEST_CASE("kernel is divergence free") {
    const double step = 1e-4;
    for (const Vec2 x : random_points(200, 6)) {
        const auto& g = expansion();
        const double div =
            (g.biot_savart(x + Vec2{step, 0}).x - g.biot_savart(x - Vec2{step, 0}).x +
             g.biot_savart(x + Vec2{0, step}).y - g.biot_savart(x - Vec2{0, step}).y) /
            (2 * step);
        CHECK(std::abs(div) < 1e-3);
    }
}

TEST_CASE("G solves the Poisson equation away from the origin") {
    const double step = 1e-3;
    for (const Vec2 x : random_points(400, 7)) {
        if (norm(min_image(x)) < 0.15) continue;
        const auto& g = ewald();
        const double lap = (g.green(x + Vec2{step, 0}) + g.green(x - Vec2{step, 0}) +
                            g.green(x + Vec2{0, step}) + g.green(x - Vec2{0, step}) - 4 * g.green(x)) /
                           (step * step);
        CHECK(std::abs(lap + 1.0) < 1e-3);
    }
}

TEST_CASE("grid DFT reproduces the Fourier coefficients") {
    for (const GreenEvaluator* g : {&ewald(), &expansion()}) {
        const auto rep = validate_dft(*g, 128, 32);
        CHECK(rep.max_relative_error < 1e-6);
        CHECK(std::abs(rep.mean) < 1e-5);
    }
    const auto truncated = GreenEvaluator::spectral(60);
    CHECK(validate_dft(truncated, 128, 32).max_relative_error < 1e-6);
    CHECK_THROWS_AS(validate_dft(ewald(), 64, 32), InvalidArgument);
}

TEST_CASE("grid mean of G vanishes") {
    // Offset grid: the mean is the alias sum at k = 0, of order 1/M^2.
    const int m = 200;
    double s = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) s += ewald().green({(a + 0.5) / m, (b + 0.5) / m});
    CHECK(std::abs(s / (m * m)) < 1e-5);
}

TEST_CASE("closed-form alias sum equals a brute-force lattice sum") {
    const int grid = 16;
    for (WaveIndex k : {WaveIndex{1, 0}, WaveIndex{3, 2}, WaveIndex{-5, 7}}) {
        double brute = 0.0;
        const int r = 400;
        for (int m1 = -r; m1 <= r; ++m1)
            for (int m2 = -r; m2 <= r; ++m2) {
                const double a = double(k.k1) / grid + m1, b = double(k.k2) / grid + m2;
                brute += ((m1 + m2) % 2 == 0 ? 1.0 : -1.0) / (a * a + b * b);
            }
        CHECK(alternating_alias_sum(k, grid) == doctest::Approx(brute).epsilon(1e-4));
    }
}

TEST_CASE("singularity guard") {
    CHECK_THROWS_AS(ewald().green({0.0, 0.0}), Singularity);
    CHECK_THROWS_AS(ewald().green({1.0, 1e-12}), Singularity);
    CHECK_THROWS_AS(expansion().biot_savart({1e-11, 0.0}), Singularity);
    CHECK_NOTHROW(ewald().green({1e-9, 0.0}));
    const auto loose = ewald().with_guard(1e-3);
    CHECK_THROWS_AS(loose.green({1e-4, 0.0}), Singularity);
}

TEST_CASE("value at the half period") {
    const double oracle = testing::green_series({0.5, 0.0}, 512);
    CHECK(std::abs(ewald().green({0.5, 0.0}) - oracle) < 1.0 / (512.0 * 512.0));
}
