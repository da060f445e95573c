#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vortex/error.hpp"
#include "vortex/torus.hpp"

using namespace vortex;

TEST_CASE("basis_eval on the documented points") {
    CHECK(basis_eval({1, 0}, {0.0, 0.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(basis_eval({0, 1}, {0.25, 0.25})) < 1e-15);
    CHECK(basis_eval({-1, 0}, {0.25, 0.0}) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(basis_eval({0, 0}, {0.1, 0.2}), InvalidIndex);
}

TEST_CASE("half-lattice classification is total and exclusive") {
    for (int a = -6; a <= 6; ++a)
        for (int b = -6; b <= 6; ++b) {
            const WaveIndex k{a, b};
            if (k.is_zero()) continue;
            CHECK(k.positive_half() != (-k).positive_half());
        }
}

TEST_CASE("green_fourier_coeff") {
    const double p2 = pi * pi;
    CHECK(green_fourier_coeff({1, 0}) == doctest::Approx(-1.0 / (4 * p2)).epsilon(1e-15));
    CHECK(green_fourier_coeff({1, 1}) == doctest::Approx(-1.0 / (8 * p2)).epsilon(1e-15));
    CHECK(green_fourier_coeff({3, 4}) == doctest::Approx(-1.0 / (100 * p2)).epsilon(1e-15));
    CHECK_THROWS_AS(green_fourier_coeff({0, 0}), InvalidIndex);
}

TEST_CASE("IndexSet membership matches direct enumeration") {
    for (int n : {1, 2, 5, 16, 33}) {
        std::size_t expected = 0;
        for (int a = -n; a <= n; ++a)
            for (int b = -n; b <= n; ++b)
                if (a * a + b * b > 0 && a * a + b * b <= n * n) ++expected;
        const IndexSet set(n);
        CHECK(set.size() == expected);
        CHECK(count_lattice_points(n) == expected);
        const IndexSet with_zero(n, true);
        CHECK(with_zero.size() == expected + 1);
        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK(set.find(set[i]) == i);
            CHECK(set[set.partner(i)] == -set[i]);
        }
        CHECK(set.find({n + 1, 0}) == IndexSet::npos);
    }
    CHECK(IndexSet(1).size() == 4);
}

TEST_CASE("lattice() shares one set per cutoff") {
    CHECK(lattice(12).get() == lattice(12).get());
    CHECK(lattice(12)->cutoff() == 12);
}

TEST_CASE("basis is orthonormal on a quadrature grid") {
    // A 4N x 4N grid integrates products of modes with |k| <= N exactly.
    const int n = 4, grid = 4 * n;
    const IndexSet set(n);
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i; j < set.size(); ++j) {
            double s = 0.0;
            for (int a = 0; a < grid; ++a)
                for (int b = 0; b < grid; ++b) {
                    const Vec2 x{double(a) / grid, double(b) / grid};
                    s += basis_eval(set[i], x) * basis_eval(set[j], x);
                }
            s /= grid * grid;
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("coordinate reduction") {
    CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(-1e-18) < 1.0);
    CHECK(wrap_centered(0.75) == doctest::Approx(-0.25));
    CHECK(wrap_centered(0.5) == doctest::Approx(-0.5));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 p{u(rng), u(rng)};
        const Vec2 c = canonical(p);
        CHECK(c.x >= 0.0);
        CHECK(c.x < 1.0);
        CHECK(c.y >= 0.0);
        CHECK(c.y < 1.0);
        const Vec2 m = min_image(p);
        CHECK(std::abs(m.x) <= 0.5);
        CHECK(std::abs(m.y) <= 0.5);
        CHECK(std::abs(torus_distance(p, c)) < 1e-12);
    }
}
