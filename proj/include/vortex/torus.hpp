#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

namespace vortex {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double norm2(Vec2 a) noexcept { return dot(a, a); }
inline double norm(Vec2 a) noexcept { return std::sqrt(norm2(a)); }

// Reduce a coordinate to [0,1).
inline double wrap_unit(double t) noexcept {
    double r = t - std::floor(t);
    return r >= 1.0 ? 0.0 : r;
}

// Reduce a coordinate to [-1/2,1/2).
inline double wrap_centered(double t) noexcept {
    double r = t - std::floor(t + 0.5);
    return r >= 0.5 ? r - 1.0 : r;
}

inline Vec2 canonical(Vec2 p) noexcept { return {wrap_unit(p.x), wrap_unit(p.y)}; }
inline Vec2 min_image(Vec2 d) noexcept { return {wrap_centered(d.x), wrap_centered(d.y)}; }
inline double torus_distance(Vec2 a, Vec2 b) noexcept { return norm(min_image(a - b)); }

// Nonzero integer wave vector.
struct WaveIndex {
    int k1 = 0;
    int k2 = 0;

    // k1 > 0, or k1 == 0 and k2 > 0.
    constexpr bool positive_half() const noexcept { return k1 > 0 || (k1 == 0 && k2 > 0); }
    constexpr bool is_zero() const noexcept { return k1 == 0 && k2 == 0; }
    constexpr std::int64_t norm2() const noexcept {
        return std::int64_t(k1) * k1 + std::int64_t(k2) * k2;
    }
    constexpr WaveIndex operator-() const noexcept { return {-k1, -k2}; }
    friend constexpr bool operator==(WaveIndex, WaveIndex) = default;
};

// Orthonormal real basis of mean-zero L^2: sqrt2 cos(2 pi k.x) on the
// positive half-lattice and sqrt2 sin(2 pi k.x) on its negative.
double basis_eval(WaveIndex k, Vec2 x);

// Fourier coefficient of the torus Green function, -1/(4 pi^2 |k|^2).
double green_fourier_coeff(WaveIndex k);

// The wave vectors 0 < |k| <= N, enumerated by (k1, k2) in lexicographic
// order. Optionally the zero vector is prepended.
class IndexSet {
public:
    explicit IndexSet(int cutoff, bool include_zero = false);

    int cutoff() const noexcept { return cutoff_; }
    bool includes_zero() const noexcept { return include_zero_; }
    std::size_t size() const noexcept { return members_.size(); }
    const std::vector<WaveIndex>& members() const noexcept { return members_; }
    const WaveIndex& operator[](std::size_t i) const noexcept { return members_[i]; }

    // Position of k in members(), or npos when absent.
    std::size_t find(WaveIndex k) const noexcept;
    // Position of -members()[i].
    std::size_t partner(std::size_t i) const noexcept { return partner_[i]; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    int cutoff_;
    bool include_zero_;
    std::vector<WaveIndex> members_;
    std::vector<std::size_t> partner_;
    std::vector<std::size_t> row_start_;  // first member with given k1
};

// Shared, immutable index set for the cutoff (cached per cutoff).
std::shared_ptr<const IndexSet> lattice(int cutoff);

// |{k in Z^2 : 0 < |k|^2 <= N^2}| by direct counting of each column.
std::size_t count_lattice_points(int cutoff);

}  // namespace vortex
