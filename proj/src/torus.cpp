#include "vortex/torus.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "vortex/error.hpp"

namespace vortex {

double basis_eval(WaveIndex k, Vec2 x) {
    if (k.is_zero()) throw InvalidIndex("basis_eval: k = (0,0) is not a basis index");
    const double phase = two_pi * (k.k1 * x.x + k.k2 * x.y);
    return std::numbers::sqrt2 * (k.positive_half() ? std::cos(phase) : std::sin(phase));
}

double green_fourier_coeff(WaveIndex k) {
    if (k.is_zero()) throw InvalidIndex("green_fourier_coeff: k = (0,0) (mean mode is zero)");
    return -1.0 / (4.0 * pi * pi * static_cast<double>(k.norm2()));
}

IndexSet::IndexSet(int cutoff, bool include_zero) : cutoff_(cutoff), include_zero_(include_zero) {
    if (cutoff < 1) throw InvalidArgument("IndexSet: cutoff must be >= 1");
    const std::int64_t n2 = std::int64_t(cutoff) * cutoff;
    row_start_.reserve(2 * cutoff + 2);
    for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
        row_start_.push_back(members_.size());
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            WaveIndex k{k1, k2};
            if (k.norm2() > n2) continue;
            if (k.is_zero() && !include_zero) continue;
            members_.push_back(k);
        }
    }
    row_start_.push_back(members_.size());
    partner_.resize(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) partner_[i] = find(-members_[i]);
}

std::size_t IndexSet::find(WaveIndex k) const noexcept {
    if (k.k1 < -cutoff_ || k.k1 > cutoff_) return npos;
    const std::size_t row = static_cast<std::size_t>(k.k1 + cutoff_);
    auto first = members_.begin() + static_cast<std::ptrdiff_t>(row_start_[row]);
    auto last = members_.begin() + static_cast<std::ptrdiff_t>(row_start_[row + 1]);
    auto it = std::lower_bound(first, last, k.k2,
                               [](const WaveIndex& a, int v) { return a.k2 < v; });
    if (it == last || it->k2 != k.k2) return npos;
    return static_cast<std::size_t>(it - members_.begin());
}

std::shared_ptr<const IndexSet> lattice(int cutoff) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const IndexSet>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[cutoff];
    if (!slot) slot = std::make_shared<const IndexSet>(cutoff);
    return slot;
}

std::size_t count_lattice_points(int cutoff) {
    std::size_t count = 0;
    const std::int64_t n2 = std::int64_t(cutoff) * cutoff;
    for (std::int64_t a = -cutoff; a <= cutoff; ++a)
        for (std::int64_t b = -cutoff; b <= cutoff; ++b)
            if (a * a + b * b <= n2 && (a != 0 || b != 0)) ++count;
    return count;
}

}  // namespace vortex
