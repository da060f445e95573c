#include "vortex/green.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

#include "vortex/error.hpp"

namespace vortex {

namespace {

using cplx = std::complex<double>;

// exp(2 pi i k t) for k = -n..n, by repeated multiplication.
std::vector<cplx> phase_table(double t, int n) {
    std::vector<cplx> out(2 * n + 1);
    const cplx step = std::polar(1.0, two_pi * t);
    out[n] = 1.0;
    cplx p = 1.0;
    for (int k = 1; k <= n; ++k) {
        p *= step;
        // resynchronise every 64 steps to bound drift
        if ((k & 63) == 0) p = std::polar(1.0, two_pi * t * k);
        out[n + k] = p;
        out[n - k] = std::conj(p);
    }
    return out;
}

double e1(double x) {
    if (x > 700.0) return 0.0;
    return -std::expint(-x);
}

}  // namespace

const char* to_string(GreenBackend b) {
    switch (b) {
        case GreenBackend::spectral: return "spectral";
        case GreenBackend::ewald: return "ewald";
        case GreenBackend::expansion: return "expansion";
    }
    return "unknown";
}

// ---------------------------------------------------------------- spectral

double SpectralGreen::green(Vec2 d) const {
    const auto ex = phase_table(d.x, cutoff);
    const auto ey = phase_table(d.y, cutoff);
    double sum = 0.0;
    for (const auto& k : modes->members()) {
        if (!k.positive_half()) continue;
        const double c = (ex[cutoff + k.k1] * ey[cutoff + k.k2]).real();
        sum += c / static_cast<double>(k.norm2());
    }
    return -sum / (2.0 * pi * pi);
}

Vec2 SpectralGreen::kernel(Vec2 d) const {
    const auto ex = phase_table(d.x, cutoff);
    const auto ey = phase_table(d.y, cutoff);
    double sx = 0.0, sy = 0.0;
    for (const auto& k : modes->members()) {
        if (!k.positive_half()) continue;
        const double s = (ex[cutoff + k.k1] * ey[cutoff + k.k2]).imag();
        const double w = s / static_cast<double>(k.norm2());
        sx += k.k2 * w;
        sy -= k.k1 * w;
    }
    return {sx / pi, sy / pi};
}

// ------------------------------------------------------------------- ewald

double EwaldGreen::short_range(Vec2 d) const {
    double sum = 0.0;
    for (int a = -image_range; a <= image_range; ++a)
        for (int b = -image_range; b <= image_range; ++b) {
            const double dx = d.x + a, dy = d.y + b;
            sum += e1(splitting * (dx * dx + dy * dy));
        }
    return -sum / (4.0 * pi) + 1.0 / (4.0 * splitting);
}

double EwaldGreen::long_range(Vec2 d) const {
    const auto ex = phase_table(d.x, fourier_cutoff);
    const auto ey = phase_table(d.y, fourier_cutoff);
    double sum = 0.0;
    for (const auto& m : modes)
        sum += m.weight * (ex[fourier_cutoff + m.k1] * ey[fourier_cutoff + m.k2]).real();
    return -sum / (2.0 * pi * pi);
}

double EwaldGreen::green(Vec2 d) const { return short_range(d) + long_range(d); }

Vec2 EwaldGreen::kernel(Vec2 d) const {
    double gx = 0.0, gy = 0.0;
    for (int a = -image_range; a <= image_range; ++a)
        for (int b = -image_range; b <= image_range; ++b) {
            const double dx = d.x + a, dy = d.y + b;
            const double r2 = dx * dx + dy * dy;
            const double w = std::exp(-splitting * r2) / r2;
            gx += dx * w;
            gy += dy * w;
        }
    gx /= two_pi;
    gy /= two_pi;
    const auto ex = phase_table(d.x, fourier_cutoff);
    const auto ey = phase_table(d.y, fourier_cutoff);
    double lx = 0.0, ly = 0.0;
    for (const auto& m : modes) {
        const double s = m.weight * (ex[fourier_cutoff + m.k1] * ey[fourier_cutoff + m.k2]).imag();
        lx += m.k1 * s;
        ly += m.k2 * s;
    }
    gx += lx / pi;
    gy += ly / pi;
    return {gy, -gx};
}

// --------------------------------------------------------------- evaluator

GreenEvaluator GreenEvaluator::spectral(int cutoff) {
    if (cutoff < 1) throw InvalidArgument("spectral Green evaluator: cutoff must be >= 1");
    SpectralGreen s{cutoff, lattice(cutoff)};
    // Measured pointwise truncation error at distance r from the origin:
    // up to about 0.03 / (r M^1.5) for G and 0.2 / (r M^0.5) for K; the
    // declared bounds carry a margin of 1.5.
    const double m = static_cast<double>(cutoff);
    const double r = reference_distance;
    return GreenEvaluator(std::move(s), 0.045 / (r * m * std::sqrt(m)) + 1e-15,
                          0.3 / (r * std::sqrt(m)));
}

GreenEvaluator GreenEvaluator::ewald(double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 1.0))
        throw InvalidArgument("ewald: tolerance must be in (0,1)");
    const double log_inv = std::log(1.0 / tolerance);
    EwaldGreen e;
    e.image_range = 2;
    // closest excluded image is at distance >= 1.5 from the fundamental cell
    e.splitting = log_inv / 2.25;
    e.fourier_cutoff = static_cast<int>(std::ceil(std::sqrt(e.splitting * log_inv) / pi)) + 1;
    const int kc = e.fourier_cutoff;
    for (int k1 = 0; k1 <= kc; ++k1)
        for (int k2 = -kc; k2 <= kc; ++k2) {
            WaveIndex k{k1, k2};
            if (!k.positive_half() || k.norm2() > std::int64_t(kc) * kc) continue;
            const double kk = static_cast<double>(k.norm2());
            e.modes.push_back({k1, k2, std::exp(-pi * pi * kk / e.splitting) / kk});
        }
    const double declared = std::max(10.0 * tolerance, 1e-13);
    return GreenEvaluator(std::move(e), declared, 10.0 * declared);
}

GreenEvaluator GreenEvaluator::expansion() {
    static const ExpansionGreen fitted = [] {
        const auto ref = ewald(1e-15);
        return fit_expansion(std::get<EwaldGreen>(ref.impl()));
    }();
    return GreenEvaluator(fitted, 1e-13, 1e-12);
}

GreenEvaluator GreenEvaluator::with_guard(double guard) const {
    if (!(guard > 0.0)) throw InvalidArgument("guard distance must be positive");
    GreenEvaluator g = *this;
    g.guard_ = guard;
    return g;
}

Vec2 GreenEvaluator::checked_separation(Vec2 x) const {
    const Vec2 d = min_image(x);
    if (norm(d) < guard_) {
        std::ostringstream os;
        os << "Green function evaluated within " << guard_ << " of a lattice point (x = " << x.x
           << ", " << x.y << ")";
        throw Singularity(os.str());
    }
    return d;
}

double GreenEvaluator::green(Vec2 x) const {
    const Vec2 d = checked_separation(x);
    return std::visit([d](const auto& b) { return b.green(d); }, impl_);
}

Vec2 GreenEvaluator::biot_savart(Vec2 x) const {
    const Vec2 d = checked_separation(x);
    return std::visit([d](const auto& b) { return b.kernel(d); }, impl_);
}

std::string GreenEvaluator::describe() const {
    std::ostringstream os;
    os << to_string(backend());
    if (const auto* s = std::get_if<SpectralGreen>(&impl_)) os << "(cutoff=" << s->cutoff << ")";
    if (const auto* e = std::get_if<EwaldGreen>(&impl_))
        os << "(eta=" << e->splitting << ",images=" << e->image_range
           << ",fourier=" << e->fourier_cutoff << ")";
    if (std::holds_alternative<ExpansionGreen>(impl_))
        os << "(terms=" << ExpansionGreen::terms << ")";
    return os.str();
}

// -------------------------------------------------------------- expansion

ExpansionGreen fit_expansion(const EwaldGreen& reference, double radius, int samples) {
    std::vector<double> remainder(static_cast<std::size_t>(samples));
    for (int p = 0; p < samples; ++p) {
        const double theta = two_pi * (p + 0.5) / samples;
        const Vec2 z{radius * std::cos(theta), radius * std::sin(theta)};
        double prod = 1.0;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) prod *= norm2(Vec2{z.x - a, z.y - b});
        remainder[p] = reference.green(min_image(z)) - std::log(prod) / (4.0 * pi) +
                       0.25 * norm2(z);
    }
    ExpansionGreen out;
    for (int j = 0; j <= ExpansionGreen::terms; ++j) {
        double acc = 0.0;
        for (int p = 0; p < samples; ++p) {
            const double theta = two_pi * (p + 0.5) / samples;
            acc += remainder[p] * std::cos(4.0 * j * theta);
        }
        acc /= samples;
        out.coeff[j] = j == 0 ? acc : 2.0 * acc / std::pow(radius, 4 * j);
    }
    return out;
}

// -------------------------------------------------------------- validation

double alternating_alias_sum(WaveIndex k, int grid) {
    if (k.is_zero()) throw InvalidIndex("alternating_alias_sum: k = 0");
    const double alpha = static_cast<double>(k.k1) / grid;
    const double beta = static_cast<double>(k.k2) / grid;
    const double ca = std::cos(pi * alpha), c2a = std::cos(two_pi * alpha);
    const int rows = 40;
    double sum = 0.0;
    for (int r = rows; r >= 0; --r) {
        for (int sgn : {1, -1}) {
            if (r == 0 && sgn == -1) continue;
            const int m2 = sgn * r;
            const double b = m2 + beta;
            double row;
            if (b == 0.0) {
                const double sa = std::sin(pi * alpha);
                row = pi * pi * ca / (sa * sa);
            } else {
                row = (pi / b) * 2.0 * std::sinh(pi * b) * ca / (std::cosh(two_pi * b) - c2a);
            }
            sum += (m2 % 2 == 0 ? 1.0 : -1.0) * row;
        }
    }
    return sum;
}

DftReport validate_dft(const GreenEvaluator& g, int grid, int kmax) {
    if (grid < 4 || kmax < 1 || 2 * kmax >= grid)
        throw InvalidArgument("validate_dft: need 1 <= kmax < grid/2");
    const auto M = static_cast<std::size_t>(grid);
    std::vector<double> samples(M * M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            samples[i * M + j] = g.green(Vec2{(i + 0.5) / grid, (j + 0.5) / grid});

    // Separable DFT: first along x2 for every k2, then along x1.
    const std::size_t K = static_cast<std::size_t>(2 * kmax + 1);
    std::vector<cplx> tw(M * K);  // exp(-2 pi i k (j+1/2)/M)
    for (std::size_t kk = 0; kk < K; ++kk) {
        const int k = static_cast<int>(kk) - kmax;
        for (std::size_t j = 0; j < M; ++j)
            tw[kk * M + j] = std::polar(1.0, -two_pi * k * (j + 0.5) / grid);
    }
    std::vector<cplx> partial(M * K);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t kk = 0; kk < K; ++kk) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < M; ++j) acc += samples[i * M + j] * tw[kk * M + j];
            partial[i * K + kk] = acc;
        }

    // A truncated series aliases only its retained modes.
    const auto* trunc = std::get_if<SpectralGreen>(&g.impl());
    const bool spectral = trunc != nullptr;
    auto truncated_alias = [&](WaveIndex k) {
        const int c = trunc->cutoff;
        const double c2 = static_cast<double>(c) * c;
        const int reach = c / grid + 1;
        double sum = 0.0;
        for (int m1 = -reach; m1 <= reach; ++m1)
            for (int m2 = -reach; m2 <= reach; ++m2) {
                const WaveIndex q{k.k1 + grid * m1, k.k2 + grid * m2};
                const double q2 = static_cast<double>(q.norm2());
                if (q.is_zero() || q2 > c2) continue;
                sum += ((m1 + m2) % 2 == 0 ? 1.0 : -1.0) / q2;
            }
        return sum;
    };

    DftReport report;
    const double norm = 1.0 / (static_cast<double>(M) * M);
    const double kmax2 = static_cast<double>(kmax) * kmax;
    for (std::size_t k1i = 0; k1i < K; ++k1i)
        for (std::size_t k2i = 0; k2i < K; ++k2i) {
            WaveIndex k{static_cast<int>(k1i) - kmax, static_cast<int>(k2i) - kmax};
            if (static_cast<double>(k.norm2()) > kmax2) continue;
            cplx acc = 0.0;
            for (std::size_t i = 0; i < M; ++i) acc += partial[i * K + k2i] * tw[k1i * M + i];
            const double dft = acc.real() * norm;
            if (k.is_zero()) {
                report.mean = dft;
                continue;
            }
            const double exact = green_fourier_coeff(k);
            const double aliased = spectral ? truncated_alias(k) / (-4.0 * pi * pi)
                                            : -alternating_alias_sum(k, grid) * norm / (4.0 * pi * pi);
            const double corrected = dft - (aliased - exact);
            const double rel = std::abs(corrected - exact) / std::abs(exact);
            if (rel > report.max_relative_error) {
                report.max_relative_error = rel;
                report.worst = k;
            }
        }
    return report;
}

}  // namespace vortex
