#include "specwb/counting.hpp"

#include "specwb/errors.hpp"
#include "specwb/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specwb {

CountingFunction::CountingFunction(const Spectrum& s) : values_(s.values()), valid_up_to_(s.valid_up_to()) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (breakpoints_.empty() || !same_value(values_[i], breakpoints_.back())) {
            breakpoints_.push_back(values_[i]);
            cumulative_.push_back(0);
        }
        cumulative_.back() = i + 1;
    }
}

std::uint64_t CountingFunction::operator()(double lambda) const {
    if (!at_most(lambda, valid_up_to_)) throw ValidationError("counting function evaluated beyond its validity window");
    const auto it = std::partition_point(breakpoints_.begin(), breakpoints_.end(),
                                         [&](double b) { return at_most(b, lambda); });
    return it == breakpoints_.begin() ? 0 : cumulative_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

std::uint64_t CountingFunction::below(double lambda) const {
    if (!at_most(lambda, valid_up_to_)) throw ValidationError("counting function evaluated beyond its validity window");
    const auto it = std::partition_point(breakpoints_.begin(), breakpoints_.end(),
                                         [&](double b) { return b < lambda && !same_value(b, lambda); });
    return it == breakpoints_.begin() ? 0 : cumulative_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double CountingFunction::eigenvalue(std::size_t k) const {
    if (k < 1 || k > values_.size()) throw ValidationError("eigenvalue index outside the known window");
    return values_[k - 1];
}

CountingFunction from_spectrum(const Spectrum& s) { return CountingFunction(s); }

ComparisonReport is_subspectral_on(const CountingFunction& a, const CountingFunction& b, double lo) {
    const double hi = std::min(a.valid_up_to(), b.valid_up_to());
    if (!(hi > lo)) throw ValidationError("subspectrality: empty comparison window");
    ComparisonReport rep;
    rep.window_lo = lo;
    rep.window_hi = hi;
    // N_b only jumps at its breakpoints and N_a never decreases.
    auto test = [&](double x) {
        const auto na = a(x);
        const auto nb = b(x);
        if (na >= nb) return true;
        rep.holds = false;
        rep.first_violation = Violation{x, static_cast<double>(na), static_cast<double>(nb)};
        return false;
    };
    if (!test(lo)) return rep;
    for (double x : b.breakpoints()) {
        if (x <= lo) continue;
        if (!at_most(x, hi)) break;
        if (!test(x)) return rep;
    }
    return rep;
}

ComparisonReport is_subspectral(const CountingFunction& a, const CountingFunction& b) {
    return is_subspectral_on(a, b, 0.0);
}

MonotoneFunction as_monotone(const WeylFunction& w) {
    MonotoneFunction f;
    f.eval = [w](double x) { return w(x); };
    f.inverse = [w](double y) { return w.inverse(y); };
    return f;
}

namespace {

// Smallest x ≥ 0 with f(x) ≥ y, to relative tolerance 1e-12.
double bisect_inverse(const std::function<double(double)>& f, double y, double start) {
    if (f(0.0) >= y) return 0.0;
    double lo = 0.0;
    double hi = std::max(start, 1.0);
    for (int i = 0; f(hi) < y; ++i) {
        if (i > 2000) return std::numeric_limits<double>::infinity();
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < y ? lo : hi) = mid;
    }
    return hi;
}

void require_monotone(const CountingFunction& a, const MonotoneFunction& f, double hi) {
    std::vector<double> xs(a.breakpoints().begin(), a.breakpoints().end());
    constexpr int kSamples = 64;
    for (int i = 0; i <= kSamples; ++i) xs.push_back(hi * i / kSamples);
    std::sort(xs.begin(), xs.end());
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        if (x > hi) break;
        const double v = f.eval(x);
        if (!std::isfinite(v)) throw ValidationError("comparison function is not finite on the window");
        if (v < prev - 1e-12 * std::abs(prev)) throw ValidationError("comparison function is not monotone on the window");
        prev = std::max(prev, v);
    }
}

} // namespace

ComparisonReport is_subspectral_to_function(const CountingFunction& a, const MonotoneFunction& f, Direction dir) {
    if (!f.eval) throw ValidationError("comparison function missing");
    const double hi = a.valid_up_to();
    ComparisonReport rep;
    rep.window_hi = hi;
    if (!(hi > 0.0)) return rep;
    require_monotone(a, f, hi);
    auto inverse = [&](double y) { return f.inverse ? f.inverse(y) : bisect_inverse(f.eval, y, hi); };
    auto fail = [&](double x, double lhs, double rhs) {
        rep.holds = false;
        rep.first_violation = Violation{x, lhs, rhs};
        return rep;
    };
    const std::uint64_t top = a(hi);
    for (std::uint64_t k = 1; k <= top; ++k) {
        const double lk = a.eigenvalue(k);
        const double threshold = inverse(static_cast<double>(k));
        if (dir == Direction::Sub) {
            if (!at_most(lk, threshold))
                return fail(lk, static_cast<double>(a.below(lk)) + 1.0, f.eval(lk));
        } else {
            if (!at_most(threshold, lk)) return fail(lk, static_cast<double>(a(lk)), f.eval(lk));
        }
    }
    // Sub also constrains the stretch between the last eigenvalue and the cap.
    if (dir == Direction::Sub && !at_most(hi, inverse(static_cast<double>(top) + 1.0)))
        return fail(hi, static_cast<double>(top) + 1.0, f.eval(hi));
    return rep;
}

std::optional<double> subspectral_beyond(const CountingFunction& a, const CountingFunction& b) {
    const double hi = std::min(a.valid_up_to(), b.valid_up_to());
    if (!(hi > 0.0)) throw ValidationError("subspectrality: empty comparison window");
    std::vector<double> pts{0.0};
    for (const auto* cf : {&a, &b})
        for (double x : cf->breakpoints())
            if (x > 0.0 && at_most(x, hi)) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double x, double y) { return same_value(x, y); }), pts.end());
    // N_a − N_b is constant on [pts[i], pts[i+1]).
    std::optional<std::size_t> last_bad;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (a(pts[i]) < b(pts[i])) last_bad = i;
    if (!last_bad) return 0.0;
    if (*last_bad + 1 == pts.size()) return std::nullopt;
    return pts[*last_bad + 1];
}

std::vector<double> subspectral_mean_series(const Spectrum& s1, const Spectrum& s2, std::size_t n) {
    if (n == 0) throw ValidationError("subspectral mean: n must be >= 1");
    if (s1.size() < n || s2.size() < n) throw ValidationError("subspectral mean: not enough eigenvalues");
    std::vector<double> out;
    out.reserve(n);
    std::size_t above = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (clearly_greater(s1[k], s2[k])) ++above;
        out.push_back(static_cast<double>(above) / static_cast<double>(k + 1));
    }
    return out;
}

double subspectral_mean(const Spectrum& s1, const Spectrum& s2, std::size_t n) {
    return subspectral_mean_series(s1, s2, n).back();
}

ComparisonReport partition_check(const RectangleDomain& whole, int cut_axis, double cut_pos, Boundary internal,
                                 Boundary outer, double cap) {
    if (cut_axis < 0 || cut_axis >= whole.dimension()) throw ValidationError("partition: cut axis out of range");
    const double a = whole.dims()[static_cast<std::size_t>(cut_axis)];
    if (!(cut_pos > 0.0 && cut_pos < a)) throw ValidationError("partition: cut position must lie strictly inside");
    if (!(cap > 0.0)) throw ValidationError("partition: cap must be positive");

    std::vector<FaceConditions> faces(whole.dims().size(), FaceConditions{outer, outer});
    auto left_dims = whole.dims();
    auto right_dims = whole.dims();
    left_dims[static_cast<std::size_t>(cut_axis)] = cut_pos;
    right_dims[static_cast<std::size_t>(cut_axis)] = a - cut_pos;
    auto left_faces = faces;
    auto right_faces = faces;
    left_faces[static_cast<std::size_t>(cut_axis)].hi = internal;
    right_faces[static_cast<std::size_t>(cut_axis)].lo = internal;

    const Spectrum parts = merge_spectra({box_spectrum(RectangleDomain(left_dims), left_faces, cap),
                                          box_spectrum(RectangleDomain(right_dims), right_faces, cap)});
    const CountingFunction n_parts(parts);
    const CountingFunction n_whole(box_spectrum(whole, faces, cap));
    return internal == Boundary::Dirichlet ? is_subspectral(n_whole, n_parts) : is_subspectral(n_parts, n_whole);
}

} // namespace specwb
