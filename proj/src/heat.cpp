#include "specwb/heat.hpp"

#include "specwb/counting.hpp"
#include "specwb/errors.hpp"
#include "specwb/numeric.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace specwb {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("heat: t must be positive and finite");
}

// c·(√x + d)^n expanded in powers of √x.
std::vector<CountingEnvelope::Term> shifted_power(double c, double d, int n) {
    std::vector<CountingEnvelope::Term> terms;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) binom = binom * (n - j + 1) / j;
        const double coef = c * binom * std::pow(d, n - j);
        if (coef > 0.0) terms.push_back({coef, 0.5 * j});
    }
    return terms;
}

// Diameter of the parallelepiped spanned by the columns of basis.
double cell_diameter(const Eigen::MatrixXd& basis) {
    const int n = static_cast<int>(basis.cols());
    Eigen::VectorXd s = Eigen::VectorXd::Constant(n, -1.0);
    double best = 0.0;
    for (;;) {
        best = std::max(best, (basis * s).norm());
        int i = 0;
        while (i < n && s(i) == 1.0) s(i++) = -1.0;
        if (i == n) break;
        s(i) += 1.0;
    }
    return best;
}

} // namespace

CountingEnvelope::CountingEnvelope(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (const auto& term : terms_)
        if (!(term.coefficient >= 0.0) || !(term.power >= 0.0))
            throw ValidationError("envelope terms need nonnegative coefficients and powers");
}

CountingEnvelope CountingEnvelope::rectangle(const RectangleDomain& dom, Boundary bc) {
    const int n = dom.dimension();
    const double c = one_term_weyl(n, dom.volume()).c_volume();
    if (bc == Boundary::Dirichlet) return CountingEnvelope({{c, 0.5 * n}});
    return CountingEnvelope(shifted_power(c, codiagonal(dom), n));
}

CountingEnvelope CountingEnvelope::lattice(const Eigen::MatrixXd& basis) {
    const int n = static_cast<int>(basis.rows());
    const double covolume = std::abs(basis.determinant());
    return CountingEnvelope(shifted_power(unit_ball_volume(n) / covolume, cell_diameter(basis), n));
}

CountingEnvelope CountingEnvelope::torus(const FlatTorus& t) { return lattice(t.dual_basis()); }

CountingEnvelope CountingEnvelope::li_yau(double volume, int n) {
    const double c = one_term_weyl(n, volume).c_volume() * li_yau_factor(n);
    return CountingEnvelope({{c, 0.5 * n}});
}

double CountingEnvelope::operator()(double x) const {
    double v = 0.0;
    for (const auto& term : terms_) v += term.coefficient * std::pow(x, term.power);
    return v;
}

double CountingEnvelope::laplace_tail(double cutoff, double t) const {
    double v = 0.0;
    for (const auto& term : terms_)
        v += term.coefficient * std::pow(t, -term.power) * boost::math::tgamma(term.power + 1.0, cutoff * t);
    return v;
}

HeatTraceResult heat_trace_partial(const Spectrum& s, double t) {
    require_positive_time(t);
    CompensatedSum sum;
    for (double v : s.values()) sum.add(std::exp(-v * t));
    return {sum.value(), std::nullopt, t};
}

HeatTraceResult heat_trace_partial(const Spectrum& s, double t, const CountingEnvelope& envelope) {
    HeatTraceResult r = heat_trace_partial(s, t);
    if (!s.cap_complete()) throw ValidationError("heat tail bound needs a cap-complete spectrum");
    const double cap = s.valid_up_to();
    const double integral = envelope.laplace_tail(cap, t);
    const double known = std::exp(-cap * t) * static_cast<double>(s.size());
    // Small absolute margin for the rounding in the subtraction.
    r.tail_bound = std::max(0.0, integral - known) + 4.0 * std::numeric_limits<double>::epsilon() * integral;
    return r;
}

HeatTraceResult heat_trace_partial(const Spectrum& s, double t, double volume, int n) {
    return heat_trace_partial(s, t, CountingEnvelope::li_yau(volume, n));
}

namespace {

constexpr double kJacobiTail = 1e-14;
constexpr double kRadiusSafety = 2.0;

struct JacobiTails {
    double dual;
    double lattice;
};

// Both Gaussian sums contain the origin term 1, so absolute tails bound the
// relative truncation error.
JacobiTails jacobi_tails(const FlatTorus& torus, double t, double radius) {
    const double lattice_radius = 2.0 * t * radius;
    return {CountingEnvelope::torus(torus).laplace_tail(radius * radius, t),
            CountingEnvelope::lattice(torus.basis()).laplace_tail(lattice_radius * lattice_radius, 0.25 / t)};
}

bool tails_small(const JacobiTails& tails) { return tails.dual <= kJacobiTail && tails.lattice <= kJacobiTail; }

double minimal_radius(const FlatTorus& torus, double t) {
    double hi = 1.0;
    for (int i = 0; !tails_small(jacobi_tails(torus, t, hi)); ++i) {
        if (i > 200) throw ComputationError("jacobi: no finite truncation radius found");
        hi *= 2.0;
    }
    double lo = 0.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tails_small(jacobi_tails(torus, t, mid)) ? hi : lo) = mid;
    }
    return hi;
}

double gaussian_sum(const Eigen::MatrixXd& basis, double radius, double rate) {
    CompensatedSum sum;
    for (double sq : lattice_squared_norms(basis, radius * radius)) sum.add(std::exp(-sq * rate));
    return sum.value();
}

} // namespace

double jacobi_required_radius(const FlatTorus& torus, double t) {
    require_positive_time(t);
    return kRadiusSafety * minimal_radius(torus, t);
}

JacobiResult jacobi_check(const FlatTorus& torus, double t, double radius) {
    require_positive_time(t);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("jacobi: radius must be positive");
    if (!tails_small(jacobi_tails(torus, t, radius)))
        throw ValidationError("jacobi: radius " + std::to_string(radius) + " too small for t=" + std::to_string(t) +
                              "; required radius " + std::to_string(jacobi_required_radius(torus, t)));
    const int n = torus.dimension();
    JacobiResult r;
    r.radius = radius;
    r.lattice_radius = 2.0 * t * radius;
    r.lhs = gaussian_sum(torus.dual_basis(), radius, t);
    r.rhs = torus.volume() / std::pow(4.0 * kPi * t, 0.5 * n) * gaussian_sum(torus.basis(), r.lattice_radius, 0.25 / t);
    r.residual = std::abs(r.lhs - r.rhs) / r.rhs;
    return r;
}

JacobiResult jacobi_check(const FlatTorus& torus, double t) {
    return jacobi_check(torus, t, jacobi_required_radius(torus, t));
}

double packing_heat_bound(double volume, const PackingSpec& p, int n, double t) {
    require_positive_time(t);
    if (!(volume > 0.0) || n < 1) throw ValidationError("packing heat bound: invalid volume or dimension");
    return volume / (p.delta() * std::pow(4.0 * kPi * t, 0.5 * n));
}

double leading_rate(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3) throw ValidationError("leading rate: need at least 3 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [t, f] = samples[i];
        if (!(f > 0.0) || !std::isfinite(f)) throw ValidationError("leading rate: samples must be positive");
        if (!(t > 0.0) || (i > 0 && !(t > samples[i - 1].first)))
            throw ValidationError("leading rate: times must be positive and increasing");
    }
    // g(t) = −log F(t)/t = r + c/t + (exponentially small); quadratic
    // Lagrange extrapolation in h = 1/t to h = 0.
    double h[3], g[3];
    for (int i = 0; i < 3; ++i) {
        const auto [t, f] = samples[samples.size() - 3 + static_cast<std::size_t>(i)];
        h[i] = 1.0 / t;
        g[i] = -std::log(f) / t;
    }
    double r = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) w *= h[j] / (h[j] - h[i]);
        r += w * g[i];
    }
    return r;
}

namespace {

constexpr double kMpTailFraction = 1e-3;

bool tail_admissible(const Spectrum& s, const CountingEnvelope& env, double t) {
    const auto r = heat_trace_partial(s, t, env);
    return r.value > 0.0 && *r.tail_bound <= kMpTailFraction * r.value;
}

} // namespace

MpCheck mp_leading_check(const Spectrum& s, double volume, int n, const CountingEnvelope& envelope) {
    if (!(volume > 0.0) || n < 1) throw ValidationError("MP check: invalid volume or dimension");
    if (!s.cap_complete()) throw ValidationError("MP check: needs a cap-complete spectrum");
    const double cap = s.valid_up_to();
    double first_positive = cap;
    for (double v : s.values())
        if (v > 0.0) {
            first_positive = v;
            break;
        }
    if (!(first_positive > 0.0)) throw ValidationError("MP check: spectrum cap must be positive");

    // Small-time regime: t·λ_+ ≤ 1.
    const double t_hi = 1.0 / first_positive;
    if (!tail_admissible(s, envelope, t_hi)) {
        const double value = heat_trace_partial(s, t_hi).value;
        double need = std::max(cap, first_positive);
        while (envelope.laplace_tail(need, t_hi) > kMpTailFraction * std::max(value, 1e-300) && need < 1e300) need *= 2.0;
        throw ValidationError("MP check: cap " + std::to_string(cap) + " too small for any admissible t; cap >= " +
                              std::to_string(need) + " suffices");
    }
    double lo = std::log(t_hi) - 40.0, hi = std::log(t_hi);
    if (tail_admissible(s, envelope, std::exp(lo))) {
        hi = lo;
    } else {
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (tail_admissible(s, envelope, std::exp(mid)) ? hi : lo) = mid;
        }
    }
    const double t_min = std::exp(hi);

    MpCheck out{0.0, {}, {}};
    constexpr int kPoints = 9;
    for (int i = 0; i < kPoints; ++i) {
        const double t = t_min * std::pow(4.0, static_cast<double>(i) / (kPoints - 1));
        const double z = heat_trace_partial(s, t).value;
        const double dev = std::abs(std::pow(4.0 * kPi * t, 0.5 * n) * z - volume) / volume;
        out.times.push_back(t);
        out.deviations.push_back(dev);
        out.deviation = std::max(out.deviation, dev);
    }
    return out;
}

MpCheck mp_leading_check(const Spectrum& s, double volume, int n) {
    return mp_leading_check(s, volume, n, CountingEnvelope::li_yau(volume, n));
}

std::vector<TorusPairEvidence> systole_consistency_search(const std::vector<FlatTorus>& tori, double cap) {
    if (!(cap > 0.0)) throw ValidationError("systole search: cap must be positive");
    std::vector<CountingFunction> counts;
    std::vector<double> systoles;
    for (const auto& t : tori) {
        counts.emplace_back(torus_spectrum(t, cap));
        systoles.push_back(torus_systole(t));
    }
    // Leading rate of τ ↦ Σ_{ℓ≠0} e^{−|ℓ|²τ}.
    auto rate = [&](std::size_t i) {
        const double tau_max = 80.0 / (systoles[i] * systoles[i]);
        std::vector<std::pair<double, double>> samples;
        for (double tau : {tau_max / 4.0, tau_max / 2.0, tau_max}) {
            CompensatedSum sum;
            // Terms beyond |ℓ|²τ ≈ 60 sit below 1e-26 of the leading term.
            const double radius_sq = 60.0 / tau + systoles[i] * systoles[i];
            for (double sq : lattice_squared_norms(tori[i].basis(), radius_sq))
                if (sq > 0.0) sum.add(std::exp(-sq * tau));
            samples.emplace_back(tau, sum.value());
        }
        return leading_rate(samples);
    };
    std::vector<TorusPairEvidence> out;
    for (std::size_t i = 0; i < tori.size(); ++i)
        for (std::size_t j = 0; j < tori.size(); ++j) {
            if (i == j || !same_value(tori[i].volume(), tori[j].volume()) ||
                tori[i].dimension() != tori[j].dimension())
                continue;
            if (!is_subspectral(counts[i], counts[j]).holds) continue;
            if (is_subspectral(counts[j], counts[i]).holds && j < i) continue;  // isospectral pair, report once
            TorusPairEvidence e{i, j, systoles[i], systoles[j], rate(i), rate(j), false};
            const double tol = 1e-3;
            e.consistent = e.systole_sub <= e.systole_super * (1.0 + 1e-12) &&
                           std::abs(e.rate_sub - e.systole_sub * e.systole_sub) <= tol * e.rate_sub &&
                           std::abs(e.rate_super - e.systole_super * e.systole_super) <= tol * e.rate_super;
            out.push_back(e);
        }
    return out;
}

} // namespace specwb
