#pragma once

#include "specwb/exact_spectra.hpp"
#include "specwb/spectrum.hpp"
#include "specwb/weyl.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace specwb {

// E(x) = Σ c_j·x^{p_j} with N(x) ≤ E(x) for all x ≥ 0.
class CountingEnvelope {
public:
    struct Term {
        double coefficient;
        double power;
    };

    explicit CountingEnvelope(std::vector<Term> terms);

    // Quantitative Weyl upper bound of a rectangle.
    static CountingEnvelope rectangle(const RectangleDomain& dom, Boundary bc);
    // Lattice-point bound ω_n(√x + diam P*)^n / covol(Λ*) for torus eigenvalues.
    static CountingEnvelope torus(const FlatTorus& t);
    // Same bound for the squared lengths of a lattice with the given basis.
    static CountingEnvelope lattice(const Eigen::MatrixXd& basis);
    // Li–Yau: any Dirichlet domain has N ≤ ((n+2)/n)^{n/2}·w.
    static CountingEnvelope li_yau(double volume, int n);

    double operator()(double x) const;
    // t·∫_Λ^∞ e^{−xt}·E(x) dx, via the upper incomplete gamma function.
    double laplace_tail(double cutoff, double t) const;
    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
};

struct HeatTraceResult {
    double value = 0.0;
    std::optional<double> tail_bound;
    double t = 0.0;
};

HeatTraceResult heat_trace_partial(const Spectrum& s, double t);
// Tail bound Σ_{λ_k > Λ} e^{−λ_k t} ≤ t∫_Λ^∞ e^{−xt}E dx − e^{−Λt}·N(Λ); needs
// a CapComplete spectrum.
HeatTraceResult heat_trace_partial(const Spectrum& s, double t, const CountingEnvelope& envelope);
// (volume, n) form: Li–Yau envelope, valid for Dirichlet spectra.
HeatTraceResult heat_trace_partial(const Spectrum& s, double t, double volume, int n);

struct JacobiResult {
    double lhs;
    double rhs;
    double residual;
    double radius;          // dual-lattice truncation
    double lattice_radius;  // lattice truncation, 2t·radius
};

// Smallest radius whose Gaussian tail bounds are below 1e-14 on both sides,
// times the safety factor 2.
double jacobi_required_radius(const FlatTorus& torus, double t);
// Throws ValidationError (with the required radius) when radius is too small.
JacobiResult jacobi_check(const FlatTorus& torus, double t, double radius);
JacobiResult jacobi_check(const FlatTorus& torus, double t);

// (1/δ)·volume/(4πt)^{n/2}.
double packing_heat_bound(double volume, const PackingSpec& p, int n, double t);

// Smallest exponent of F(t) = Σ a_i e^{−r_i t}: extrapolates −log F(t)/t to
// 1/t = 0 through the last three samples.
double leading_rate(const std::vector<std::pair<double, double>>& samples);

struct MpCheck {
    double deviation;
    std::vector<double> times;
    std::vector<double> deviations;
};

// max over t in [t_min, 4·t_min] of |(4πt)^{n/2}·Z(t) − volume| / volume,
// where t_min is the smallest t with tail ≤ 1e-3·Z(t).
MpCheck mp_leading_check(const Spectrum& s, double volume, int n, const CountingEnvelope& envelope);
MpCheck mp_leading_check(const Spectrum& s, double volume, int n);

struct TorusPairEvidence {
    std::size_t sub;    // index of the subspectral torus
    std::size_t super;  // index of the other torus
    double systole_sub;
    double systole_super;
    double rate_sub;    // leading rate of Σ_{ℓ≠0} e^{−|ℓ|²τ}, ≈ systole²
    double rate_super;
    bool consistent;    // systole_sub ≤ systole_super and the rates agree
};

// Equal-volume pairs among `tori` where one is subspectral to the other on
// (0, cap]; empty when none is found.
std::vector<TorusPairEvidence> systole_consistency_search(const std::vector<FlatTorus>& tori, double cap);

} // namespace specwb
