#pragma once

#include "specwb/exact_spectra.hpp"
#include "specwb/spectrum.hpp"
#include "specwb/weyl_function.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace specwb {

// N(λ) = #{k : λ_k ≤ λ}, right-continuous, defined up to valid_up_to.
class CountingFunction {
public:
    CountingFunction() = default;
    explicit CountingFunction(const Spectrum& s);

    // Throws ValidationError for λ beyond valid_up_to.
    std::uint64_t operator()(double lambda) const;
    // N(λ⁻): eigenvalues strictly below λ (up to the equality slack).
    std::uint64_t below(double lambda) const;

    // Distinct eigenvalues, and N at each of them.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<std::uint64_t>& cumulative() const { return cumulative_; }
    double valid_up_to() const { return valid_up_to_; }
    // λ_k, 1-based, with multiplicity.
    double eigenvalue(std::size_t k) const;
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
    std::vector<double> breakpoints_;
    std::vector<std::uint64_t> cumulative_;
    double valid_up_to_ = 0.0;
};

CountingFunction from_spectrum(const Spectrum& s);

struct Violation {
    double lambda;
    double lhs;
    double rhs;
};

// Comparison on the window (lo, hi]. For counting-vs-counting checks lhs and
// rhs are N_a(λ) and N_b(λ); for function checks they are the two sides of
// the tested inequality at the witness point.
struct ComparisonReport {
    bool holds = true;
    std::optional<Violation> first_violation;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

// N_a ≥ N_b on (0, min cap]; the witness is the smallest violating point.
ComparisonReport is_subspectral(const CountingFunction& a, const CountingFunction& b);
// Same test restricted to [lo, min cap].
ComparisonReport is_subspectral_on(const CountingFunction& a, const CountingFunction& b, double lo);

struct MonotoneFunction {
    std::function<double(double)> eval;
    // Optional closed-form inverse; bisection is used when empty.
    std::function<double(double)> inverse;
};

MonotoneFunction as_monotone(const WeylFunction& w);

enum class Direction { Sub, Super };

// Sub: N + 1 ≥ f, checked as λ_k ≤ f⁻¹(k). Super: N ≤ f, checked as
// λ_k ≥ f⁻¹(k). Window is (0, valid_up_to].
ComparisonReport is_subspectral_to_function(const CountingFunction& a, const MonotoneFunction& f, Direction dir);

// Smallest breakpoint x₀ with N_a ≥ N_b on [x₀, min cap]; nullopt when the
// inequality fails at the cap.
std::optional<double> subspectral_beyond(const CountingFunction& a, const CountingFunction& b);

// (1/n)·#{k ≤ n : λ_k(s1) > λ_k(s2)}; ties are not counted.
double subspectral_mean(const Spectrum& s1, const Spectrum& s2, std::size_t n);
// Entry m-1 is the subspectral mean at m, for m = 1..n.
std::vector<double> subspectral_mean_series(const Spectrum& s1, const Spectrum& s2, std::size_t n);

// Splits `whole` at cut_pos along cut_axis with `internal` on the new faces
// and `outer` on the original boundary. Internal Dirichlet: whole is
// subspectral to the parts. Internal Neumann: parts are subspectral to whole.
ComparisonReport partition_check(const RectangleDomain& whole, int cut_axis, double cut_pos, Boundary internal,
                                 Boundary outer, double cap);

} // namespace specwb
