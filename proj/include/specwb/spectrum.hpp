#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace specwb {

enum class Boundary { Dirichlet, Neumann };

// Every eigenvalue ≤ cap is present, with multiplicity.
struct CapComplete {
    double cap;
};

// The first `count` eigenvalues are present.
struct CountComplete {
    std::size_t count;
};

using Completeness = std::variant<CapComplete, CountComplete>;

class Spectrum {
public:
    Spectrum() : completeness_(CapComplete{0.0}) {}
    // Throws ValidationError unless values are sorted, finite and ≥ 0, and
    // (for CapComplete) none exceeds the cap.
    Spectrum(std::vector<double> values, Completeness completeness);

    const std::vector<double>& values() const { return values_; }
    const Completeness& completeness() const { return completeness_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }

    bool cap_complete() const { return std::holds_alternative<CapComplete>(completeness_); }
    // Cap for CapComplete; largest value (0 if empty) for CountComplete.
    double valid_up_to() const;

private:
    std::vector<double> values_;
    Completeness completeness_;
};

} // namespace specwb
