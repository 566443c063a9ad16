#include "specwb/spectrum.hpp"

#include "specwb/errors.hpp"
#include "specwb/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace specwb {

Spectrum::Spectrum(std::vector<double> values, Completeness completeness)
    : values_(std::move(values)), completeness_(completeness) {
    for (double v : values_)
        if (!std::isfinite(v) || v < 0.0) throw ValidationError("spectrum: eigenvalues must be finite and >= 0");
    if (!std::is_sorted(values_.begin(), values_.end())) throw ValidationError("spectrum: values must be sorted");
    if (const auto* c = std::get_if<CapComplete>(&completeness_)) {
        if (!(c->cap >= 0.0)) throw ValidationError("spectrum: cap must be >= 0");
        if (!values_.empty() && !at_most(values_.back(), c->cap))
            throw ValidationError("spectrum: value above completeness cap");
    } else if (std::get<CountComplete>(completeness_).count != values_.size()) {
        throw ValidationError("spectrum: count completeness does not match number of values");
    }
}

double Spectrum::valid_up_to() const {
    if (const auto* c = std::get_if<CapComplete>(&completeness_)) return c->cap;
    return values_.empty() ? 0.0 : values_.back();
}

} // namespace specwb
