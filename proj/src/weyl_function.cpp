#include "specwb/weyl_function.hpp"

#include "specwb/errors.hpp"

#include <algorithm>
#include <cmath>

namespace specwb {

WeylFunction::WeylFunction(int n, double c_volume, double c_boundary)
    : n_(n), c_volume_(c_volume), c_boundary_(c_boundary) {
    if (n < 1) throw ValidationError("Weyl function: dimension must be >= 1");
    if (!(c_volume > 0.0) || !std::isfinite(c_volume))
        throw ValidationError("Weyl function: volume coefficient must be positive");
    if (!std::isfinite(c_boundary)) throw ValidationError("Weyl function: boundary coefficient must be finite");
}

double WeylFunction::operator()(double lambda) const {
    if (!(lambda >= 0.0)) throw ValidationError("Weyl function evaluated at negative lambda");
    const double s = std::sqrt(lambda);
    double v = c_volume_ * std::pow(s, n_);
    if (c_boundary_ != 0.0) v += c_boundary_ * std::pow(s, n_ - 1);
    return v;
}

double WeylFunction::inverse(double y) const {
    if (one_term()) {
        if (y <= 0.0) return 0.0;
        return std::pow(y / c_volume_, 2.0 / n_);
    }
    auto g = [&](double s) { return c_volume_ * std::pow(s, n_) + c_boundary_ * std::pow(s, n_ - 1); };
    // g is increasing in s beyond its critical point.
    const double s0 = std::max(0.0, -c_boundary_ * (n_ - 1) / (n_ * c_volume_));
    if (y <= g(s0)) return s0 * s0;
    double lo = s0;
    double hi = std::max(1.0, 2.0 * s0);
    while (g(hi) < y) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < y ? lo : hi) = mid;
    }
    return hi * hi;
}

WeylFunction WeylFunction::scaled(double factor) const {
    return WeylFunction(n_, c_volume_ * factor, c_boundary_ * factor);
}

} // namespace specwb
