#pragma once

#include "specwb/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>

namespace specwb::detail {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Doubles are dyadic, so the conversion is exact.
inline Rational exact(double v) { return Rational(v); }

struct RPoint {
    Rational x;
    Rational y;
};

inline RPoint exact(const Point2& p) { return {exact(p.x), exact(p.y)}; }

// Sign of the cross product (b − a) × (c − a).
inline int orient(const RPoint& a, const RPoint& b, const RPoint& c) {
    const Rational d = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return d.sign();
}

inline BigInt floor_of(const Rational& r) {
    const BigInt& num = boost::multiprecision::numerator(r);
    const BigInt& den = boost::multiprecision::denominator(r);  // > 0
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

// c on the closed segment [a, b], given orient(a, b, c) == 0.
inline bool on_segment(const RPoint& a, const RPoint& b, const RPoint& c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(const RPoint& a, const RPoint& b, const RPoint& c, const RPoint& d) {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

} // namespace specwb::detail
