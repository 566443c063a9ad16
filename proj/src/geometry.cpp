#include "specwb/geometry.hpp"

#include "rational.hpp"

namespace specwb {

double signed_area(const std::vector<Point2>& polygon) {
    double s = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

bool is_simple_polygon(const std::vector<Point2>& polygon) {
    using namespace detail;
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    std::vector<RPoint> p;
    p.reserve(n);
    for (const auto& v : polygon) p.push_back(exact(v));
    Rational twice_area = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const RPoint& a = p[i];
        const RPoint& b = p[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) return false;
        twice_area += a.x * b.y - b.x * a.y;
    }
    if (twice_area == 0) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const RPoint& a = p[i];
        const RPoint& b = p[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const RPoint& c = p[j];
            const RPoint& d = p[(j + 1) % n];
            const bool next = (j == i + 1);
            const bool wrap = (i == 0 && j == n - 1);
            if (next || wrap) {
                // Shared vertex: only a fold-back overlap is forbidden.
                const RPoint& far_a = next ? a : c;
                const RPoint& shared = next ? b : a;
                const RPoint& far_b = next ? d : b;
                if (orient(far_a, shared, far_b) == 0 &&
                    (on_segment(far_a, shared, far_b) || on_segment(shared, far_b, far_a)))
                    return false;
                continue;
            }
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

} // namespace specwb
