#pragma once

#include <vector>

namespace specwb {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(const std::vector<Point2>& polygon);

// Exact test (rational arithmetic) that the closed polygon is simple: at
// least three vertices, nonzero area, edges meet only at shared endpoints.
bool is_simple_polygon(const std::vector<Point2>& polygon);

} // namespace specwb
