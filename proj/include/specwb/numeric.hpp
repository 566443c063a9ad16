#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace specwb {

// Relative slack for eigenvalue equality and closed comparisons.
inline constexpr double kRelTol = 1e-12;

// x ≤ y up to kRelTol relative to y.
inline bool at_most(double x, double y) { return x <= y + kRelTol * std::abs(y); }

inline bool same_value(double x, double y) {
    return std::abs(x - y) <= kRelTol * std::max(std::abs(x), std::abs(y));
}

// x > y by more than the equality slack.
inline bool clearly_greater(double x, double y) { return x > y && !same_value(x, y); }

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Worker cap: SPECWB_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on n and thread_count(), so per-chunk results combined in
// chunk order are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace specwb
