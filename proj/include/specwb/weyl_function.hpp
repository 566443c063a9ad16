#pragma once

namespace specwb {

// λ ↦ c_volume·λ^{n/2} + c_boundary·λ^{(n-1)/2}.
class WeylFunction {
public:
    WeylFunction(int n, double c_volume, double c_boundary = 0.0);

    int dimension() const { return n_; }
    double c_volume() const { return c_volume_; }
    double c_boundary() const { return c_boundary_; }
    bool one_term() const { return c_boundary_ == 0.0; }

    double operator()(double lambda) const;
    // Smallest λ on the increasing branch with w(λ) = y. Closed form for
    // one-term functions; bisection in √λ otherwise.
    double inverse(double y) const;
    WeylFunction scaled(double factor) const;

private:
    int n_;
    double c_volume_;
    double c_boundary_;
};

} // namespace specwb
