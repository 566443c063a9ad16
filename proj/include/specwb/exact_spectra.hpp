#pragma once

#include "specwb/spectrum.hpp"
#include "specwb/weyl_function.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace specwb {

// Axis-aligned box [0,a_1]×…×[0,a_n].
class RectangleDomain {
public:
    explicit RectangleDomain(std::vector<double> dims);

    const std::vector<double>& dims() const { return dims_; }
    int dimension() const { return static_cast<int>(dims_.size()); }
    double volume() const;
    // (n-1)-measure of the boundary; two points when n = 1.
    double boundary_measure() const;

private:
    std::vector<double> dims_;
};

// Boundary condition on the two faces orthogonal to one axis.
struct FaceConditions {
    Boundary lo;
    Boundary hi;
};

Spectrum rectangle_spectrum(const RectangleDomain& dom, Boundary bc, double cap);
std::uint64_t rectangle_counting(const RectangleDomain& dom, Boundary bc, double lambda);
// λ_1..λ_count with multiplicity (CountComplete).
Spectrum rectangle_first(const RectangleDomain& dom, Boundary bc, std::size_t count);

// Mixed conditions: per axis, the 1-D factor is ((i+s)π/a)² with s = 1/2 for a
// D/N pair, i ≥ 1 for D/D and i ≥ 0 otherwise.
Spectrum box_spectrum(const RectangleDomain& dom, const std::vector<FaceConditions>& faces, double cap);
std::uint64_t box_counting(const RectangleDomain& dom, const std::vector<FaceConditions>& faces,
                           double lambda);

// d = sqrt(Σ π²/a_i²).
double codiagonal(const RectangleDomain& dom);

// Flat torus R^n/Λ with Λ generated by the columns of basis.
class FlatTorus {
public:
    explicit FlatTorus(Eigen::MatrixXd basis);

    const Eigen::MatrixXd& basis() const { return basis_; }
    // Columns generate Λ* = 2π·B^{-T}Z^n.
    Eigen::MatrixXd dual_basis() const;
    int dimension() const { return static_cast<int>(basis_.rows()); }
    double volume() const;

private:
    Eigen::MatrixXd basis_;
};

// Sorted squared lengths of all lattice vectors (columns of basis generate
// the lattice) with |v|² ≤ radius_sq, 0 included.
std::vector<double> lattice_squared_norms(const Eigen::MatrixXd& basis, double radius_sq);

Spectrum torus_spectrum(const FlatTorus& t, double cap);
double torus_systole(const FlatTorus& t);

class SphereDomain {
public:
    explicit SphereDomain(int n);
    int dimension() const { return n_; }

private:
    int n_;
};

// Multiplicity of k(k+n-1) on S^n.
std::uint64_t sphere_multiplicity(int n, int k);
// Largest k with k(k+n-1) ≤ λ.
int sphere_level(int n, double lambda);
std::uint64_t sphere_counting(const SphereDomain& s, double lambda);
Spectrum sphere_spectrum(const SphereDomain& s, double cap);
WeylFunction sphere_weyl(const SphereDomain& s);
// Exact test of (2/n!)·(k(k+n-1))^{n/2} < N_n(k(k+n-1)).
bool sphere_weyl_below_count(int n, int k);

// Union with multiplicity of CapComplete spectra; cap = min of caps.
Spectrum merge_spectra(const std::vector<Spectrum>& parts);

} // namespace specwb
