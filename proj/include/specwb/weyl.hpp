#pragma once

#include "specwb/counting.hpp"
#include "specwb/exact_spectra.hpp"
#include "specwb/geometry.hpp"
#include "specwb/weyl_function.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace specwb {

// λ ↦ ω_n·volume·λ^{n/2}/(2π)^n.
WeylFunction one_term_weyl(int n, double volume);
// Adds (−1)^{ν+1}·(1/4)·ω_{n−1}·|∂M|·λ^{(n−1)/2}/(2π)^{n−1}; ν = 0 Dirichlet, 1 Neumann.
WeylFunction two_term_weyl(int n, double volume, double boundary_measure, Boundary bc);

struct Envelope {
    double lower;
    double upper;
};

// Dirichlet: [w(1 − d/√λ)^n clamped at 0, w]. Neumann: [w, w(1 + d/√λ)^n].
Envelope quant_weyl_rect_bounds(const RectangleDomain& dom, Boundary bc, double lambda);

struct CellCounts {
    std::uint64_t inside = 0;  // closed cell contained in the polygon
    std::uint64_t touching = 0;  // open cell meets the polygon interior
};

// Classifies the cells [iε,(i+1)ε]×[jε,(j+1)ε] exactly. Throws
// ValidationError for non-simple polygons.
CellCounts classify_grid_cells(const std::vector<Point2>& polygon, double eps);

struct PolygonEnvelope {
    double lower;
    double upper;
    CellCounts cells;
};

// #in·(Dirichlet square lower bound), #out·(Neumann square upper bound) for
// ε-squares, d = π√2/ε. Bounds the Dirichlet counting function of the polygon.
PolygonEnvelope quant_weyl_polygon_bounds(const std::vector<Point2>& polygon, double eps, double lambda);

struct Thresholds {
    double lambda0;  // Dirichlet: N_{R'} ≥ N_R beyond lambda0
    double lambda1;  // Neumann: N_{R'} ≥ N_R beyond lambda1
};

// Requires |r| < |rp| and equal dimensions.
Thresholds eventual_thresholds(const RectangleDomain& r, const RectangleDomain& rp);

enum class PackingProvenance { Tiling, ConvexPlanarLowerBound, UserSupplied };

class PackingSpec {
public:
    static PackingSpec tiling();
    static PackingSpec convex_planar();
    static PackingSpec user_supplied(double delta);

    double delta() const { return delta_; }
    PackingProvenance provenance() const { return provenance_; }

private:
    PackingSpec(double delta, PackingProvenance p);
    double delta_;
    PackingProvenance provenance_;
};

// Known lower bounds for packing densities of convex bodies in R³.
struct PackingConstant {
    std::string body;
    double delta;
};
const std::vector<PackingConstant>& packing_catalog();

// w/δ; the Dirichlet counting function stays below it.
WeylFunction polya_packing_bound(const WeylFunction& w, const PackingSpec& p);
// λ_k ≥ (4π²/ω_n^{2/n})·(δk/V)^{2/n}.
double polya_eigenvalue_lower_bound(int n, double volume, const PackingSpec& p, std::size_t k);

// ((n+2)/n)^{n/2}.
double li_yau_factor(int n);

class MetricCone {
public:
    MetricCone(double delta_minus, double delta_plus, int n);

    double delta_minus() const { return delta_minus_; }
    double delta_plus() const { return delta_plus_; }
    int dimension() const { return n_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool contains(double ratio) const;

private:
    double delta_minus_;
    double delta_plus_;
    int n_;
    double lo_;
    double hi_;
};

MetricCone metric_cone(double delta_minus, double delta_plus, int n);
// (min r_i², max r_i²) with r_i = to_i/from_i.
std::pair<double, double> diagonal_deltas(const std::vector<double>& from_dims, const std::vector<double>& to_dims);

struct CoverPiece {
    RectangleDomain box;
    std::vector<double> offset;
};

struct CoverCheck {
    ComparisonReport report;
    int overlap = 0;  // G
};

// Verifies σ_k ≤ (1+G)·λ_k for every λ_k ≤ cap, σ the merged Neumann
// spectra of the pieces and λ the Neumann spectrum of the whole. Pieces
// must lie inside the whole and cover it.
CoverCheck cover_neumann_check(const RectangleDomain& whole, const std::vector<CoverPiece>& cover, double cap);

// N(λ)/volume.
double weyl_density(const Spectrum& spec, double volume, int n, double lambda);

} // namespace specwb
