#pragma once

#include "specwb/counting.hpp"
#include "specwb/geometry.hpp"
#include "specwb/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <vector>

namespace specwb {

struct Mesh {
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> segments;  // boundary edges
};

// Throws ValidationError: indices out of range, degenerate or duplicate
// triangles, boundary segments not forming closed loops.
void validate_mesh(const Mesh& m);
double triangle_area(const Mesh& m, std::size_t t);  // unsigned
double mesh_area(const Mesh& m);
double max_triangle_area(const Mesh& m);
std::size_t boundary_loop_count(const Mesh& m);

class SparseSymMatrix {
public:
    struct Entry {
        int row;
        int col;
        double value;
    };

    explicit SparseSymMatrix(Eigen::SparseMatrix<double> full);

    int dimension() const { return static_cast<int>(full_.rows()); }
    const Eigen::SparseMatrix<double>& matrix() const { return full_; }
    double coeff(int row, int col) const { return full_.coeff(row, col); }
    // Entries with row ≤ col.
    std::vector<Entry> upper_entries() const;

private:
    Eigen::SparseMatrix<double> full_;
};

struct FemMatrices {
    SparseSymMatrix stiffness;
    SparseSymMatrix mass;
};

// P1 stiffness A·⟨g_i, g_j⟩ and consistent mass (2A/12 diagonal, 2A/24 off).
FemMatrices assemble(const Mesh& m);

struct EigResult {
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors;  // one column per eigenvalue, one row per vertex
    Boundary bc = Boundary::Neumann;
    std::size_t vertex_count = 0;
    double max_triangle_area = 0.0;
    std::size_t iterations = 0;  // 0 on the dense path
};

// Smallest `count` eigenpairs of K x = μ M x. Dirichlet eliminates every
// vertex on a boundary segment. Dense solve up to 600 unknowns, otherwise
// shift-invert subspace iteration on K + 0.01·M.
EigResult solve(const Mesh& m, Boundary bc, std::size_t count);

Mesh refine_once(const Mesh& m);
// Uniform red refinement until every triangle area ≤ max_area.
Mesh refine(const Mesh& m, double max_area);

Mesh gen_rect_mesh(double a, double b, double max_area);
// (1,0) followed by one point per quadrant: four angles uniform in their
// quadrant, then four radii uniform in [0.5, 5].
std::vector<Point2> pentagon_vertices(std::uint64_t seed);
// Fan from vertex 0 when valid, else a fan around the origin.
Mesh gen_pentagon(std::uint64_t seed, double max_area);
// Region between regular n_seg-gons of radii r_inner and 1; a disk fan when
// r_inner = 0.
Mesh gen_annulus(double r_inner, int n_seg, double max_area);
// 0.8·u for the first uniform draw of the seed.
double annulus_inner_radius(std::uint64_t seed);

struct PolyaIndexNote {
    std::size_t k;
    double eigenvalue;
    double threshold;       // w⁻¹(k)
    double error_estimate;  // Richardson estimate of the discretization error
    bool annotated;         // eigenvalue − error_estimate ≤ threshold
};

struct PolyaReport {
    ComparisonReport report;
    std::vector<double> eigenvalues;
    std::vector<double> error_estimates;
    std::vector<PolyaIndexNote> violations;
    double area = 0.0;

    bool has_unannotated_violation() const;
};

// Neumann eigenvalues on m against the one-term Weyl function, Sub direction
// (λ_k ≤ w⁻¹(k)). Errors are estimated from m and one red refinement of m.
PolyaReport polya_numeric_check(const Mesh& m, std::size_t count);

} // namespace specwb
