#include "oracles.hpp"

#include "specwb/errors.hpp"
#include "specwb/fem.hpp"
#include "specwb/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace specwb;
using oracle::kPi;

namespace {

const auto D = Boundary::Dirichlet;
const auto N = Boundary::Neumann;

Mesh reference_triangle() {
    Mesh m;
    m.vertices = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.segments = {{0, 1}, {1, 2}, {2, 0}};
    return m;
}

// Independent P1 assembly: stiffness from the cotangent formula
// K_ij = −(cot α + cot β)/2 over the angles facing edge ij, mass from
// ∫φ_iφ_j = A/12·(1 + δ_ij).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cotangent_assembly(const Mesh& m) {
    const auto n = static_cast<Eigen::Index>(m.vertices.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n), mm = Eigen::MatrixXd::Zero(n, n);
    for (const auto& t : m.triangles) {
        const Point2 p[3] = {m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]};
        const double area =
            0.5 * std::abs((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
        for (int c = 0; c < 3; ++c) {
            const int i = (c + 1) % 3, j = (c + 2) % 3;
            const double ux = p[i].x - p[c].x, uy = p[i].y - p[c].y, vx = p[j].x - p[c].x, vy = p[j].y - p[c].y;
            const double cot = (ux * vx + uy * vy) / std::abs(ux * vy - uy * vx);
            k(t[i], t[j]) -= 0.5 * cot;
            k(t[j], t[i]) -= 0.5 * cot;
            k(t[i], t[i]) += 0.5 * cot;
            k(t[j], t[j]) += 0.5 * cot;
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) mm(t[a], t[b]) += area / 12 * (a == b ? 2 : 1);
    }
    return {k, mm};
}

double shoelace(const std::vector<Point2>& p) {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % p.size()];
        s += a.x * b.y - a.y * b.x;
    }
    return 0.5 * s;
}

std::vector<double> unit_square_exact(bool dirichlet, std::size_t count) {
    auto e = oracle::rect_eigs({1, 1}, dirichlet, 400);
    e.resize(count);
    return e;
}

} // namespace

TEST(Assemble, ReferenceTriangleMass) {
    const auto fm = assemble(reference_triangle());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(fm.mass.coeff(i, j), i == j ? 1.0 / 12 : 1.0 / 24, 1e-16);
}

TEST(Assemble, ReferenceTriangleStiffness) {
    const auto fm = assemble(reference_triangle());
    const double k[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(fm.stiffness.coeff(i, j), k[i][j], 1e-15);
}

TEST(Assemble, RowSumsAndSymmetry) {
    for (const Mesh& m : {gen_rect_mesh(2, 1, 0.05), gen_pentagon(3, 0.5), gen_annulus(0.4, 16, 0.05)}) {
        const auto fm = assemble(m);
        const auto& k = fm.stiffness.matrix();
        const auto& mm = fm.mass.matrix();
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(k.rows());
        EXPECT_LT((k * one).cwiseAbs().maxCoeff(), 1e-10 * k.coeffs().cwiseAbs().maxCoeff());
        EXPECT_NEAR((mm * one).sum(), mesh_area(m), 1e-12 * mesh_area(m));
        EXPECT_LT((Eigen::SparseMatrix<double>(k.transpose()) - k).norm(), 1e-14 * k.norm());
        EXPECT_LT((Eigen::SparseMatrix<double>(mm.transpose()) - mm).norm(), 1e-14 * mm.norm());
        for (const auto& e : fm.mass.upper_entries()) EXPECT_LE(e.row, e.col);
    }
}

TEST(Assemble, MassRowSumsPerTriangleAreAThirdOfArea) {
    Mesh m;
    m.vertices = {{0.3, -1}, {2, 0.5}, {-0.4, 1.7}};
    m.triangles = {{0, 1, 2}};
    m.segments = {{0, 1}, {1, 2}, {2, 0}};
    const auto fm = assemble(m);
    const double a = triangle_area(m, 0);
    for (int i = 0; i < 3; ++i) {
        double s = 0;
        for (int j = 0; j < 3; ++j) s += fm.mass.coeff(i, j);
        EXPECT_NEAR(s, a / 3, 1e-15);
    }
}

TEST(Mesh, ValidationErrors) {
    Mesh m = reference_triangle();
    m.vertices.push_back({2, 2});
    m.triangles.push_back({0, 1, 7});
    EXPECT_THROW(validate_mesh(m), ValidationError);
    Mesh deg = reference_triangle();
    deg.vertices[2] = {2, 0};
    EXPECT_THROW(validate_mesh(deg), ValidationError);
    EXPECT_THROW(assemble(deg), ValidationError);
    Mesh dup = reference_triangle();
    dup.triangles.push_back({1, 2, 0});
    EXPECT_THROW(validate_mesh(dup), ValidationError);
    Mesh open = reference_triangle();
    open.segments.pop_back();
    EXPECT_THROW(validate_mesh(open), ValidationError);
    EXPECT_NO_THROW(validate_mesh(reference_triangle()));
}

TEST(Refine, ReferenceTriangleSplitsIntoFour) {
    const Mesh r = refine(reference_triangle(), 0.2);
    ASSERT_EQ(r.triangles.size(), 4u);
    for (std::size_t t = 0; t < 4; ++t) EXPECT_DOUBLE_EQ(triangle_area(r, t), 0.125);
    EXPECT_EQ(r.vertices.size(), 6u);
    EXPECT_EQ(r.segments.size(), 6u);
    EXPECT_EQ(boundary_loop_count(r), 1u);
    EXPECT_THROW(refine(reference_triangle(), 0.0), ValidationError);
}

TEST(Refine, CountsQuadrupleAndAreaIsPreserved) {
    Mesh m = gen_rect_mesh(1, 1, 1);
    for (int k = 0; k <= 6; ++k) {
        const std::size_t side = (std::size_t{1} << k) + 1;
        EXPECT_EQ(m.vertices.size(), side * side) << k;
        EXPECT_EQ(m.triangles.size(), 2u << (2 * k));
        EXPECT_NEAR(mesh_area(m), 1.0, 1e-12);
        EXPECT_DOUBLE_EQ(max_triangle_area(m), 0.5 / std::pow(4.0, k));
        EXPECT_NO_THROW(validate_mesh(m));
        m = refine_once(m);
    }
}

TEST(Generators, RectangleMesh) {
    EXPECT_EQ(gen_rect_mesh(1, 1, 1).triangles.size(), 2u);
    for (double area : {1.0, 0.1, 0.003}) {
        const Mesh m = gen_rect_mesh(3, 0.7, area);
        EXPECT_NEAR(mesh_area(m), 2.1, 1e-12 * 2.1);
        EXPECT_LE(max_triangle_area(m), area);
        EXPECT_EQ(boundary_loop_count(m), 1u);
    }
    EXPECT_THROW(gen_rect_mesh(0, 1, 1), ValidationError);
}

TEST(Generators, PentagonsAreDeterministicAndSimple) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto v = pentagon_vertices(seed);
        ASSERT_EQ(v.size(), 5u);
        EXPECT_EQ(v[0].x, 1.0);
        EXPECT_EQ(v[0].y, 0.0);
        double prev = 0;
        for (std::size_t i = 1; i < 5; ++i) {
            const double r = std::hypot(v[i].x, v[i].y);
            EXPECT_GE(r, 0.5 - 1e-12);
            EXPECT_LE(r, 5 + 1e-12);
            double th = std::atan2(v[i].y, v[i].x);
            if (th < 0) th += 2 * kPi;
            EXPECT_GE(th, (i - 1) * kPi / 2);
            EXPECT_LE(th, i * kPi / 2);
            EXPECT_GT(th, prev);
            prev = th;
        }
        const Mesh a = gen_pentagon(seed, 0.3), b = gen_pentagon(seed, 0.3);
        ASSERT_EQ(a.vertices.size(), b.vertices.size());
        for (std::size_t i = 0; i < a.vertices.size(); ++i) {
            EXPECT_EQ(a.vertices[i].x, b.vertices[i].x);
            EXPECT_EQ(a.vertices[i].y, b.vertices[i].y);
        }
        EXPECT_EQ(a.triangles, b.triangles);
        const double s = shoelace(v);
        EXPECT_GT(s, 0);
        EXPECT_NEAR(mesh_area(a), s, 1e-12 * s);
        EXPECT_LE(max_triangle_area(a), 0.3);
        EXPECT_EQ(boundary_loop_count(a), 1u);
    }
    EXPECT_NE(pentagon_vertices(1)[1].x, pentagon_vertices(2)[1].x);
}

TEST(Generators, AnnulusAndDisk) {
    for (double r : {0.0, 0.25, 0.5, 0.79}) {
        for (int n : {8, 24, 64}) {
            const Mesh m = gen_annulus(r, n, 0.01);
            const double area = n * std::sin(2 * kPi / n) * (1 - r * r) / 2;
            EXPECT_NEAR(mesh_area(m), area, 1e-12 * area);
            EXPECT_EQ(boundary_loop_count(m), r == 0 ? 1u : 2u);
            EXPECT_LE(max_triangle_area(m), 0.01);
        }
    }
    EXPECT_NEAR(mesh_area(gen_annulus(0, 4096, 10)), kPi, 2e-6);
    EXPECT_THROW(gen_annulus(1.0, 16, 0.1), ValidationError);
    EXPECT_THROW(gen_annulus(-0.1, 16, 0.1), ValidationError);
    EXPECT_THROW(gen_annulus(0.5, 7, 0.1), ValidationError);
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
        const double r = annulus_inner_radius(seed);
        EXPECT_GE(r, 0.0);
        EXPECT_LT(r, 0.8);
        EXPECT_EQ(r, annulus_inner_radius(seed));
    }
}

TEST(Solve, ReferenceTriangleNeumannConstantMode) {
    const auto r = solve(reference_triangle(), N, 1);
    ASSERT_EQ(r.eigenvalues.size(), 1u);
    EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-12);
    EXPECT_EQ(r.vertex_count, 3u);
}

TEST(Solve, MatchesCotangentAssemblyOracle) {
    for (const Mesh& m : {gen_rect_mesh(1, 1, 0.002), gen_pentagon(2, 0.3), gen_annulus(0.3, 12, 0.02)}) {
        const auto [k, mm] = cotangent_assembly(m);
        const auto fm = assemble(m);
        EXPECT_LT((Eigen::MatrixXd(fm.stiffness.matrix()) - k).cwiseAbs().maxCoeff(), 1e-12 * k.cwiseAbs().maxCoeff());
        EXPECT_LT((Eigen::MatrixXd(fm.mass.matrix()) - mm).cwiseAbs().maxCoeff(), 1e-15);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, mm);
        const auto r = solve(m, N, 10);
        for (int j = 0; j < 10; ++j) EXPECT_NEAR(r.eigenvalues[j], es.eigenvalues()[j], 1e-9 * std::max(1.0, es.eigenvalues()[j]));
    }
    // The one-diagonal grid has no 90° symmetry, so the π² pair splits
    // slightly but stays above π².
    const auto r = solve(gen_rect_mesh(1, 1, 0.002), N, 3);
    EXPECT_NEAR(r.eigenvalues[1], 9.9012, 1e-3);
    EXPECT_NEAR(r.eigenvalues[2], 9.9012, 1e-3);
    EXPECT_GT(r.eigenvalues[1], kPi * kPi);
}

TEST(Solve, GalerkinUpperBoundOnRectangles) {
    for (double area : {0.05, 0.01, 0.002}) {
        const auto rn = solve(gen_rect_mesh(1, 1, area), N, 11);
        const auto ex_n = unit_square_exact(false, 11);
        for (std::size_t k = 1; k < 11; ++k) EXPECT_GE(rn.eigenvalues[k], ex_n[k] * (1 - 1e-12)) << k;
        const auto rd = solve(gen_rect_mesh(1, 1, area), D, 5);
        const auto ex_d = unit_square_exact(true, 5);
        for (std::size_t k = 0; k < 5; ++k) EXPECT_GE(rd.eigenvalues[k], ex_d[k] * (1 - 1e-12)) << k;
    }
    const auto r = solve(gen_rect_mesh(2, 1, 0.005), D, 6);
    const auto ex = oracle::rect_eigs({2, 1}, true, 200);
    for (std::size_t k = 0; k < 6; ++k) EXPECT_GE(r.eigenvalues[k], ex[k]);
}

TEST(Solve, LowModesWithinTwoPercentAtFineMesh) {
    const auto rn = solve(gen_rect_mesh(1, 1, 0.002), N, 4);
    const auto ex_n = unit_square_exact(false, 4);
    for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(rn.eigenvalues[k], ex_n[k], 0.02 * ex_n[k]);
    const auto rd = solve(gen_rect_mesh(1, 1, 0.002), D, 1);
    EXPECT_NEAR(rd.eigenvalues[0], 2 * kPi * kPi, 0.02 * 2 * kPi * kPi);
}

TEST(Solve, SecondOrderConvergence) {
    const auto ex = unit_square_exact(false, 6);
    std::vector<std::vector<double>> levels;
    for (double area : {0.5 / 64, 0.5 / 256, 0.5 / 1024}) levels.push_back(solve(gen_rect_mesh(1, 1, area), N, 6).eigenvalues);
    for (std::size_t k = 1; k < 6; ++k) {
        const double e0 = levels[0][k] - ex[k], e1 = levels[1][k] - ex[k], e2 = levels[2][k] - ex[k];
        EXPECT_GT(e1, 0);
        EXPECT_GT(e0 / e1, 3.5) << k;
        EXPECT_LT(e0 / e1, 4.5) << k;
        EXPECT_GT(e1 / e2, 3.5) << k;
        EXPECT_LT(e1 / e2, 4.5) << k;
    }
}

TEST(Solve, EigenvectorsAreMassOrthonormal) {
    for (Boundary bc : {N, D}) {
        const Mesh m = gen_pentagon(5, 0.4);
        const auto r = solve(m, bc, 8);
        ASSERT_TRUE(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
        const auto fm = assemble(m);
        const Eigen::MatrixXd g = r.eigenvectors.transpose() * (fm.mass.matrix() * r.eigenvectors);
        EXPECT_LT((g - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-8);
        const Eigen::MatrixXd kv = fm.stiffness.matrix() * r.eigenvectors;
        const Eigen::MatrixXd mv = fm.mass.matrix() * r.eigenvectors;
        for (int j = 0; j < 8; ++j) {
            Eigen::VectorXd res = kv.col(j) - r.eigenvalues[j] * mv.col(j);
            if (bc == D)
                for (const auto& s : m.segments) res[s[0]] = res[s[1]] = 0;
            EXPECT_LT(res.norm(), 1e-7 * std::max(1.0, r.eigenvalues[j]) * mv.col(j).norm() + 1e-12) << j;
        }
    }
}

TEST(Solve, SubspaceIterationMatchesDensePath) {
    // 33×33 grid: 1089 unknowns takes the iterative path; its values must
    // agree with a dense generalized solve on the same matrices.
    const Mesh m = gen_rect_mesh(1.3, 1, 0.00066);
    ASSERT_EQ(m.vertices.size(), 1089u);
    const auto r = solve(m, N, 12);
    EXPECT_GT(r.iterations, 0u);
    const auto fm = assemble(m);
    const Eigen::MatrixXd k(fm.stiffness.matrix()), mm(fm.mass.matrix());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, mm);
    for (int j = 0; j < 12; ++j)
        EXPECT_NEAR(r.eigenvalues[j], es.eigenvalues()[j], 1e-8 * std::max(1.0, es.eigenvalues()[j])) << j;
}

TEST(Solve, Errors) {
    EXPECT_THROW(solve(reference_triangle(), N, 0), ValidationError);
    EXPECT_THROW(solve(reference_triangle(), N, 4), ValidationError);
    // Every vertex lies on the boundary: nothing survives elimination.
    EXPECT_THROW(solve(reference_triangle(), D, 1), ValidationError);
    Mesh noseg = gen_rect_mesh(1, 1, 0.1);
    noseg.segments.clear();
    EXPECT_THROW(solve(noseg, D, 1), ValidationError);
}

TEST(Polya, UnitSquareHolds) {
    const auto p = polya_numeric_check(gen_rect_mesh(1, 1, 0.002), 30);
    EXPECT_TRUE(p.report.holds);
    EXPECT_TRUE(p.violations.empty());
    EXPECT_NEAR(p.area, 1.0, 1e-12);
    for (std::size_t k = 1; k < 30; ++k) EXPECT_GT(p.error_estimates[k], 0.0);
}

TEST(Polya, SeededPentagonAndAnnulus) {
    const Mesh pent = gen_pentagon(1, mesh_area(gen_pentagon(1, 1e9)) / 1500);
    const auto p = polya_numeric_check(pent, 50);
    EXPECT_FALSE(p.has_unannotated_violation());
    const auto a = polya_numeric_check(gen_annulus(0.5, 32, 0.0015), 75);
    EXPECT_FALSE(a.has_unannotated_violation());
}

TEST(MeshJson, RoundTrip) {
    const Mesh m = gen_pentagon(9, 1.0);
    const Mesh back = mesh_from_json(nlohmann::json::parse(mesh_to_json(m).dump()));
    ASSERT_EQ(back.vertices.size(), m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        EXPECT_EQ(back.vertices[i].x, m.vertices[i].x);
        EXPECT_EQ(back.vertices[i].y, m.vertices[i].y);
    }
    EXPECT_EQ(back.triangles, m.triangles);
    EXPECT_EQ(back.segments, m.segments);
    const auto j = mesh_to_json(reference_triangle());
    EXPECT_TRUE(j.contains("vertices") && j.contains("triangles") && j.contains("segments"));
    EXPECT_THROW(mesh_from_json(nlohmann::json::parse(R"({"vertices":[[0,0]],"triangles":[[0,1,2]],"segments":[]})")),
                 ValidationError);
}
