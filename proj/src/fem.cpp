#include "specwb/fem.hpp"

#include "rational.hpp"
#include "specwb/errors.hpp"
#include "specwb/numeric.hpp"
#include "specwb/rng.hpp"
#include "specwb/weyl.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <unordered_map>

namespace specwb {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_triangle_area(const Mesh& m, const std::array<int, 3>& t) {
    const Point2& a = m.vertices[static_cast<std::size_t>(t[0])];
    const Point2& b = m.vertices[static_cast<std::size_t>(t[1])];
    const Point2& c = m.vertices[static_cast<std::size_t>(t[2])];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double mesh_scale(const Mesh& m) {
    if (m.vertices.empty()) return 0.0;
    double x0 = m.vertices[0].x, x1 = x0, y0 = m.vertices[0].y, y1 = y0;
    for (const auto& v : m.vertices) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    return std::hypot(x1 - x0, y1 - y0);
}

} // namespace

void validate_mesh(const Mesh& m) {
    const int nv = static_cast<int>(m.vertices.size());
    for (const auto& v : m.vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw ValidationError("mesh: non-finite vertex coordinate");
    if (m.triangles.empty()) throw ValidationError("mesh: no triangles");
    const double scale = mesh_scale(m);
    std::set<std::array<int, 3>> seen;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        auto tri = m.triangles[t];
        for (int i : tri)
            if (i < 0 || i >= nv) throw ValidationError("mesh: triangle " + std::to_string(t) + " index out of range");
        if (!(std::abs(signed_triangle_area(m, tri)) > 1e-14 * scale * scale))
            throw ValidationError("mesh: degenerate triangle " + std::to_string(t));
        std::sort(tri.begin(), tri.end());
        if (!seen.insert(tri).second) throw ValidationError("mesh: duplicate triangle " + std::to_string(t));
    }
    std::vector<int> degree(static_cast<std::size_t>(nv), 0);
    for (std::size_t s = 0; s < m.segments.size(); ++s) {
        const auto& seg = m.segments[s];
        for (int i : seg)
            if (i < 0 || i >= nv) throw ValidationError("mesh: segment " + std::to_string(s) + " index out of range");
        if (seg[0] == seg[1]) throw ValidationError("mesh: segment " + std::to_string(s) + " is degenerate");
        ++degree[static_cast<std::size_t>(seg[0])];
        ++degree[static_cast<std::size_t>(seg[1])];
    }
    for (int d : degree)
        if (d != 0 && d != 2) throw ValidationError("mesh: boundary segments do not form closed loops");
}

double triangle_area(const Mesh& m, std::size_t t) { return std::abs(signed_triangle_area(m, m.triangles[t])); }

double mesh_area(const Mesh& m) {
    CompensatedSum s;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) s.add(triangle_area(m, t));
    return s.value();
}

double max_triangle_area(const Mesh& m) {
    double a = 0.0;
    for (std::size_t t = 0; t < m.triangles.size(); ++t) a = std::max(a, triangle_area(m, t));
    return a;
}

std::size_t boundary_loop_count(const Mesh& m) {
    std::map<int, std::vector<int>> adj;
    for (const auto& s : m.segments) {
        adj[s[0]].push_back(s[1]);
        adj[s[1]].push_back(s[0]);
    }
    std::set<int> visited;
    std::size_t loops = 0;
    for (const auto& [start, _] : adj) {
        if (visited.count(start)) continue;
        ++loops;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (!visited.insert(v).second) continue;
            for (int w : adj[v]) stack.push_back(w);
        }
    }
    return loops;
}

SparseSymMatrix::SparseSymMatrix(Eigen::SparseMatrix<double> full) : full_(std::move(full)) {
    full_.makeCompressed();
}

std::vector<SparseSymMatrix::Entry> SparseSymMatrix::upper_entries() const {
    std::vector<Entry> out;
    for (int k = 0; k < full_.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(full_, k); it; ++it)
            if (it.row() <= it.col()) out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
    return out;
}

FemMatrices assemble(const Mesh& m) {
    validate_mesh(m);
    const auto nv = static_cast<Eigen::Index>(m.vertices.size());
    std::vector<Eigen::Triplet<double>> k_trip, m_trip;
    k_trip.reserve(9 * m.triangles.size());
    m_trip.reserve(9 * m.triangles.size());
    for (const auto& tri : m.triangles) {
        Eigen::Matrix3d embed;
        for (int c = 0; c < 3; ++c) {
            const Point2& p = m.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(c)])];
            embed(0, c) = p.x;
            embed(1, c) = p.y;
            embed(2, c) = 1.0;
        }
        const double area = 0.5 * std::abs(embed.determinant());
        // Row i of the inverse holds the gradient of barycentric coordinate i.
        const Eigen::Matrix3d inv = embed.inverse();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double stiff = area * (inv(i, 0) * inv(j, 0) + inv(i, 1) * inv(j, 1));
                const double mass = i == j ? 2.0 * area / 12.0 : 2.0 * area / 24.0;
                k_trip.emplace_back(tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)], stiff);
                m_trip.emplace_back(tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)], mass);
            }
    }
    Eigen::SparseMatrix<double> k(nv, nv), mm(nv, nv);
    k.setFromTriplets(k_trip.begin(), k_trip.end());
    mm.setFromTriplets(m_trip.begin(), m_trip.end());
    return {SparseSymMatrix(std::move(k)), SparseSymMatrix(std::move(mm))};
}

namespace {

constexpr std::size_t kDenseLimit = 600;
constexpr double kShift = 0.01;
constexpr double kResidualTol = 1e-9;
constexpr std::size_t kIterationBudget = 5000;

Eigen::SparseMatrix<double> restrict_to(const Eigen::SparseMatrix<double>& a, const std::vector<int>& map,
                                        Eigen::Index dim) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
            const int r = map[static_cast<std::size_t>(it.row())], c = map[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
        }
    Eigen::SparseMatrix<double> out(dim, dim);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

double norm1(const Eigen::SparseMatrix<double>& a) {
    double best = 0.0;
    for (int k = 0; k < a.outerSize(); ++k) {
        double s = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

// Q with QᵀMQ = I spanning the columns of y (Cholesky QR, applied twice).
Eigen::MatrixXd mass_orthonormalize(const Eigen::SparseMatrix<double>& mass, Eigen::MatrixXd y) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) y.col(j) /= std::sqrt(y.col(j).dot(mass * y.col(j)));
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::MatrixXd gram = y.transpose() * (mass * y);
        Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (gram + gram.transpose()));
        if (llt.info() != Eigen::Success) throw ComputationError("eigensolver: block lost rank during orthonormalization");
        y = llt.matrixU().solve<Eigen::OnTheRight>(y);
    }
    return y;
}

struct Eigenpairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    std::size_t iterations;
};

Eigenpairs dense_eigs(const Eigen::SparseMatrix<double>& k, const Eigen::SparseMatrix<double>& m, std::size_t count) {
    const Eigen::MatrixXd kd(k), md(m);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md);
    if (es.info() != Eigen::Success) throw ComputationError("eigensolver: dense generalized solve failed");
    const auto c = static_cast<Eigen::Index>(count);
    return {es.eigenvalues().head(c), es.eigenvectors().leftCols(c), 0};
}

Eigenpairs subspace_eigs(const Eigen::SparseMatrix<double>& k, const Eigen::SparseMatrix<double>& m, std::size_t count) {
    const Eigen::Index dim = k.rows();
    const auto c = static_cast<Eigen::Index>(count);
    const Eigen::Index p = std::min<Eigen::Index>(dim, 2 * c + 10);
    const Eigen::SparseMatrix<double> shifted = k + kShift * m;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(shifted);
    if (chol.info() != Eigen::Success) throw ComputationError("eigensolver: shifted matrix factorization failed");
    const double k_norm = norm1(k), m_norm = norm1(m);

    SeededUniform rng(0x5eedULL);
    Eigen::MatrixXd x(dim, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) x(i, j) = rng.next() - 0.5;
    x = mass_orthonormalize(m, x);

    double worst = 0.0;
    for (std::size_t it = 1; it <= kIterationBudget; ++it) {
        const Eigen::MatrixXd rhs = m * x;
        Eigen::MatrixXd y(dim, p);
        parallel_for(static_cast<std::size_t>(p), [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) y.col(static_cast<Eigen::Index>(j)) = chol.solve(rhs.col(static_cast<Eigen::Index>(j)));
        });
        const Eigen::MatrixXd q = mass_orthonormalize(m, std::move(y));
        const Eigen::MatrixXd kq = k * q;
        const Eigen::MatrixXd reduced = q.transpose() * kq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (reduced + reduced.transpose()));
        if (es.info() != Eigen::Success) throw ComputationError("eigensolver: Rayleigh-Ritz step failed");
        x = q * es.eigenvectors();
        const Eigen::MatrixXd kx = kq * es.eigenvectors();
        const Eigen::MatrixXd mx = m * x.leftCols(c);
        worst = 0.0;
        for (Eigen::Index j = 0; j < c; ++j) {
            const double mu = es.eigenvalues()(j);
            const double r = (kx.col(j) - mu * mx.col(j)).norm() / ((k_norm + std::abs(mu) * m_norm) * x.col(j).norm());
            worst = std::max(worst, r);
        }
        if (worst < kResidualTol) return {es.eigenvalues().head(c), x.leftCols(c), it};
    }
    throw ComputationError("eigensolver: no convergence after " + std::to_string(kIterationBudget) +
                           " iterations; worst relative residual " + std::to_string(worst));
}

} // namespace

EigResult solve(const Mesh& m, Boundary bc, std::size_t count) {
    if (count < 1) throw ValidationError("solve: count must be >= 1");
    const FemMatrices fm = assemble(m);
    const std::size_t nv = m.vertices.size();
    std::vector<int> map(nv, 0);
    Eigen::Index dim = 0;
    if (bc == Boundary::Dirichlet) {
        if (m.segments.empty()) throw ValidationError("solve: Dirichlet condition needs boundary segments");
        for (const auto& s : m.segments) map[static_cast<std::size_t>(s[0])] = map[static_cast<std::size_t>(s[1])] = -1;
    }
    for (auto& idx : map) idx = idx < 0 ? -1 : static_cast<int>(dim++);
    if (static_cast<std::size_t>(dim) < count)
        throw ValidationError("solve: count " + std::to_string(count) + " exceeds the reduced dimension " +
                              std::to_string(dim));
    const auto k = restrict_to(fm.stiffness.matrix(), map, dim);
    const auto mass = restrict_to(fm.mass.matrix(), map, dim);
    const Eigenpairs pairs =
        static_cast<std::size_t>(dim) <= kDenseLimit ? dense_eigs(k, mass, count) : subspace_eigs(k, mass, count);

    EigResult r;
    r.bc = bc;
    r.vertex_count = nv;
    r.max_triangle_area = max_triangle_area(m);
    r.iterations = pairs.iterations;
    r.eigenvalues.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
    r.eigenvectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nv), pairs.vectors.cols());
    for (std::size_t v = 0; v < nv; ++v)
        if (map[v] >= 0) r.eigenvectors.row(static_cast<Eigen::Index>(v)) = pairs.vectors.row(map[v]);
    return r;
}

Mesh refine_once(const Mesh& m) {
    Mesh out;
    out.vertices = m.vertices;
    std::unordered_map<std::uint64_t, int> midpoints;
    auto midpoint = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
                                  static_cast<std::uint32_t>(b);
        const auto [it, fresh] = midpoints.try_emplace(key, static_cast<int>(out.vertices.size()));
        if (fresh) {
            const Point2& p = m.vertices[static_cast<std::size_t>(a)];
            const Point2& q = m.vertices[static_cast<std::size_t>(b)];
            out.vertices.push_back({0.5 * (p.x + q.x), 0.5 * (p.y + q.y)});
        }
        return it->second;
    };
    out.triangles.reserve(4 * m.triangles.size());
    for (const auto& t : m.triangles) {
        const int m01 = midpoint(t[0], t[1]), m12 = midpoint(t[1], t[2]), m20 = midpoint(t[2], t[0]);
        out.triangles.push_back({t[0], m01, m20});
        out.triangles.push_back({m01, t[1], m12});
        out.triangles.push_back({m20, m12, t[2]});
        out.triangles.push_back({m01, m12, m20});
    }
    for (const auto& s : m.segments) {
        const int mid = midpoint(s[0], s[1]);
        out.segments.push_back({s[0], mid});
        out.segments.push_back({mid, s[1]});
    }
    return out;
}

Mesh refine(const Mesh& m, double max_area) {
    if (!(max_area > 0.0)) throw ValidationError("refine: max_area must be positive");
    validate_mesh(m);
    Mesh out = m;
    while (max_triangle_area(out) > max_area) {
        if (out.triangles.size() > 20'000'000) throw ComputationError("refine: triangle budget exceeded");
        out = refine_once(out);
    }
    return out;
}

Mesh gen_rect_mesh(double a, double b, double max_area) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("rectangle mesh: sides must be positive");
    Mesh m;
    m.vertices = {{0.0, 0.0}, {a, 0.0}, {a, b}, {0.0, b}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.segments = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    return refine(m, max_area);
}

std::vector<Point2> pentagon_vertices(std::uint64_t seed) {
    SeededUniform rng(seed);
    double angle[4], radius[4];
    for (int q = 0; q < 4; ++q) angle[q] = (q + rng.next()) * 0.5 * kPi;
    for (int q = 0; q < 4; ++q) radius[q] = 0.5 + 4.5 * rng.next();
    std::vector<Point2> v{{1.0, 0.0}};
    for (int q = 0; q < 4; ++q) v.push_back({radius[q] * std::cos(angle[q]), radius[q] * std::sin(angle[q])});
    return v;
}

Mesh gen_pentagon(std::uint64_t seed, double max_area) {
    const auto poly = pentagon_vertices(seed);
    Mesh m;
    m.vertices = poly;
    m.segments = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
    std::vector<detail::RPoint> p;
    for (const auto& v : poly) p.push_back(detail::exact(v));
    // For a simple polygon the fan from vertex 0 tiles it iff every fan
    // triangle is positively oriented.
    bool fan_ok = true;
    for (int i = 1; i <= 3; ++i) fan_ok = fan_ok && detail::orient(p[0], p[i], p[i + 1]) > 0;
    if (fan_ok) {
        m.triangles = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}};
    } else {
        // Every angular gap is below π, so the origin is an interior point
        // that sees all vertices.
        m.vertices.push_back({0.0, 0.0});
        for (int i = 0; i < 5; ++i) m.triangles.push_back({5, i, (i + 1) % 5});
    }
    if (!is_simple_polygon(poly)) throw ComputationError("pentagon generator produced a non-simple polygon");
    return refine(m, max_area);
}

Mesh gen_annulus(double r_inner, int n_seg, double max_area) {
    if (!(r_inner >= 0.0 && r_inner < 1.0)) throw ValidationError("annulus: inner radius must lie in [0, 1)");
    if (n_seg < 8) throw ValidationError("annulus: need at least 8 segments");
    const auto n = static_cast<std::size_t>(n_seg);
    auto on_circle = [&](double r, std::size_t i) {
        const double th = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        return Point2{r * std::cos(th), r * std::sin(th)};
    };
    Mesh m;
    const int nn = n_seg;
    if (r_inner == 0.0) {
        m.vertices.push_back({0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) m.vertices.push_back(on_circle(1.0, i));
        for (int i = 0; i < nn; ++i) {
            m.triangles.push_back({0, 1 + i, 1 + (i + 1) % nn});
            m.segments.push_back({1 + i, 1 + (i + 1) % nn});
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) m.vertices.push_back(on_circle(r_inner, i));
        for (std::size_t i = 0; i < n; ++i) m.vertices.push_back(on_circle(1.0, i));
        for (int i = 0; i < nn; ++i) {
            const int j = (i + 1) % nn;
            m.triangles.push_back({i, nn + i, nn + j});
            m.triangles.push_back({i, nn + j, j});
            m.segments.push_back({nn + i, nn + j});
            m.segments.push_back({j, i});
        }
    }
    return refine(m, max_area);
}

double annulus_inner_radius(std::uint64_t seed) { return 0.8 * SeededUniform(seed).next(); }

bool PolyaReport::has_unannotated_violation() const {
    return std::any_of(violations.begin(), violations.end(), [](const PolyaIndexNote& v) { return !v.annotated; });
}

PolyaReport polya_numeric_check(const Mesh& m, std::size_t count) {
    const EigResult coarse = solve(m, Boundary::Neumann, count);
    const EigResult fine = solve(refine_once(m), Boundary::Neumann, count);
    PolyaReport out;
    out.area = mesh_area(m);
    const WeylFunction w = one_term_weyl(2, out.area);
    for (std::size_t i = 0; i < count; ++i) {
        // P1 eigenvalue error is O(h²): e_coarse ≈ (4/3)(μ_coarse − μ_fine).
        out.eigenvalues.push_back(std::max(0.0, coarse.eigenvalues[i]));
        out.error_estimates.push_back(4.0 / 3.0 * std::abs(coarse.eigenvalues[i] - fine.eigenvalues[i]));
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    const CountingFunction n(Spectrum(out.eigenvalues, CountComplete{count}));
    out.report = is_subspectral_to_function(n, as_monotone(w), Direction::Sub);
    for (std::size_t i = 0; i < count; ++i) {
        const double threshold = w.inverse(static_cast<double>(i + 1));
        const double lk = out.eigenvalues[i];
        if (!at_most(lk, threshold))
            out.violations.push_back({i + 1, lk, threshold, out.error_estimates[i], lk - out.error_estimates[i] <= threshold});
    }
    return out;
}

} // namespace specwb
