#include "specwb/figures.hpp"

#include "specwb/counting.hpp"
#include "specwb/errors.hpp"
#include "specwb/exact_spectra.hpp"
#include "specwb/fem.hpp"
#include "specwb/io.hpp"
#include "specwb/numeric.hpp"
#include "specwb/weyl.hpp"

#include <cmath>
#include <ostream>

namespace specwb {

void write_table_csv(std::ostream& out, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

nlohmann::json table_to_json(const Table& t) {
    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        nlohmann::json col = nlohmann::json::array();
        for (const auto& row : t.rows) col.push_back(row[c]);
        cols[t.columns[c]] = std::move(col);
    }
    return {{"name", t.name}, {"columns", t.columns}, {"data", std::move(cols)}};
}

std::vector<double> lambda_grid(double max, double step) {
    if (!(step > 0.0) || !(max >= 0.0) || !std::isfinite(max))
        throw ValidationError("grid: step must be positive and max finite");
    // Small slack so max itself is kept when it is a multiple of step.
    const auto n = static_cast<std::size_t>(std::floor(max / step * (1.0 + 1e-12)));
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = static_cast<double>(k + 1) * step;
    return g;
}

namespace figures {

namespace {

const RectangleDomain kSquare({10.0, 10.0});

RectangleDomain area100(double L) { return RectangleDomain({L, 100.0 / L}); }

std::string bc_name(Boundary bc) { return bc == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

// Exact row count known up front; rows filled in parallel.
template <class F>
std::vector<std::vector<double>> parallel_rows(std::size_t n, F row) {
    std::vector<std::vector<double>> rows(n);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) rows[i] = row(i);
    });
    return rows;
}

} // namespace

std::vector<std::string> names() {
    return {"quantitative-weyl-rect", "metric-cone", "multiple-rects", "rect-square-1000",
            "subspec-mean", "sphere", "random-pentagons", "random-annuli"};
}

Table quantitative_weyl_rect(double lambda_max, double step) {
    const auto grid = lambda_grid(lambda_max, step);
    const WeylFunction w = one_term_weyl(2, kSquare.volume());
    Table t{"quantitative_weyl_rect", {"lambda", "N", "weyl", "upper"}, {}};
    t.rows = parallel_rows(grid.size(), [&](std::size_t i) {
        const double x = grid[i];
        const double n = static_cast<double>(rectangle_counting(kSquare, Boundary::Neumann, x));
        return std::vector<double>{x, n, w(x), quant_weyl_rect_bounds(kSquare, Boundary::Neumann, x).upper};
    });
    return t;
}

Table metric_cone_pairs(std::size_t count) {
    const Spectrum r = rectangle_first(RectangleDomain({2.0, 3.0}), Boundary::Dirichlet, count);
    const Spectrum s = rectangle_first(RectangleDomain({1.0, 1.0}), Boundary::Dirichlet, count);
    const auto [dm, dp] = diagonal_deltas({1.0, 1.0}, {2.0, 3.0});
    const MetricCone cone = metric_cone(dm, dp, 2);
    Table t{"metric_cone", {"k", "lambda_R", "lambda_S", "ratio", "lo", "hi"}, {}};
    for (std::size_t k = 0; k < count; ++k)
        t.rows.push_back({static_cast<double>(k + 1), r[k], s[k], r[k] / s[k], cone.lo(), cone.hi()});
    return t;
}

std::vector<Table> multiple_rects(Boundary bc, double lambda_max, double step) {
    const auto grid = lambda_grid(lambda_max, step);
    const WeylFunction w = one_term_weyl(2, 100.0);
    const std::string stem = "multiple_rects_" + bc_name(bc);
    Table wide{stem, {"lambda"}, std::vector<std::vector<double>>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) wide.rows[i].push_back(grid[i]);
    std::vector<Table> out(1);
    for (int L : {10, 30, 50, 70, 90}) {
        const CountingFunction n(rectangle_spectrum(area100(L), bc, lambda_max));
        Table t{stem + "_L" + std::to_string(L), {"lambda", "N", "weyl"}, {}};
        wide.columns.push_back("N_L" + std::to_string(L));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double c = static_cast<double>(n(grid[i]));
            t.rows.push_back({grid[i], c, w(grid[i])});
            wide.rows[i].push_back(c);
        }
        out.push_back(std::move(t));
    }
    wide.columns.push_back("weyl");
    for (std::size_t i = 0; i < grid.size(); ++i) wide.rows[i].push_back(w(grid[i]));
    out[0] = std::move(wide);
    return out;
}

Table rect_square_1000(double step) {
    constexpr std::size_t kCount = 1000;
    const Spectrum sq_d = rectangle_first(kSquare, Boundary::Dirichlet, kCount);
    const Spectrum sq_n = rectangle_first(kSquare, Boundary::Neumann, kCount);
    std::vector<double> sides;
    for (std::size_t j = 1;; ++j) {
        const double L = 10.025 + static_cast<double>(j) * step;
        if (L >= 30.0) break;
        sides.push_back(L);
    }
    Table t{"rect_square_1000", {"L", "ratio", "dirichlet_below", "neumann_above"}, {}};
    t.rows = parallel_rows(sides.size(), [&](std::size_t i) {
        const double L = sides[i];
        const Spectrum d = rectangle_first(area100(L), Boundary::Dirichlet, kCount);
        const Spectrum n = rectangle_first(area100(L), Boundary::Neumann, kCount);
        // d below the square is the square exceeding d, ties excluded on both sides.
        return std::vector<double>{L, L / 10.0, subspectral_mean(sq_d, d, kCount),
                                   subspectral_mean(n, sq_n, kCount)};
    });
    return t;
}

Table subspectral_mean_series(std::size_t n) {
    const Spectrum sq = rectangle_first(kSquare, Boundary::Dirichlet, n);
    std::vector<std::vector<double>> series;
    for (double L : {15.0, 18.0, 21.0})
        series.push_back(subspectral_mean_series(sq, rectangle_first(area100(L), Boundary::Dirichlet, n), n));
    Table t{"subspec_mean", {"n", "mean_15", "mean_18", "mean_21"}, {}};
    for (std::size_t m = 0; m < n; ++m)
        t.rows.push_back({static_cast<double>(m + 1), series[0][m], series[1][m], series[2][m]});
    return t;
}

Table sphere(int n, int k_max, double step) {
    const SphereDomain s(n);
    if (k_max < 1) throw ValidationError("sphere figure: levels must be >= 1");
    const double top = static_cast<double>(k_max) * (k_max + n - 1);
    const auto grid = lambda_grid(top, step);
    const WeylFunction w = sphere_weyl(s);
    Table t{"sphere_n" + std::to_string(n), {"lambda", "N", "weyl"}, {}};
    for (double x : grid) t.rows.push_back({x, static_cast<double>(sphere_counting(s, x)), w(x)});
    return t;
}

namespace {

void append_polya_rows(Table& t, double label, double extra, const PolyaReport& r) {
    const WeylFunction w = one_term_weyl(2, r.area);
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k)
        t.rows.push_back({label, extra, static_cast<double>(k + 1), r.eigenvalues[k],
                          w.inverse(static_cast<double>(k + 1)), r.error_estimates[k]});
}

} // namespace

std::vector<Table> random_pentagons(const std::vector<std::uint64_t>& seeds, std::size_t count, double max_area) {
    Table eigs{"random_pentagons", {"seed", "area", "k", "eigenvalue", "weyl_threshold", "error_estimate"}, {}};
    Table verts{"random_pentagons_vertices", {"seed", "vertex", "x", "y"}, {}};
    for (std::uint64_t seed : seeds) {
        const auto pv = pentagon_vertices(seed);
        for (std::size_t i = 0; i < pv.size(); ++i)
            verts.rows.push_back({static_cast<double>(seed), static_cast<double>(i), pv[i].x, pv[i].y});
        const PolyaReport r = polya_numeric_check(gen_pentagon(seed, max_area), count);
        append_polya_rows(eigs, static_cast<double>(seed), r.area, r);
    }
    return {eigs, verts};
}

Table random_annuli(const std::vector<std::uint64_t>& seeds, std::size_t count, int n_seg, double max_area) {
    Table t{"random_annuli", {"seed", "r_inner", "k", "eigenvalue", "weyl_threshold", "error_estimate"}, {}};
    // Seed 0 labels the disk.
    append_polya_rows(t, 0.0, 0.0, polya_numeric_check(gen_annulus(0.0, n_seg, max_area), count));
    for (std::uint64_t seed : seeds) {
        const double r = annulus_inner_radius(seed);
        append_polya_rows(t, static_cast<double>(seed), r, polya_numeric_check(gen_annulus(r, n_seg, max_area), count));
    }
    return t;
}

} // namespace figures
} // namespace specwb
