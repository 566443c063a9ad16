#include "specwb/cli.hpp"

#include "specwb/counting.hpp"
#include "specwb/errors.hpp"
#include "specwb/exact_spectra.hpp"
#include "specwb/fem.hpp"
#include "specwb/figures.hpp"
#include "specwb/heat.hpp"
#include "specwb/io.hpp"
#include "specwb/weyl.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace specwb::cli {

namespace {

struct UnknownFigure : ValidationError {
    using ValidationError::ValidationError;
};

// Every flag any subcommand may read; CLI11 fills the ones that are bound.
struct Options {
    std::string kind;
    std::vector<double> dims, dims_a, dims_b, lattice, lambdas, times, polygon;
    std::string bc = "dirichlet";
    std::string format = "csv";
    std::string out_path;
    std::string weyl;
    std::string domain = "rect";
    std::string mesh_path;
    std::string packing = "tiling";
    std::optional<double> cap, radius, delta, delta_minus, delta_plus;
    std::optional<std::size_t> count;
    double volume = 1.0, eps = 0.1, max_area = 0.0025, r_inner = 0.5, step = 0.0;
    int n = 2, n_seg = 64, levels = 10;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4};
};

Boundary parse_bc(const std::string& s) { return s == "neumann" ? Boundary::Neumann : Boundary::Dirichlet; }

Eigen::MatrixXd parse_lattice(const std::vector<double>& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (v.empty() || static_cast<std::size_t>(n * n) != v.size())
        throw ValidationError("--lattice needs n*n entries listed column by column");
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) b(r, c) = v[static_cast<std::size_t>(c * n + r)];
    return b;
}

std::vector<Point2> parse_polygon(const std::vector<double>& v) {
    if (v.size() < 6 || v.size() % 2) throw ValidationError("--polygon needs x,y pairs for at least 3 vertices");
    std::vector<Point2> p;
    for (std::size_t i = 0; i < v.size(); i += 2) p.push_back({v[i], v[i + 1]});
    return p;
}

double require(const std::optional<double>& v, const char* flag) {
    if (!v) throw ValidationError(std::string(flag) + " is required");
    return *v;
}

// Writes to --out when given, else to `out`.
void with_sink(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (o.out_path.empty()) {
        body(out);
        return;
    }
    std::ofstream f(o.out_path);
    if (!f) throw ValidationError("cannot open " + o.out_path);
    body(f);
}

void emit_json(const Options& o, std::ostream& out, const nlohmann::json& j) {
    with_sink(o, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
}

// Several tables with --out go to a directory, one file per table; otherwise
// the first table is the primary dataset.
void emit_tables(const Options& o, std::ostream& out, const std::vector<Table>& tables) {
    const bool json = o.format == "json";
    if (tables.size() > 1 && !o.out_path.empty()) {
        std::filesystem::create_directories(o.out_path);
        for (const Table& t : tables) {
            std::ofstream f(std::filesystem::path(o.out_path) / (t.name + (json ? ".json" : ".csv")));
            if (!f) throw ValidationError("cannot write into " + o.out_path);
            if (json)
                f << table_to_json(t).dump(2) << '\n';
            else
                write_table_csv(f, t);
        }
        return;
    }
    if (json) {
        nlohmann::json j = nlohmann::json::array();
        for (const Table& t : tables) j.push_back(table_to_json(t));
        emit_json(o, out, tables.size() == 1 ? j[0] : j);
        return;
    }
    with_sink(o, out, [&](std::ostream& s) { write_table_csv(s, tables.front()); });
}

void emit_spectrum(const Options& o, std::ostream& out, const Spectrum& s) {
    if (o.format == "json")
        emit_json(o, out, spectrum_to_json(s));
    else
        with_sink(o, out, [&](std::ostream& f) { write_spectrum_csv(f, s); });
}

Table report_table(const ComparisonReport& r, std::optional<double> beyond) {
    const double nan = std::nan("");
    const auto& v = r.first_violation;
    return {"compare",
            {"holds", "window_lo", "window_hi", "violation_lambda", "violation_lhs", "violation_rhs", "beyond"},
            {{r.holds ? 1.0 : 0.0, r.window_lo, r.window_hi, v ? v->lambda : nan, v ? v->lhs : nan, v ? v->rhs : nan,
              beyond.value_or(nan)}}};
}

Mesh build_mesh(const Options& o) {
    if (o.domain == "mesh") {
        std::ifstream f(o.mesh_path);
        if (!f) throw ValidationError("cannot read mesh file '" + o.mesh_path + "'");
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("mesh file: ") + e.what());
        }
        return refine(mesh_from_json(j), o.max_area);
    }
    if (o.domain == "pentagon") return gen_pentagon(o.seed, o.max_area);
    if (o.domain == "annulus") return gen_annulus(o.r_inner, o.n_seg, o.max_area);
    if (o.domain == "disk") return gen_annulus(0.0, o.n_seg, o.max_area);
    if (o.dims.size() != 2) throw ValidationError("--dims needs two side lengths for a rect mesh");
    return gen_rect_mesh(o.dims[0], o.dims[1], o.max_area);
}

Spectrum spectrum_of(const Options& o) {
    if (o.kind == "sphere") return sphere_spectrum(SphereDomain(o.n), require(o.cap, "--cap"));
    if (o.kind == "torus") return torus_spectrum(FlatTorus(parse_lattice(o.lattice)), require(o.cap, "--cap"));
    const RectangleDomain dom(o.dims);
    if (o.count) return rectangle_first(dom, parse_bc(o.bc), *o.count);
    return rectangle_spectrum(dom, parse_bc(o.bc), require(o.cap, "--cap"));
}

std::uint64_t count_of(const Options& o, double lambda) {
    if (o.kind == "sphere") return sphere_counting(SphereDomain(o.n), lambda);
    if (o.kind == "torus") {
        const FlatTorus t(parse_lattice(o.lattice));
        return lattice_squared_norms(t.dual_basis(), lambda).size();
    }
    return rectangle_counting(RectangleDomain(o.dims), parse_bc(o.bc), lambda);
}

void run_figures(const Options& o, std::ostream& out) {
    const Boundary bc = parse_bc(o.bc);
    const auto& name = o.kind;
    std::vector<Table> tables;
    if (name == "quantitative-weyl-rect")
        tables = {figures::quantitative_weyl_rect(10.0, o.step > 0 ? o.step : 0.01)};
    else if (name == "metric-cone")
        tables = {figures::metric_cone_pairs(o.count.value_or(100))};
    else if (name == "multiple-rects")
        tables = figures::multiple_rects(bc, 100.0, o.step > 0 ? o.step : 0.01);
    else if (name == "rect-square-1000")
        tables = {figures::rect_square_1000(o.step > 0 ? o.step : 0.005)};
    else if (name == "subspec-mean")
        tables = {figures::subspectral_mean_series(o.count.value_or(1000))};
    else if (name == "sphere")
        tables = {figures::sphere(o.n, o.levels, o.step > 0 ? o.step : 0.01)};
    else if (name == "random-pentagons")
        tables = figures::random_pentagons(o.seeds, o.count.value_or(50), o.max_area);
    else if (name == "random-annuli")
        tables = {figures::random_annuli(o.seeds, o.count.value_or(75), o.n_seg, o.max_area)};
    else
        throw UnknownFigure("unknown figure '" + name + "'");
    emit_tables(o, out, tables);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Spectral counting, Weyl bounds and eigenvalue comparisons", "specwb"};
    app.require_subcommand(1);

    const auto in_set = [](std::initializer_list<std::string> v) { return CLI::IsMember(std::vector<std::string>(v)); };
    const auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "Output format")->check(in_set({"csv", "json"}));
        c->add_option("--out", o.out_path, "Output file (directory for multi-table figures)");
    };
    const auto add_bc = [&](CLI::App* c) {
        c->add_option("--bc", o.bc, "Boundary condition")->check(in_set({"dirichlet", "neumann"}));
    };
    const auto add_dims = [&](CLI::App* c, const char* flag, std::vector<double>& v) {
        c->add_option(flag, v, "Side lengths, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
    };
    const auto add_kind = [&](CLI::App* c) {
        c->add_option("kind", o.kind, "rect, torus or sphere")->required()->check(in_set({"rect", "torus", "sphere"}));
        add_dims(c, "--dims", o.dims);
        add_bc(c);
        c->add_option("--lattice", o.lattice, "Lattice basis, column by column")->delimiter(',');
        c->add_option("--n", o.n, "Sphere dimension")->check(CLI::PositiveNumber);
    };
    const auto add_mesh = [&](CLI::App* c) {
        c->add_option("--domain", o.domain, "Domain")->check(in_set({"rect", "pentagon", "annulus", "disk", "mesh"}));
        add_dims(c, "--dims", o.dims);
        c->add_option("--seed", o.seed, "Pentagon seed");
        c->add_option("--r-inner", o.r_inner, "Annulus inner radius");
        c->add_option("--n-seg", o.n_seg, "Boundary segments of the annulus")->check(CLI::PositiveNumber);
        c->add_option("--max-area", o.max_area, "Largest triangle area")->check(CLI::PositiveNumber);
        c->add_option("--mesh", o.mesh_path, "Mesh JSON file (--domain mesh)");
    };

    std::map<std::string, std::function<void()>> actions;

    auto* spectrum = app.add_subcommand("spectrum", "Exact eigenvalues");
    add_kind(spectrum);
    spectrum->add_option("--cap", o.cap, "Largest eigenvalue")->check(CLI::NonNegativeNumber);
    spectrum->add_option("--count", o.count, "First eigenvalues instead of a cap (rect)");
    add_format(spectrum);
    actions["spectrum"] = [&] { emit_spectrum(o, out, spectrum_of(o)); };

    auto* count = app.add_subcommand("count", "Counting function N(lambda)");
    add_kind(count);
    count->add_option("--lambda", o.lambdas, "Query points")->delimiter(',')->required();
    add_format(count);
    actions["count"] = [&] {
        Table t{"count", {"lambda", "N"}, {}};
        for (double x : o.lambdas) t.rows.push_back({x, static_cast<double>(count_of(o, x))});
        emit_tables(o, out, {t});
    };

    auto* compare = app.add_subcommand("compare", "Subspectrality of rectangle A to B or to its Weyl function");
    add_dims(compare, "--dims-a", o.dims_a);
    add_dims(compare, "--dims-b", o.dims_b);
    add_bc(compare);
    compare->add_option("--cap", o.cap, "Comparison window (0, cap]")->required()->check(CLI::NonNegativeNumber);
    compare->add_option("--weyl", o.weyl, "Compare A to its one-term Weyl function")->check(in_set({"sub", "super"}));
    add_format(compare);
    actions["compare"] = [&] {
        const RectangleDomain a(o.dims_a);
        const CountingFunction na(rectangle_spectrum(a, parse_bc(o.bc), *o.cap));
        ComparisonReport r;
        std::optional<double> beyond;
        if (!o.weyl.empty()) {
            const auto f = as_monotone(one_term_weyl(a.dimension(), a.volume()));
            r = is_subspectral_to_function(na, f, o.weyl == "sub" ? Direction::Sub : Direction::Super);
        } else {
            const CountingFunction nb(rectangle_spectrum(RectangleDomain(o.dims_b), parse_bc(o.bc), *o.cap));
            r = is_subspectral(na, nb);
            beyond = subspectral_beyond(na, nb);
        }
        if (o.format == "json") {
            auto j = report_to_json(r);
            j["beyond"] = beyond ? nlohmann::json(*beyond) : nlohmann::json(nullptr);
            emit_json(o, out, j);
        } else {
            emit_tables(o, out, {report_table(r, beyond)});
        }
    };

    auto* bounds = app.add_subcommand("weyl-bounds", "Quantitative Weyl envelopes");
    add_dims(bounds, "--dims", o.dims);
    add_bc(bounds);
    bounds->add_option("--polygon", o.polygon, "Polygon x,y pairs instead of a rectangle")->delimiter(',');
    bounds->add_option("--eps", o.eps, "Polygon grid width")->check(CLI::PositiveNumber);
    bounds->add_option("--lambda", o.lambdas, "Query points")->delimiter(',')->required();
    add_format(bounds);
    actions["weyl-bounds"] = [&] {
        if (!o.polygon.empty()) {
            const auto poly = parse_polygon(o.polygon);
            Table t{"weyl_bounds", {"lambda", "lower", "upper", "inside", "touching"}, {}};
            for (double x : o.lambdas) {
                const auto e = quant_weyl_polygon_bounds(poly, o.eps, x);
                t.rows.push_back({x, e.lower, e.upper, static_cast<double>(e.cells.inside),
                                  static_cast<double>(e.cells.touching)});
            }
            emit_tables(o, out, {t});
            return;
        }
        const RectangleDomain dom(o.dims);
        const Boundary bc = parse_bc(o.bc);
        Table t{"weyl_bounds", {"lambda", "lower", "exact", "upper"}, {}};
        for (double x : o.lambdas) {
            const auto e = quant_weyl_rect_bounds(dom, bc, x);
            t.rows.push_back({x, e.lower, static_cast<double>(rectangle_counting(dom, bc, x)), e.upper});
        }
        emit_tables(o, out, {t});
    };

    auto* thresholds = app.add_subcommand("thresholds", "Eventual subspectrality thresholds for |A| < |B|");
    add_dims(thresholds, "--dims-a", o.dims_a);
    add_dims(thresholds, "--dims-b", o.dims_b);
    add_format(thresholds);
    actions["thresholds"] = [&] {
        const auto th = eventual_thresholds(RectangleDomain(o.dims_a), RectangleDomain(o.dims_b));
        emit_tables(o, out, {Table{"thresholds", {"lambda0", "lambda1"}, {{th.lambda0, th.lambda1}}}});
    };

    auto* polya = app.add_subcommand("polya", "Packing lower bounds for Dirichlet eigenvalues");
    polya->add_option("--volume", o.volume, "Domain volume")->check(CLI::PositiveNumber);
    polya->add_option("--n", o.n, "Dimension")->check(CLI::PositiveNumber);
    polya->add_option("--packing", o.packing, "Packing constant source")
        ->check(in_set({"tiling", "convex-planar", "user"}));
    polya->add_option("--delta", o.delta, "Packing density for --packing user");
    polya->add_option("--count", o.count, "Number of eigenvalues")->required();
    add_format(polya);
    actions["polya"] = [&] {
        const PackingSpec p = o.packing == "tiling"          ? PackingSpec::tiling()
                              : o.packing == "convex-planar" ? PackingSpec::convex_planar()
                                                             : PackingSpec::user_supplied(require(o.delta, "--delta"));
        Table t{"polya", {"k", "lower_bound"}, {}};
        for (std::size_t k = 1; k <= *o.count; ++k)
            t.rows.push_back({static_cast<double>(k), polya_eigenvalue_lower_bound(o.n, o.volume, p, k)});
        emit_tables(o, out, {t});
    };

    auto* cone = app.add_subcommand("cone", "Metric comparison cone");
    cone->add_option("--delta-minus", o.delta_minus, "Lower metric distortion");
    cone->add_option("--delta-plus", o.delta_plus, "Upper metric distortion");
    cone->add_option("--n", o.n, "Dimension")->check(CLI::NonNegativeNumber);
    add_dims(cone, "--dims-a", o.dims_a);
    add_dims(cone, "--dims-b", o.dims_b);
    add_format(cone);
    actions["cone"] = [&] {
        double dm = 0.0, dp = 0.0;
        int n = o.n;
        if (!o.dims_a.empty() || !o.dims_b.empty()) {
            std::tie(dm, dp) = diagonal_deltas(o.dims_a, o.dims_b);
            n = static_cast<int>(o.dims_a.size());
        } else {
            dm = require(o.delta_minus, "--delta-minus");
            dp = require(o.delta_plus, "--delta-plus");
        }
        const MetricCone c = metric_cone(dm, dp, n);
        emit_tables(o, out, {Table{"cone", {"delta_minus", "delta_plus", "lo", "hi"}, {{dm, dp, c.lo(), c.hi()}}}});
    };

    auto* heat = app.add_subcommand("heat", "Partial heat trace with certified tail");
    heat->add_option("kind", o.kind, "rect or torus")->required()->check(in_set({"rect", "torus"}));
    add_dims(heat, "--dims", o.dims);
    add_bc(heat);
    heat->add_option("--lattice", o.lattice, "Lattice basis, column by column")->delimiter(',');
    heat->add_option("--cap", o.cap, "Spectrum cap")->required()->check(CLI::NonNegativeNumber);
    heat->add_option("--t", o.times, "Times")->delimiter(',')->required()->check(CLI::PositiveNumber);
    add_format(heat);
    actions["heat"] = [&] {
        Spectrum s;
        std::optional<CountingEnvelope> env;
        double volume = 0;
        int n = 0;
        if (o.kind == "torus") {
            const FlatTorus t(parse_lattice(o.lattice));
            s = torus_spectrum(t, *o.cap);
            env = CountingEnvelope::torus(t);
            volume = t.volume();
            n = t.dimension();
        } else {
            const RectangleDomain dom(o.dims);
            s = rectangle_spectrum(dom, parse_bc(o.bc), *o.cap);
            env = CountingEnvelope::rectangle(dom, parse_bc(o.bc));
            volume = dom.volume();
            n = dom.dimension();
        }
        // bound is the tiling packing bound; it is not a bound for closed tori.
        Table t{"heat", {"t", "value", "tail_bound", "bound"}, {}};
        for (double x : o.times) {
            const auto r = heat_trace_partial(s, x, *env);
            t.rows.push_back({x, r.value, r.tail_bound.value_or(std::nan("")),
                              packing_heat_bound(volume, PackingSpec::tiling(), n, x)});
        }
        emit_tables(o, out, {t});
    };

    auto* jacobi = app.add_subcommand("jacobi", "Poisson summation check on a flat torus");
    jacobi->add_option("--lattice", o.lattice, "Lattice basis, column by column")->delimiter(',')->required();
    jacobi->add_option("--t", o.times, "Times")->delimiter(',')->required()->check(CLI::PositiveNumber);
    jacobi->add_option("--radius", o.radius, "Dual-lattice truncation radius")->check(CLI::PositiveNumber);
    add_format(jacobi);
    actions["jacobi"] = [&] {
        const FlatTorus torus(parse_lattice(o.lattice));
        Table t{"jacobi", {"t", "lhs", "rhs", "residual", "radius", "lattice_radius"}, {}};
        for (double x : o.times) {
            const auto r = o.radius ? jacobi_check(torus, x, *o.radius) : jacobi_check(torus, x);
            t.rows.push_back({x, r.lhs, r.rhs, r.residual, r.radius, r.lattice_radius});
        }
        emit_tables(o, out, {t});
    };

    auto* fem_solve = app.add_subcommand("fem-solve", "P1 finite element eigenvalues");
    add_mesh(fem_solve);
    add_bc(fem_solve);
    fem_solve->add_option("--count", o.count, "Number of eigenvalues")->required();
    add_format(fem_solve);
    actions["fem-solve"] = [&] {
        const EigResult r = solve(build_mesh(o), parse_bc(o.bc), *o.count);
        if (o.format == "json")
            emit_json(o, out, {{"eigenvalues", r.eigenvalues}, {"vertices", r.vertex_count},
                               {"max_triangle_area", r.max_triangle_area}, {"iterations", r.iterations}});
        else
            with_sink(o, out, [&](std::ostream& f) { write_eigenvalues_csv(f, r); });
    };

    auto* mesh_gen = app.add_subcommand("mesh-gen", "Generate a triangulation as JSON");
    add_mesh(mesh_gen);
    mesh_gen->add_option("--out", o.out_path, "Output file");
    actions["mesh-gen"] = [&] { emit_json(o, out, mesh_to_json(build_mesh(o))); };

    auto* mean = app.add_subcommand("subspectral-mean", "Subspectral mean series of rectangle A over B");
    add_dims(mean, "--dims-a", o.dims_a);
    add_dims(mean, "--dims-b", o.dims_b);
    add_bc(mean);
    mean->add_option("--count", o.count, "Number of eigenvalues")->required();
    add_format(mean);
    actions["subspectral-mean"] = [&] {
        const Boundary bc = parse_bc(o.bc);
        const auto s = subspectral_mean_series(rectangle_first(RectangleDomain(o.dims_a), bc, *o.count),
                                               rectangle_first(RectangleDomain(o.dims_b), bc, *o.count), *o.count);
        Table t{"subspectral_mean", {"n", "mean"}, {}};
        for (std::size_t m = 0; m < s.size(); ++m) t.rows.push_back({static_cast<double>(m + 1), s[m]});
        emit_tables(o, out, {t});
    };

    auto* figs = app.add_subcommand("figures", "Figure datasets");
    figs->add_option("name", o.kind, "Figure name")->required();
    add_bc(figs);
    figs->add_option("--n", o.n, "Sphere dimension")->check(CLI::PositiveNumber);
    figs->add_option("--levels", o.levels, "Sphere levels")->check(CLI::PositiveNumber);
    figs->add_option("--step", o.step, "Grid step")->check(CLI::PositiveNumber);
    figs->add_option("--count", o.count, "Number of eigenvalues");
    figs->add_option("--seeds", o.seeds, "Seeds")->delimiter(',');
    figs->add_option("--max-area", o.max_area, "Largest triangle area")->check(CLI::PositiveNumber);
    figs->add_option("--n-seg", o.n_seg, "Annulus boundary segments")->check(CLI::PositiveNumber);
    add_format(figs);
    actions["figures"] = [&] { run_figures(o, out); };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // Prints help to out, or the error and usage hint to err.
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        for (auto* sub : app.get_subcommands()) actions.at(sub->get_name())();
        return 0;
    } catch (const UnknownFigure& e) {
        err << "error: " << e.what() << "\navailable figures:";
        for (const auto& n : figures::names()) err << ' ' << n;
        err << '\n';
        return 1;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << '\n';
        return 2;
    }
}

} // namespace specwb::cli
