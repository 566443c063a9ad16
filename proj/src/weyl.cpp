#include "specwb/weyl.hpp"

#include "rational.hpp"
#include "specwb/errors.hpp"
#include "specwb/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace specwb {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive and finite");
}

} // namespace

WeylFunction one_term_weyl(int n, double volume) {
    if (n < 1) throw ValidationError("Weyl function: dimension must be >= 1");
    if (!(volume > 0.0)) throw ValidationError("Weyl function: volume must be positive");
    return WeylFunction(n, unit_ball_volume(n) * volume / std::pow(2.0 * kPi, n));
}

WeylFunction two_term_weyl(int n, double volume, double boundary_measure, Boundary bc) {
    if (n < 2) throw ValidationError("two-term Weyl function: dimension must be >= 2");
    if (!(boundary_measure >= 0.0)) throw ValidationError("two-term Weyl function: boundary measure must be >= 0");
    const double sign = bc == Boundary::Dirichlet ? -1.0 : 1.0;
    const double c_boundary = sign * 0.25 * unit_ball_volume(n - 1) * boundary_measure / std::pow(2.0 * kPi, n - 1);
    return WeylFunction(n, one_term_weyl(n, volume).c_volume(), c_boundary);
}

Envelope quant_weyl_rect_bounds(const RectangleDomain& dom, Boundary bc, double lambda) {
    require_positive_lambda(lambda);
    const int n = dom.dimension();
    const double w = one_term_weyl(n, dom.volume())(lambda);
    const double r = codiagonal(dom) / std::sqrt(lambda);
    if (bc == Boundary::Dirichlet) return {w * std::pow(std::max(0.0, 1.0 - r), n), w};
    return {w, w * std::pow(1.0 + r, n)};
}

namespace {

using detail::BigInt;
using detail::Rational;
using detail::RPoint;

long to_long(const BigInt& v) {
    if (v > std::numeric_limits<long>::max() / 4 || v < std::numeric_limits<long>::min() / 4)
        throw ComputationError("polygon grid index out of range");
    return v.convert_to<long>();
}

// Open cell (x0,x1)×(y0,y1) against the closed segment [p,q]; separating
// axes are the two coordinate axes and the segment normal.
bool segment_meets_open_cell(const RPoint& p, const RPoint& q, const Rational& x0, const Rational& x1,
                             const Rational& y0, const Rational& y1) {
    if (std::max(p.x, q.x) <= x0 || std::min(p.x, q.x) >= x1) return false;
    if (std::max(p.y, q.y) <= y0 || std::min(p.y, q.y) >= y1) return false;
    const RPoint corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    bool pos = true, neg = true;
    for (const auto& c : corners) {
        const int o = detail::orient(p, q, c);
        pos = pos && o >= 0;
        neg = neg && o <= 0;
    }
    return !(pos || neg);
}

} // namespace

CellCounts classify_grid_cells(const std::vector<Point2>& polygon, double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("grid spacing must be positive");
    if (!is_simple_polygon(polygon)) throw ValidationError("polygon is not simple");
    const Rational e = detail::exact(eps);
    std::vector<RPoint> p;
    for (const auto& v : polygon) p.push_back(detail::exact(v));
    Rational min_x = p[0].x, max_x = p[0].x, min_y = p[0].y, max_y = p[0].y;
    for (const auto& v : p) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    // Cells that can meet the polygon: i in [i0, i1), j in [j0, j1).
    const long i0 = to_long(detail::floor_of(min_x / e)), i1 = to_long(detail::ceil_of(max_x / e));
    const long j0 = to_long(detail::floor_of(min_y / e)), j1 = to_long(detail::ceil_of(max_y / e));
    const long nx = i1 - i0, ny = j1 - j0;
    if (static_cast<double>(nx) * static_cast<double>(ny) > 5e8) throw ComputationError("polygon grid too fine");
    std::vector<char> crossed(static_cast<std::size_t>(nx * ny), 0);

    const std::size_t m = p.size();
    for (std::size_t k = 0; k < m; ++k) {
        const RPoint& a = p[k];
        const RPoint& b = p[(k + 1) % m];
        const Rational ex0 = std::min(a.x, b.x), ex1 = std::max(a.x, b.x);
        const long ci0 = std::max(i0, to_long(detail::floor_of(ex0 / e)) - 1);
        const long ci1 = std::min(i1 - 1, to_long(detail::floor_of(ex1 / e)));
        for (long i = ci0; i <= ci1; ++i) {
            const Rational x0 = e * i, x1 = e * (i + 1);
            const Rational lo = std::max(x0, ex0), hi = std::min(x1, ex1);
            if (lo > hi) continue;
            Rational ylo, yhi;
            if (a.x == b.x) {
                ylo = std::min(a.y, b.y);
                yhi = std::max(a.y, b.y);
            } else {
                const Rational slope = (b.y - a.y) / (b.x - a.x);
                const Rational ya = a.y + slope * (lo - a.x), yb = a.y + slope * (hi - a.x);
                ylo = std::min(ya, yb);
                yhi = std::max(ya, yb);
            }
            const long cj0 = std::max(j0, to_long(detail::floor_of(ylo / e)) - 1);
            const long cj1 = std::min(j1 - 1, to_long(detail::floor_of(yhi / e)));
            for (long j = cj0; j <= cj1; ++j) {
                auto& flag = crossed[static_cast<std::size_t>((j - j0) * nx + (i - i0))];
                if (!flag && segment_meets_open_cell(a, b, x0, x1, e * j, e * (j + 1))) flag = 1;
            }
        }
    }

    // Uncrossed cells lie entirely inside or outside; decide by the parity of
    // edge crossings left of the cell centre on the centre's horizontal line.
    const std::size_t rows = static_cast<std::size_t>(ny);
    std::vector<std::uint64_t> inside_rows(rows, 0), crossed_rows(rows, 0);
    parallel_for(rows, [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            const long j = j0 + static_cast<long>(r);
            const char* row = crossed.data() + r * static_cast<std::size_t>(nx);
            std::vector<std::uint64_t> prefix(static_cast<std::size_t>(nx) + 1, 0);
            for (long i = 0; i < nx; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + (row[i] ? 1 : 0);
            crossed_rows[r] = prefix.back();

            const Rational yc = e * j + e / 2;
            std::vector<Rational> xs;
            for (std::size_t k = 0; k < m; ++k) {
                const RPoint& a = p[k];
                const RPoint& b = p[(k + 1) % m];
                if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y))
                    xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
            std::sort(xs.begin(), xs.end());
            std::uint64_t inside = 0;
            for (std::size_t t = 0; t + 1 < xs.size(); t += 2) {
                // Centres (i + 1/2)ε strictly between xs[t] and xs[t+1].
                long first = to_long(detail::floor_of(xs[t] / e - Rational(1, 2))) + 1;
                long last = to_long(detail::ceil_of(xs[t + 1] / e - Rational(1, 2))) - 1;
                first = std::max(first, i0);
                last = std::min(last, i1 - 1);
                if (first > last) continue;
                const auto lo = static_cast<std::size_t>(first - i0), hi = static_cast<std::size_t>(last - i0) + 1;
                inside += (hi - lo) - (prefix[hi] - prefix[lo]);
            }
            inside_rows[r] = inside;
        }
    });
    CellCounts out;
    for (std::size_t r = 0; r < rows; ++r) {
        out.inside += inside_rows[r];
        out.touching += inside_rows[r] + crossed_rows[r];
    }
    return out;
}

PolygonEnvelope quant_weyl_polygon_bounds(const std::vector<Point2>& polygon, double eps, double lambda) {
    require_positive_lambda(lambda);
    const CellCounts cells = classify_grid_cells(polygon, eps);
    const double w = one_term_weyl(2, eps * eps)(lambda);
    const double r = kPi * std::sqrt(2.0) / (eps * std::sqrt(lambda));
    const double lower_factor = std::max(0.0, 1.0 - r);
    return {static_cast<double>(cells.inside) * w * lower_factor * lower_factor,
            static_cast<double>(cells.touching) * w * (1.0 + r) * (1.0 + r), cells};
}

Thresholds eventual_thresholds(const RectangleDomain& r, const RectangleDomain& rp) {
    if (r.dimension() != rp.dimension()) throw ValidationError("thresholds: dimensions differ");
    const double v = r.volume(), vp = rp.volume();
    if (!(v < vp)) throw ValidationError("thresholds: require |R| < |R'|");
    const double n = r.dimension();
    const double d = codiagonal(r), dp = codiagonal(rp);
    const double lambda0 = dp * dp / std::pow(1.0 - std::pow(v / vp, 1.0 / n), 2.0);
    const double lambda1 = d * d / std::pow(std::pow(vp / v, 1.0 / n) - 1.0, 2.0);
    return {lambda0, lambda1};
}

PackingSpec::PackingSpec(double delta, PackingProvenance p) : delta_(delta), provenance_(p) {
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("packing constant must lie in (0, 1]");
}

PackingSpec PackingSpec::tiling() { return {1.0, PackingProvenance::Tiling}; }
PackingSpec PackingSpec::convex_planar() { return {std::sqrt(3.0) / 2.0, PackingProvenance::ConvexPlanarLowerBound}; }
PackingSpec PackingSpec::user_supplied(double delta) { return {delta, PackingProvenance::UserSupplied}; }

const std::vector<PackingConstant>& packing_catalog() {
    static const std::vector<PackingConstant> table = {
        {"unit ball", kPi / std::sqrt(18.0)},
        {"regular octahedron", 18.0 / 19.0},
        {"doubled cone", kPi * std::sqrt(6.0) / 9.0},
        {"tetrahedron", 0.856},
    };
    return table;
}

WeylFunction polya_packing_bound(const WeylFunction& w, const PackingSpec& p) {
    if (!w.one_term()) throw ValidationError("packing bound needs a one-term Weyl function");
    return w.scaled(1.0 / p.delta());
}

double polya_eigenvalue_lower_bound(int n, double volume, const PackingSpec& p, std::size_t k) {
    if (n < 1 || !(volume > 0.0)) throw ValidationError("packing eigenvalue bound: invalid dimension or volume");
    return 4.0 * kPi * kPi / std::pow(unit_ball_volume(n), 2.0 / n) *
           std::pow(p.delta() * static_cast<double>(k) / volume, 2.0 / n);
}

double li_yau_factor(int n) {
    if (n < 1) throw ValidationError("Li-Yau factor: dimension must be >= 1");
    return std::pow((n + 2.0) / n, n / 2.0);
}

MetricCone::MetricCone(double delta_minus, double delta_plus, int n)
    : delta_minus_(delta_minus), delta_plus_(delta_plus), n_(n) {
    if (!(delta_minus > 0.0) || !(delta_minus <= delta_plus) || !std::isfinite(delta_plus))
        throw ValidationError("metric cone: need 0 < delta_minus <= delta_plus");
    if (n < 0) throw ValidationError("metric cone: dimension must be >= 0");
    lo_ = std::pow(delta_minus / delta_plus, n / 2.0) / delta_plus;
    hi_ = std::pow(delta_plus / delta_minus, n / 2.0) / delta_minus;
}

bool MetricCone::contains(double ratio) const { return at_most(lo_, ratio) && at_most(ratio, hi_); }

MetricCone metric_cone(double delta_minus, double delta_plus, int n) { return {delta_minus, delta_plus, n}; }

std::pair<double, double> diagonal_deltas(const std::vector<double>& from_dims, const std::vector<double>& to_dims) {
    if (from_dims.size() != to_dims.size() || from_dims.empty())
        throw ValidationError("diagonal map: dimension lists differ");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < from_dims.size(); ++i) {
        if (!(from_dims[i] > 0.0) || !(to_dims[i] > 0.0)) throw ValidationError("diagonal map: sides must be positive");
        const double r = to_dims[i] / from_dims[i];
        lo = std::min(lo, r * r);
        hi = std::max(hi, r * r);
    }
    return {lo, hi};
}

CoverCheck cover_neumann_check(const RectangleDomain& whole, const std::vector<CoverPiece>& cover, double cap) {
    if (!(cap > 0.0)) throw ValidationError("cover check: cap must be positive");
    if (cover.empty()) throw ValidationError("cover check: empty cover");
    const std::size_t n = whole.dims().size();
    std::vector<std::vector<double>> coords(n);
    for (std::size_t ax = 0; ax < n; ++ax) coords[ax] = {0.0, whole.dims()[ax]};
    for (const auto& piece : cover) {
        if (piece.box.dims().size() != n || piece.offset.size() != n)
            throw ValidationError("cover check: piece dimension mismatch");
        for (std::size_t ax = 0; ax < n; ++ax) {
            const double lo = piece.offset[ax], hi = piece.offset[ax] + piece.box.dims()[ax];
            if (lo < 0.0 || hi > whole.dims()[ax]) throw ValidationError("cover check: piece leaves the whole domain");
            coords[ax].push_back(lo);
            coords[ax].push_back(hi);
        }
    }
    for (auto& c : coords) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    // Overlap multiplicity on the open cells of the arrangement.
    int overlap = 0;
    std::vector<std::size_t> cell(n, 0);
    for (;;) {
        int inside = 0;
        for (const auto& piece : cover) {
            bool in = true;
            for (std::size_t ax = 0; ax < n && in; ++ax) {
                const double mid = 0.5 * (coords[ax][cell[ax]] + coords[ax][cell[ax] + 1]);
                in = piece.offset[ax] < mid && mid < piece.offset[ax] + piece.box.dims()[ax];
            }
            inside += in ? 1 : 0;
        }
        if (inside == 0) throw ValidationError("cover check: pieces do not cover the whole domain");
        overlap = std::max(overlap, inside);
        std::size_t ax = 0;
        while (ax < n && cell[ax] + 2 == coords[ax].size()) cell[ax++] = 0;
        if (ax == n) break;
        ++cell[ax];
    }

    const double factor = 1.0 + overlap;
    std::vector<Spectrum> parts;
    for (const auto& piece : cover) parts.push_back(rectangle_spectrum(piece.box, Boundary::Neumann, factor * cap));
    const Spectrum sigma = merge_spectra(parts);
    const Spectrum lambda = rectangle_spectrum(whole, Boundary::Neumann, cap);

    CoverCheck out;
    out.overlap = overlap;
    out.report.window_hi = cap;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        const double bound = factor * lambda[k];
        // A σ_k missing below (1+G)·cap already exceeds the bound.
        const double s = k < sigma.size() ? sigma[k] : std::numeric_limits<double>::infinity();
        if (!at_most(s, bound)) {
            out.report.holds = false;
            out.report.first_violation = Violation{lambda[k], s, bound};
            break;
        }
    }
    return out;
}

double weyl_density(const Spectrum& spec, double volume, int n, double lambda) {
    if (!(volume > 0.0)) throw ValidationError("density: volume must be positive");
    if (n < 1) throw ValidationError("density: dimension must be >= 1");
    if (!(lambda >= 0.0)) throw ValidationError("density: lambda must be >= 0");
    if (!at_most(lambda, spec.valid_up_to())) throw ValidationError("density: lambda exceeds the spectrum cap");
    return static_cast<double>(CountingFunction(spec)(lambda)) / volume;
}

} // namespace specwb
