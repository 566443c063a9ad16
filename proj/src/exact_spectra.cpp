#include "specwb/exact_spectra.hpp"

#include "specwb/errors.hpp"
#include "specwb/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace specwb {

namespace {

constexpr double kPi = std::numbers::pi;

// 1-D factor: ((i + shift)π/a)² for i ≥ start.
struct AxisFactor {
    double q;
    double shift;
    long start;

    double term(long i) const {
        const double idx = static_cast<double>(i) + shift;
        return idx * idx * q;
    }
};

std::vector<AxisFactor> axis_factors(const RectangleDomain& dom, const std::vector<FaceConditions>& faces) {
    if (faces.size() != dom.dims().size())
        throw ValidationError("box: one pair of face conditions per axis is required");
    std::vector<AxisFactor> out;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const double r = kPi / dom.dims()[i];
        AxisFactor f{r * r, 0.0, 0};
        if (faces[i].lo != faces[i].hi)
            f.shift = 0.5;
        else if (faces[i].lo == Boundary::Dirichlet)
            f.start = 1;
        out.push_back(f);
    }
    return out;
}

std::vector<FaceConditions> uniform_faces(const RectangleDomain& dom, Boundary bc) {
    return std::vector<FaceConditions>(dom.dims().size(), FaceConditions{bc, bc});
}

// Visits every partial-sum path; eigenvalue = ((t_0 + t_1) + …) in axis order.
void enumerate(const std::vector<AxisFactor>& axes, std::size_t axis, double partial, double cap,
               std::vector<double>& out) {
    const AxisFactor& f = axes[axis];
    for (long i = f.start;; ++i) {
        const double v = partial + f.term(i);
        if (!at_most(v, cap)) break;
        if (axis + 1 == axes.size())
            out.push_back(v);
        else
            enumerate(axes, axis + 1, v, cap, out);
    }
}

std::uint64_t count_paths(const std::vector<AxisFactor>& axes, std::size_t axis, double partial, double lambda) {
    const AxisFactor& f = axes[axis];
    if (axis + 1 == axes.size()) {
        auto fits = [&](long i) { return at_most(partial + f.term(i), lambda); };
        const double room = std::max(0.0, lambda - partial);
        long i = static_cast<long>(std::floor(std::sqrt(room / f.q) - f.shift));
        i = std::max(i, f.start - 1);
        while (fits(i + 1)) ++i;
        while (i >= f.start && !fits(i)) --i;
        return i >= f.start ? static_cast<std::uint64_t>(i - f.start + 1) : 0;
    }
    std::uint64_t total = 0;
    for (long i = f.start;; ++i) {
        const double v = partial + f.term(i);
        if (!at_most(v, lambda)) break;
        total += count_paths(axes, axis + 1, v, lambda);
    }
    return total;
}

void check_level(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError(std::string(what) + " must be finite and >= 0");
}

using boost::multiprecision::cpp_int;

cpp_int binomial_big(int n, int k) {
    if (k < 0 || k > n) return 0;
    cpp_int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::uint64_t to_u64(const cpp_int& v) {
    if (v > std::numeric_limits<std::uint64_t>::max())
        throw ComputationError("sphere count exceeds 64-bit range");
    return v.convert_to<std::uint64_t>();
}

cpp_int sphere_count_big(int n, int k) {
    if (k == 0) return 1;
    return binomial_big(n + k, k) + binomial_big(n + k - 1, k - 1);
}

} // namespace

RectangleDomain::RectangleDomain(std::vector<double> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidDomain("rectangle: at least one side length is required");
    for (double a : dims_)
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidDomain("rectangle: side lengths must be positive and finite");
}

double RectangleDomain::volume() const {
    double v = 1.0;
    for (double a : dims_) v *= a;
    return v;
}

double RectangleDomain::boundary_measure() const {
    if (dims_.size() == 1) return 2.0;
    double s = 0.0;
    for (std::size_t i = 0; i < dims_.size(); ++i) s += 2.0 * volume() / dims_[i];
    return s;
}

Spectrum box_spectrum(const RectangleDomain& dom, const std::vector<FaceConditions>& faces, double cap) {
    check_level(cap, "cap");
    const auto axes = axis_factors(dom, faces);
    std::vector<double> values;
    enumerate(axes, 0, 0.0, cap, values);
    std::sort(values.begin(), values.end());
    return Spectrum(std::move(values), CapComplete{cap});
}

std::uint64_t box_counting(const RectangleDomain& dom, const std::vector<FaceConditions>& faces, double lambda) {
    check_level(lambda, "lambda");
    return count_paths(axis_factors(dom, faces), 0, 0.0, lambda);
}

Spectrum rectangle_spectrum(const RectangleDomain& dom, Boundary bc, double cap) {
    return box_spectrum(dom, uniform_faces(dom, bc), cap);
}

std::uint64_t rectangle_counting(const RectangleDomain& dom, Boundary bc, double lambda) {
    return box_counting(dom, uniform_faces(dom, bc), lambda);
}

Spectrum rectangle_first(const RectangleDomain& dom, Boundary bc, std::size_t count) {
    if (count == 0) return Spectrum({}, CountComplete{0});
    double cap = codiagonal(dom) * codiagonal(dom);
    while (rectangle_counting(dom, bc, cap) < count) cap *= 2.0;
    std::vector<double> values = rectangle_spectrum(dom, bc, cap).values();
    values.resize(count);
    return Spectrum(std::move(values), CountComplete{count});
}

double codiagonal(const RectangleDomain& dom) {
    double s = 0.0;
    for (double a : dom.dims()) s += (kPi / a) * (kPi / a);
    return std::sqrt(s);
}

FlatTorus::FlatTorus(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
    if (basis_.rows() < 1 || basis_.rows() != basis_.cols())
        throw InvalidDomain("torus: basis must be a square matrix");
    if (!basis_.allFinite()) throw InvalidDomain("torus: basis entries must be finite");
    double scale = 1.0;
    for (Eigen::Index j = 0; j < basis_.cols(); ++j) scale *= basis_.col(j).norm();
    if (!(std::abs(basis_.determinant()) > 1e-14 * scale)) throw InvalidDomain("torus: singular lattice basis");
}

Eigen::MatrixXd FlatTorus::dual_basis() const {
    return 2.0 * kPi * basis_.inverse().transpose();
}

double FlatTorus::volume() const { return std::abs(basis_.determinant()); }

namespace {

// Visits (is_origin, |Bm|²) for every integer m with |m_i| ≤ K, where K bounds
// the coefficients of any vector of length ≤ sqrt(radius_sq).
void for_each_lattice_vector(const Eigen::MatrixXd& basis, double radius_sq,
                             const std::function<void(bool, double)>& visit) {
    const int n = static_cast<int>(basis.rows());
    const Eigen::MatrixXd inv = basis.inverse();
    const double op_norm = Eigen::JacobiSVD<Eigen::MatrixXd>(inv).singularValues()(0);
    const long k = static_cast<long>(std::ceil(op_norm * std::sqrt(radius_sq) * (1.0 + 1e-12)));
    Eigen::VectorXi m = Eigen::VectorXi::Constant(n, static_cast<int>(-k));
    for (;;) {
        const Eigen::VectorXd v = basis * m.cast<double>();
        visit(m.isZero(), v.squaredNorm());
        int i = 0;
        while (i < n && m(i) == k) m(i++) = static_cast<int>(-k);
        if (i == n) break;
        ++m(i);
    }
}

} // namespace

std::vector<double> lattice_squared_norms(const Eigen::MatrixXd& basis, double radius_sq) {
    check_level(radius_sq, "radius");
    std::vector<double> out;
    for_each_lattice_vector(basis, radius_sq, [&](bool origin, double sq) {
        if (origin)
            out.push_back(0.0);
        else if (at_most(sq, radius_sq))
            out.push_back(sq);
    });
    std::sort(out.begin(), out.end());
    return out;
}

Spectrum torus_spectrum(const FlatTorus& t, double cap) {
    check_level(cap, "cap");
    return Spectrum(lattice_squared_norms(t.dual_basis(), cap), CapComplete{cap});
}

double torus_systole(const FlatTorus& t) {
    double r_sq = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < t.basis().cols(); ++j) r_sq = std::min(r_sq, t.basis().col(j).squaredNorm());
    double best = r_sq;
    for_each_lattice_vector(t.basis(), r_sq, [&](bool origin, double sq) {
        if (!origin) best = std::min(best, sq);
    });
    return std::sqrt(best);
}

SphereDomain::SphereDomain(int n) : n_(n) {
    if (n < 1) throw InvalidDomain("sphere: dimension must be >= 1");
}

std::uint64_t sphere_multiplicity(int n, int k) {
    if (n < 1) throw InvalidDomain("sphere: dimension must be >= 1");
    if (k < 0) return 0;
    if (k == 0) return 1;
    if (k == 1) return static_cast<std::uint64_t>(n) + 1;
    return to_u64(binomial_big(n + k, k) - binomial_big(n + k - 2, k - 2));
}

int sphere_level(int n, double lambda) {
    check_level(lambda, "lambda");
    const double b = n - 1.0;
    auto value = [&](long k) { return static_cast<double>(k) * (static_cast<double>(k) + b); };
    long k = static_cast<long>(std::floor(0.5 * (-b + std::sqrt(b * b + 4.0 * lambda))));
    k = std::max(0L, k);
    while (at_most(value(k + 1), lambda)) ++k;
    while (k > 0 && !at_most(value(k), lambda)) --k;
    if (k > std::numeric_limits<int>::max()) throw ComputationError("sphere level out of range");
    return static_cast<int>(k);
}

std::uint64_t sphere_counting(const SphereDomain& s, double lambda) {
    return to_u64(sphere_count_big(s.dimension(), sphere_level(s.dimension(), lambda)));
}

Spectrum sphere_spectrum(const SphereDomain& s, double cap) {
    const int n = s.dimension();
    const int top = sphere_level(n, cap);
    const std::uint64_t total = sphere_counting(s, cap);
    if (total > 50'000'000ULL) throw ComputationError("sphere spectrum too large to materialize");
    std::vector<double> values;
    values.reserve(total);
    for (int k = 0; k <= top; ++k) {
        const double v = static_cast<double>(k) * (static_cast<double>(k) + n - 1);
        values.insert(values.end(), sphere_multiplicity(n, k), v);
    }
    return Spectrum(std::move(values), CapComplete{cap});
}

WeylFunction sphere_weyl(const SphereDomain& s) {
    return WeylFunction(s.dimension(), 2.0 / std::tgamma(s.dimension() + 1.0));
}

bool sphere_weyl_below_count(int n, int k) {
    if (n < 1) throw InvalidDomain("sphere: dimension must be >= 1");
    if (k < 0) throw ValidationError("sphere level must be >= 0");
    // (2/n!)·m^{n/2} < N  ⇔  4·m^n < (n!·N)², both sides nonnegative.
    const cpp_int m = cpp_int(k) * (k + n - 1);
    cpp_int fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    const cpp_int rhs = fact * sphere_count_big(n, k);
    return 4 * boost::multiprecision::pow(m, static_cast<unsigned>(n)) < rhs * rhs;
}

Spectrum merge_spectra(const std::vector<Spectrum>& parts) {
    if (parts.empty()) throw ValidationError("merge: no spectra given");
    double cap = std::numeric_limits<double>::infinity();
    for (const auto& p : parts) {
        if (!p.cap_complete()) throw ValidationError("merge: incompatible completeness modes (need cap-complete parts)");
        cap = std::min(cap, p.valid_up_to());
    }
    std::vector<double> values;
    for (const auto& p : parts)
        for (double v : p.values())
            if (at_most(v, cap)) values.push_back(v);
    std::sort(values.begin(), values.end());
    return Spectrum(std::move(values), CapComplete{cap});
}

} // namespace specwb
