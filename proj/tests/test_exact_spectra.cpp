#include "oracles.hpp"

#include "specwb/counting.hpp"
#include "specwb/errors.hpp"
#include "specwb/exact_spectra.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace specwb;
using oracle::kPi;

namespace {

const auto D = Boundary::Dirichlet;
const auto N = Boundary::Neumann;

void expect_values(const std::vector<double>& got, const std::vector<double>& want) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12 * (1.0 + want[i])) << i;
}

} // namespace

TEST(RectangleSpectrum, UnitSquareDirichletCap20) {
    expect_values(rectangle_spectrum(RectangleDomain({1, 1}), D, 20).values(), {2 * kPi * kPi});
}

TEST(RectangleSpectrum, UnitSquareNeumannCap10) {
    expect_values(rectangle_spectrum(RectangleDomain({1, 1}), N, 10).values(), {0, kPi * kPi, kPi * kPi});
}

TEST(RectangleSpectrum, TwoByThreeDirichletCap5) {
    // Oracle: only (1,1) has (mπ/2)² + (nπ/3)² ≤ 5.
    const auto s = rectangle_spectrum(RectangleDomain({2, 3}), D, 5);
    expect_values(s.values(), oracle::rect_eigs({2, 3}, true, 5));
    expect_values(s.values(), {3.5640238115044904});
    EXPECT_TRUE(s.cap_complete());
    EXPECT_DOUBLE_EQ(s.valid_up_to(), 5.0);
}

TEST(RectangleSpectrum, RejectsBadDomainAndCap) {
    EXPECT_THROW(RectangleDomain({1, 0}), InvalidDomain);
    EXPECT_THROW(RectangleDomain({-1}), InvalidDomain);
    EXPECT_THROW(RectangleDomain({}), InvalidDomain);
    EXPECT_THROW(rectangle_spectrum(RectangleDomain({1}), D, -1), ValidationError);
    EXPECT_THROW(rectangle_counting(RectangleDomain({1}), D, std::nan("")), ValidationError);
}

TEST(RectangleCounting, TrivialValues) {
    EXPECT_EQ(rectangle_counting(RectangleDomain({1, 1}), N, 0.0), 1u);
    EXPECT_EQ(rectangle_counting(RectangleDomain({1, 1}), D, 2 * kPi * kPi), 1u);
    EXPECT_EQ(rectangle_counting(RectangleDomain({1, 1}), D, 2 * kPi * kPi * (1 - 1e-9)), 0u);
}

TEST(RectangleCounting, TenSquareAtFiftyMatchesFrozenOracle) {
    const RectangleDomain sq({10, 10});
    EXPECT_EQ(oracle::rect_count({10, 10}, true, 50), 377u);
    EXPECT_EQ(oracle::rect_count({10, 10}, false, 50), 422u);
    EXPECT_EQ(rectangle_counting(sq, D, 50), 377u);
    EXPECT_EQ(rectangle_counting(sq, N, 50), 422u);
}

TEST(RectangleCounting, AgreesWithSpectrumAndOracleOnGrid) {
    oracle::Lcg rng{11};
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        std::vector<double> dims;
        for (int j = 0; j < n; ++j) dims.push_back(rng.in(0.3, 3.0));
        const RectangleDomain dom(dims);
        for (Boundary bc : {D, N}) {
            const auto spec = rectangle_spectrum(dom, bc, 200);
            const CountingFunction cf(spec);
            for (int i = 0; i < 10; ++i) {
                const double x = rng.in(0.0, 200.0);
                const auto c = rectangle_counting(dom, bc, x);
                EXPECT_EQ(c, oracle::rect_count(dims, bc == D, x));
                EXPECT_EQ(c, cf(x));
                EXPECT_EQ(c, rectangle_spectrum(dom, bc, x).size());
            }
        }
    }
}

TEST(RectangleCounting, MonotoneAndRightContinuousAtEigenvalues) {
    const RectangleDomain dom({1, 2});
    const auto spec = rectangle_spectrum(dom, N, 300);
    std::uint64_t prev = 0;
    for (double x = 0; x <= 300; x += 0.37) {
        const auto c = rectangle_counting(dom, N, x);
        EXPECT_GE(c, prev);
        prev = c;
    }
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double lam = spec[k];
        std::uint64_t mult = 0;
        for (double v : spec.values())
            if (std::abs(v - lam) <= 1e-12 * (1 + lam)) ++mult;
        const double below = lam - 1e-7;
        if (below < 0) continue;
        EXPECT_EQ(rectangle_counting(dom, N, lam), rectangle_counting(dom, N, below) + mult);
    }
}

TEST(RectangleCounting, ScalingInvariance) {
    const std::vector<double> dims{1.3, 0.7};
    const double s = 2.5;
    const RectangleDomain a(dims), b({s * dims[0], s * dims[1]});
    for (Boundary bc : {D, N}) {
        const auto sa = rectangle_spectrum(a, bc, 400);
        const auto sb = rectangle_spectrum(b, bc, 400 / (s * s));
        ASSERT_EQ(sa.size(), sb.size());
        for (std::size_t k = 0; k < sa.size(); ++k) EXPECT_NEAR(sb[k], sa[k] / (s * s), 1e-12 * sa[k]);
        for (double x : {3.0, 50.0, 123.4, 399.0})
            EXPECT_EQ(rectangle_counting(a, bc, x), rectangle_counting(b, bc, x / (s * s)));
    }
}

TEST(RectangleSpectrum, NeumannBelowDirichletIndexwise) {
    oracle::Lcg rng{5};
    for (int trial = 0; trial < 10; ++trial) {
        const RectangleDomain dom({rng.in(0.5, 4), rng.in(0.5, 4), rng.in(0.5, 4)});
        const auto d = rectangle_first(dom, D, 200);
        const auto n = rectangle_first(dom, N, 200);
        for (std::size_t k = 0; k < 200; ++k) EXPECT_LE(n[k], d[k]);
    }
}

TEST(RectangleFirst, CountCompletePrefix) {
    const RectangleDomain dom({10, 10});
    const auto s = rectangle_first(dom, D, 1000);
    EXPECT_EQ(s.size(), 1000u);
    EXPECT_FALSE(s.cap_complete());
    const auto full = oracle::rect_eigs({10, 10}, true, s[999]);
    for (std::size_t k = 0; k < 1000; ++k) EXPECT_NEAR(s[k], full[k], 1e-12 * full[k]);
}

TEST(BoxSpectrum, MixedFacesAreHalfIntegerModes) {
    const RectangleDomain seg({2.0});
    const auto s = box_spectrum(seg, {{D, N}}, 20);
    // ((i + 1/2)π/2)², i ≥ 0.
    std::vector<double> want;
    for (int i = 0;; ++i) {
        const double v = std::pow((i + 0.5) * kPi / 2, 2);
        if (v > 20) break;
        want.push_back(v);
    }
    expect_values(s.values(), want);
    EXPECT_EQ(box_counting(seg, {{N, D}}, 20), want.size());
    EXPECT_THROW(box_spectrum(seg, {{D, N}, {D, N}}, 1), ValidationError);
}

TEST(Codiagonal, Examples) {
    EXPECT_NEAR(codiagonal(RectangleDomain({1})), kPi, 1e-15);
    const double eps = 0.3;
    EXPECT_NEAR(codiagonal(RectangleDomain({eps, eps, eps})), kPi * std::sqrt(3.0) / eps, 1e-12);
    EXPECT_NEAR(codiagonal(RectangleDomain({2, 3})), kPi * std::sqrt(13.0) / 6, 1e-15);
    EXPECT_NEAR(codiagonal(RectangleDomain({2, 3})), 1.8879, 1e-4);
}

TEST(Codiagonal, SquaredEqualsFirstDirichletEigenvalue) {
    oracle::Lcg rng{3};
    for (int i = 0; i < 20; ++i) {
        const RectangleDomain dom({rng.in(0.2, 5), rng.in(0.2, 5)});
        EXPECT_NEAR(std::pow(codiagonal(dom), 2), rectangle_first(dom, D, 1)[0], 1e-12 * std::pow(codiagonal(dom), 2));
    }
}

TEST(TorusSpectrum, IdentityCap40) {
    const auto s = torus_spectrum(FlatTorus(Eigen::MatrixXd::Identity(2, 2)), 40);
    const double f = 4 * kPi * kPi;
    expect_values(s.values(), {0, f, f, f, f});
}

TEST(TorusSpectrum, Diag12Cap11) {
    Eigen::MatrixXd b(2, 2);
    b << 1, 0, 0, 2;
    expect_values(torus_spectrum(FlatTorus(b), 11).values(), {0, kPi * kPi, kPi * kPi});
}

TEST(TorusSpectrum, DilationScalesEigenvalues) {
    Eigen::MatrixXd b(2, 2);
    b << 1, 0.3, 0, 0.8;
    const double s = 1.7;
    const auto a = torus_spectrum(FlatTorus(b), 500);
    const auto c = torus_spectrum(FlatTorus(s * b), 500 / (s * s));
    ASSERT_EQ(a.size(), c.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(c[k], a[k] / (s * s), 1e-10 * (1 + a[k]));
}

TEST(TorusSpectrum, IntegerLatticeMatchesBruteForce) {
    for (int n = 1; n <= 3; ++n) {
        const double cap = 4 * kPi * kPi * 6.5;
        const auto s = torus_spectrum(FlatTorus(Eigen::MatrixXd::Identity(n, n)), cap);
        const auto want = oracle::lattice_norms_box(2 * kPi * Eigen::MatrixXd::Identity(n, n), 4, cap);
        expect_values(s.values(), want);
    }
}

TEST(TorusSpectrum, SkewLatticeMatchesBruteForce) {
    Eigen::MatrixXd b(3, 3);
    b << 1, 0.4, 0.2, 0, 0.9, -0.3, 0, 0, 1.2;
    const FlatTorus t(b);
    const double cap = 150;
    const auto s = torus_spectrum(t, cap);
    expect_values(s.values(), oracle::lattice_norms_box(t.dual_basis(), 12, cap));
}

TEST(TorusSpectrum, SingularBasisRejected) {
    Eigen::MatrixXd b(2, 2);
    b << 1, 2, 2, 4;
    EXPECT_THROW(FlatTorus{b}, ValidationError);
}

TEST(TorusSystole, Examples) {
    EXPECT_NEAR(torus_systole(FlatTorus(Eigen::MatrixXd::Identity(2, 2))), 1.0, 1e-14);
    EXPECT_NEAR(torus_systole(FlatTorus(0.01 * Eigen::MatrixXd::Identity(2, 2))), 0.01, 1e-16);
    Eigen::MatrixXd hex(2, 2);
    hex << 1, 0.5, 0, std::sqrt(3.0) / 2;
    const auto brute = oracle::lattice_norms_box(hex, 3, 10);
    EXPECT_NEAR(std::sqrt(brute[1]), 1.0, 1e-14);
    EXPECT_NEAR(torus_systole(FlatTorus(hex)), 1.0, 1e-14);
}

TEST(TorusSystole, ReducedBasisNotNeeded) {
    // Long basis of Z²: shortest vector is still length 1.
    Eigen::MatrixXd b(2, 2);
    b << 1, 7, 0, 1;
    EXPECT_NEAR(torus_systole(FlatTorus(b)), 1.0, 1e-12);
}

TEST(SphereCounting, Examples) {
    EXPECT_EQ(sphere_counting(SphereDomain(2), 2), 4u);
    EXPECT_EQ(sphere_counting(SphereDomain(2), 6), 9u);
    for (int n = 1; n <= 12; ++n) EXPECT_EQ(sphere_counting(SphereDomain(n), 0), 1u);
    EXPECT_THROW(SphereDomain(0), InvalidDomain);
}

TEST(SphereCounting, MatchesMultiplicitySum) {
    for (int n = 1; n <= 10; ++n)
        for (int k = 0; k <= 30; ++k) {
            const double lam = static_cast<double>(k) * (k + n - 1);
            EXPECT_EQ(sphere_counting(SphereDomain(n), lam), oracle::sphere_count_sum(n, k)) << n << ' ' << k;
            EXPECT_EQ(sphere_multiplicity(n, k), oracle::sphere_mult(n, k));
            if (k > 0) EXPECT_EQ(sphere_counting(SphereDomain(n), lam - 0.5), oracle::sphere_count_sum(n, k - 1));
        }
}

TEST(SphereSpectrum, MultiplicitiesInList) {
    const auto s = sphere_spectrum(SphereDomain(2), 12);
    expect_values(s.values(), {0, 2, 2, 2, 6, 6, 6, 6, 6, 12, 12, 12, 12, 12, 12, 12});
}

TEST(SphereWeyl, Examples) {
    const auto w2 = sphere_weyl(SphereDomain(2));
    EXPECT_DOUBLE_EQ(w2(2), 2.0);
    const auto w1 = sphere_weyl(SphereDomain(1));
    EXPECT_NEAR(w1(9), 6.0, 1e-14);
    for (int n = 1; n <= 6; ++n) EXPECT_EQ(sphere_weyl(SphereDomain(n))(0), 0.0);
}

TEST(MergeSpectra, Examples) {
    const Spectrum a({0, 1}, CapComplete{2});
    const Spectrum b({0.5}, CapComplete{3});
    const auto m = merge_spectra({a, b});
    expect_values(m.values(), {0, 0.5, 1});
    EXPECT_DOUBLE_EQ(m.valid_up_to(), 2.0);
    const auto same = merge_spectra({a, Spectrum({}, CapComplete{5})});
    expect_values(same.values(), a.values());
    EXPECT_THROW(merge_spectra({a, Spectrum({1}, CountComplete{1})}), ValidationError);
    EXPECT_THROW(merge_spectra({}), ValidationError);
}

TEST(MergeSpectra, DirichletHalvesOfInterval) {
    const double cap = 200;
    const auto whole = rectangle_spectrum(RectangleDomain({1.0}), D, cap);
    const auto half = rectangle_spectrum(RectangleDomain({0.5}), D, cap);
    const auto merged = merge_spectra({half, half});
    EXPECT_NEAR(merged[0], 4 * kPi * kPi, 1e-12);
    EXPECT_NEAR(whole[0], kPi * kPi, 1e-12);
    for (std::size_t k = 0; k < merged.size(); ++k) EXPECT_GE(merged[k], whole[k]);
}
