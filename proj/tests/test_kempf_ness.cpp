#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"

using namespace hsq;
using namespace hsq::testing;

namespace {

Mat random_sl2c(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 0.7);
    Mat a(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return mat_exp(a - a.trace() / 2.0 * identity(2));
}

Mat random_su2_algebra(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat a(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    Mat x = (a - a.adjoint()) / 2.0;
    return x - x.trace() / 2.0 * identity(2);
}

// Central difference of rho along exp(-i t xi) * x for each u_h basis element.
RVec fd_moment(const SymmetricSpace& s, const PointX& x, double h) {
    const auto& uh = s.decomposition().u_h;
    RVec out(static_cast<Eigen::Index>(uh.size()));
    for (std::size_t j = 0; j < uh.size(); ++j) {
        Mat step = cplx(0, -h) * uh[j];
        double fp = rho(star_raw(s, mat_exp(step), x.mat), s.tol());
        double fm = rho(star_raw(s, mat_exp(-step), x.mat), s.tol());
        out(static_cast<Eigen::Index>(j)) = (fp - fm) / (2 * h);
    }
    return out;
}

Mat sym(double t) {
    Mat z(2, 2);
    z << 0, t, t, 0;
    return z;
}

}  // namespace

TEST(Nu, VanishesOnUnitary) {
    std::mt19937_64 rng(41);
    Tol tol;
    for (int k = 0; k < 10; ++k) {
        Mat u = mat_exp(random_su2_algebra(rng));
        EXPECT_NEAR(nu_xi(u, random_su2_algebra(rng), tol), 0.0, 1e-12);
    }
}

TEST(Nu, CommutingDiagonalPair) {
    Tol tol;
    Mat xi = diag2(cplx(0, 0.8), cplx(0, -0.8));
    Mat eta = diag2(cplx(0, 0.3), cplx(0, -0.3));
    const double want = trace_inner(xi, eta);
    EXPECT_NEAR(nu_xi(mat_exp(cplx(0, 1) * eta), xi, tol), want, 1e-14);
}

TEST(Nu, MatchesFiniteDifferenceOfRho) {
    std::mt19937_64 rng(42);
    Tol tol;
    const double h = 1e-6;
    for (int k = 0; k < 20; ++k) {
        Mat g = random_sl2c(rng);
        Mat xi = random_su2_algebra(rng);
        double fd = (rho(g * mat_exp(cplx(0, h) * xi), tol) - rho(g * mat_exp(cplx(0, -h) * xi), tol)) / (2 * h);
        EXPECT_NEAR(nu_xi(g, xi, tol), fd, 1e-6);
    }
}

TEST(Mu, ZeroAtIdentityAndOnTranslatedTorus) {
    const auto& s = space("sl2");
    EXPECT_LT(mu(s, make_point(s, identity(2))).norm_sq, 1e-30);
    for (double eta : {kPi / 2, 3 * kPi / 2})
        for (double t : {-1.5, 0.2, 0.9}) {
            Mat v = a0("sl2").element(vec({eta}));
            PointX x = make_point(s, mat_exp(sym(t)) * v);
            EXPECT_LT(std::sqrt(mu(s, x).norm_sq), 1e-12);
            EXPECT_TRUE(in_kempf_ness(s, x));
        }
}

TEST(Mu, MatchesFiniteDifferences) {
    std::mt19937_64 rng(43);
    for (const char* name : {"sl2", "sl8"}) {
        const auto& s = space(name);
        for (int k = 0; k < 10; ++k) {
            PointX x = random_point(s, rng, 0.4);
            RVec fd = fd_moment(s, x, 1e-6);
            RVec m = mu(s, x).coords;
            EXPECT_LT((m - fd).cwiseAbs().maxCoeff(), 1e-5) << name;
        }
    }
}

TEST(Mu, NormInvariantUnderCompactIsotropy) {
    std::mt19937_64 rng(44);
    for (const char* name : {"sl2", "sl8"}) {
        const auto& s = space(name);
        for (int k = 0; k < 10; ++k) {
            PointX x = random_point(s, rng, 0.4);
            Mat h = random_h_compact(s, rng);
            PointX y = star_action(s, h, x);
            EXPECT_NEAR(std::sqrt(mu(s, y).norm_sq), std::sqrt(mu(s, x).norm_sq), 10 * s.tol().eq * 100);
        }
    }
}

TEST(KempfNess, Sl2CoordinateDescription) {
    const auto& s = space("sl2");
    EXPECT_TRUE(in_kempf_ness(s, make_point(s, identity(2))));
    for (double z : {-2.0, -0.5, 0.0, 0.7, 2.5})
        for (double phi : {0.0, 0.6, kPi / 2, 2.0, kPi, 4.0}) {
            double r = std::sqrt(1 + z * z);
            double x = r * std::cos(phi), y = (phi == 0.0 || phi == kPi) ? 0.0 : r * std::sin(phi);
            PointX p = make_point(s, sl2_point(x, y, z));
            bool expect = std::abs(y) < 1e-7 || std::abs(z) < 1e-7;
            EXPECT_EQ(in_kempf_ness(s, p), expect) << x << " " << y << " " << z;
            EXPECT_EQ(std::sqrt(mu(s, p).norm_sq) < s.tol().mu, expect);
        }
}

TEST(KempfNess, AgreesWithMomentZeroOnSamples) {
    std::mt19937_64 rng(45);
    for (const char* name : {"sl2", "sl8"}) {
        const auto& s = space(name);
        const TorusChart& a = a0(name);
        const RMat& r0 = s.decomposition().r0;
        int n = 0;
        for (int k = 0; k < 60; ++k) {
            PointX x = random_point(s, rng, 0.5);
            EXPECT_EQ(in_kempf_ness(s, x), std::sqrt(mu(s, x).norm_sq) < s.tol().mu);
            // Points of M: exp(xi) u with xi in S_u ∩ r0.
            Mat u = a.element(random_angles(rng, a.rank()));
            RMat sr = intersect(slice_space(s, u), r0, s.tol().rank);
            if (sr.cols() == 0) continue;
            Mat m = mat_exp(s.algebra().to_mat(RVec(sr * gaussian(rng, static_cast<int>(sr.cols()), 0.5)))) * u;
            PointX pm = make_point(s, m);
            EXPECT_TRUE(in_kempf_ness(s, pm));
            EXPECT_LT(fro(lambda_projection(pm) - u), 1e-9);
            ++n;
        }
        (void)n;
    }
}

TEST(Flow, AlreadyInKempfNess) {
    const auto& s = space("sl2");
    FlowTrace t = gradient_flow(s, make_point(s, identity(2)), FlowOptions{});
    EXPECT_TRUE(t.converged);
    EXPECT_EQ(t.iterations, 0);
    EXPECT_EQ(t.status, FlowStatus::Converged);
}

TEST(Flow, Sl2BranchPointWithSameX) {
    const auto& s = space("sl2");
    for (double c : {-0.6, 0.0, 0.5}) {
        for (double z0 : {-1.5, 0.8}) {
            double y0 = std::sqrt(1 + z0 * z0 - c * c);
            FlowTrace t = gradient_flow(s, make_point(s, sl2_point(c, y0, z0)), FlowOptions{});
            RVec lim = sl2_coords(t.last.mat);
            EXPECT_TRUE(t.converged);
            EXPECT_LT(t.residual, 1e-7);
            EXPECT_LT(std::abs(lim(2)), 1e-5);
            EXPECT_NEAR(lim(0), c, 1e-9);
        }
    }
}

TEST(Flow, NormNonIncreasing) {
    std::mt19937_64 rng(46);
    for (const char* name : {"sl2", "sl8"}) {
        const auto& s = space(name);
        FlowOptions fo;
        fo.max_iters = 200;
        for (int k = 0; k < 3; ++k) {
            FlowTrace t = gradient_flow(s, random_point(s, rng, 0.4), fo);
            for (std::size_t i = 1; i < t.iterates.size(); ++i) EXPECT_LE(t.iterates[i].norm_sq, t.iterates[i - 1].norm_sq);
        }
    }
}

TEST(Closed, BranchPointsAndNonClosedOrbits) {
    const auto& s = space("sl2");
    FlowOptions fo;
    EXPECT_TRUE(is_orbit_closed(s, make_point(s, sl2_point(0.3, std::sqrt(1 - 0.09), 0.0)), fo).closed);
    for (double v : {0.5, 1.0, 2.0}) {
        ClosedOrbitResult r = is_orbit_closed(s, make_point(s, sl2_point(1.0, v, v)), fo);
        EXPECT_FALSE(r.closed);
        RVec lim = sl2_coords(r.representative.mat);
        EXPECT_NEAR(lim(0), 1.0, 1e-6);
        // Heads for (1, 0, 0), which lies outside the orbit.
        EXPECT_LT(std::abs(lim(1)) + std::abs(lim(2)), 2 * v * 1e-2);
    }
}

TEST(Closed, ClosedOrbitAwayFromKempfNess) {
    const auto& s = space("sl2");
    EXPECT_TRUE(is_orbit_closed(s, make_point(s, sl2_point(0.5, std::sqrt(1.75), 1.0)), FlowOptions{}).closed);
}

TEST(Closed, OrbitDimensionDropsOnTheBoundary) {
    // The orbit of (1, s, s) is a half-line whose closure adds the fixed point (1, 0, 0).
    const auto& s = space("sl2");
    EXPECT_EQ(orbit_dimension(s, sl2_point(1.0, 0.5, 0.5), 1e-4), 1);
    EXPECT_EQ(orbit_dimension(s, sl2_point(1.0, 0.0, 0.0), 1e-4), 0);
    EXPECT_EQ(orbit_dimension(s, sl2_point(0.5, std::sqrt(1.75), 1.0), 1e-4), 1);
}

TEST(Closed, InconclusiveWhenIterationsRunOut) {
    const auto& s = space("sl2");
    FlowOptions fo;
    fo.max_iters = 1;
    try {
        is_orbit_closed(s, make_point(s, sl2_point(0.5, std::sqrt(1.75), 1.0)), fo);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Inconclusive);
    }
}

TEST(SliceWeights, PlusMinusTwoAtV) {
    const auto& s = space("sl2");
    for (double eta : {kPi / 2, 3 * kPi / 2}) {
        SliceWeights w = slice_rep_weights(s, make_point(s, a0("sl2").element(vec({eta}))));
        ASSERT_EQ(w.weights.size(), 2u);
        std::vector<double> vals = {w.weights[0].value.real(), w.weights[1].value.real()};
        std::sort(vals.begin(), vals.end());
        EXPECT_NEAR(vals[0], -2.0, 1e-9);
        EXPECT_NEAR(vals[1], 2.0, 1e-9);
    }
    EXPECT_TRUE(slice_rep_weights(s, make_point(s, a0("sl2").element(vec({0.5})))).weights.empty());
}
