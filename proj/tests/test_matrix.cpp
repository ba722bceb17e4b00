#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"

using namespace hsq;
using namespace hsq::testing;

namespace {

Mat random_hermitian(std::mt19937_64& rng, int n, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return (a + a.adjoint()) / 2.0;
}

Mat random_sl2c(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat a(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return a / std::sqrt(a.determinant());
}

}  // namespace

TEST(MatExp, ZeroIsIdentity) {
    Mat z = Mat::Zero(3, 3);
    EXPECT_EQ(mat_exp(z), identity(3));
}

TEST(MatExp, HyperbolicRotation) {
    const double t = 0.7;
    Mat want(2, 2);
    want << std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t);
    Mat x(2, 2);
    x << 0, t, t, 0;
    EXPECT_LT(fro(mat_exp(x) - want), 1e-14);
}

TEST(MatExp, RoundTripThroughLog) {
    std::mt19937_64 rng(11);
    Tol tol;
    for (int k = 0; k < 20; ++k) {
        Mat h = random_hermitian(rng, 4, 0.6);
        Mat e = mat_exp(h);
        EXPECT_LT(fro(mat_exp(mat_log_principal(e, tol)) - e), 10 * tol.eq * std::max(1.0, fro(e)));
    }
}

TEST(MatLog, IdentityAndDiagonal) {
    Tol tol;
    EXPECT_LT(fro(mat_log_principal(identity(3), tol)), 1e-15);
    Mat d = diag2(std::exp(1.0), std::exp(-1.0));
    EXPECT_LT(fro(mat_log_principal(d, tol) - diag2(1.0, -1.0)), 1e-14);
}

TEST(MatLog, RecoversHermitianLogarithm) {
    std::mt19937_64 rng(12);
    Tol tol;
    for (int k = 0; k < 20; ++k) {
        Mat h = random_hermitian(rng, 3, 0.8);
        EXPECT_LT(fro(mat_log_principal(mat_exp(h), tol) - h), 10 * tol.eq);
    }
}

TEST(MatLog, RejectsIndefinite) {
    Tol tol;
    try {
        mat_log_principal(diag2(1.0, -1.0), tol);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
    }
    Mat nh(2, 2);
    nh << 1, 1, 0, 1;
    EXPECT_THROW(mat_log_principal(nh, tol), Error);
}

TEST(Polar, IdentityAndDiagonal) {
    Tol tol;
    Polar p = polar_decompose(identity(2), PolarSide::Right, tol);
    EXPECT_LT(fro(p.unitary - identity(2)), 1e-15);
    EXPECT_LT(fro(p.herm_log), 1e-15);
    Polar q = polar_decompose(diag2(2.0, 0.5), PolarSide::Right, tol);
    EXPECT_LT(fro(q.unitary - identity(2)), 1e-14);
    EXPECT_LT(fro(q.herm_log - diag2(std::log(2.0), -std::log(2.0))), 1e-14);
}

TEST(Polar, RecomposesRandomSl2c) {
    std::mt19937_64 rng(13);
    Tol tol;
    for (int k = 0; k < 50; ++k) {
        Mat g = random_sl2c(rng);
        Polar r = polar_decompose(g, PolarSide::Right, tol);
        Polar l = polar_decompose(g, PolarSide::Left, tol);
        const double sc = std::max(1.0, fro(g));
        EXPECT_LT(fro(r.unitary * mat_exp(r.herm_log) - g), 10 * tol.eq * sc);
        EXPECT_LT(fro(mat_exp(l.herm_log) * l.unitary - g), 10 * tol.eq * sc);
        EXPECT_LT(fro(r.unitary.adjoint() * r.unitary - identity(2)), 10 * tol.eq);
        EXPECT_LT(fro(r.herm_log - r.herm_log.adjoint()), 10 * tol.eq);
    }
}

TEST(Polar, IllConditionedWithinBound) {
    Tol tol;
    Mat g = diag2(1e3, 1e-3);
    g(0, 1) = 5.0;
    Polar r = polar_decompose(g, PolarSide::Right, tol);
    EXPECT_LT(fro(r.unitary * mat_exp(r.herm_log) - g), 10 * tol.eq * fro(g));
}

TEST(Polar, SingularThrows) {
    Tol tol;
    Mat g(2, 2);
    g << 1, 2, 2, 4;
    try {
        polar_decompose(g, PolarSide::Right, tol);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Singular);
    }
}

TEST(Nullspace, ZeroMapAndIdentity) {
    RMat z = RMat::Zero(3, 3);
    RMat k = nullspace(z, 1e-7);
    ASSERT_EQ(k.cols(), 3);
    EXPECT_LT((k.transpose() * k - RMat::Identity(3, 3)).norm(), 1e-12);
    EXPECT_EQ(nullspace(RMat::Identity(3, 3), 1e-7).cols(), 0);
}

TEST(Nullspace, ThetaFixedPartOfSl2) {
    const auto& s = space("sl2");
    Mat want(2, 2);
    want << 0, 1, 1, 0;
    RMat k = nullspace(s.theta_map() - RMat::Identity(s.dim(), s.dim()), s.tol().rank);
    ASSERT_EQ(k.cols(), 1);
    Mat got = s.algebra().to_mat(RVec(k.col(0)));
    double scale = got(0, 1).real();
    EXPECT_LT(fro(got / scale - want), 1e-12);
}

TEST(Nullspace, OrthonormalAndAnnihilated) {
    std::mt19937_64 rng(14);
    for (int k = 0; k < 20; ++k) {
        RMat a = RMat::Zero(5, 7);
        for (int r = 0; r < 3; ++r) a += gaussian(rng, 5) * gaussian(rng, 7).transpose();
        RMat n = nullspace(a, 1e-7);
        ASSERT_EQ(n.cols(), 4);
        EXPECT_LT((n.transpose() * n - RMat::Identity(4, 4)).norm(), 1e-9);
        EXPECT_LT((a * n).norm(), 1e-7 * a.norm());
    }
}

TEST(InnerProduct, PositiveAndBasisChecked) {
    const auto& s = space("sl2");
    std::mt19937_64 rng(15);
    for (int k = 0; k < 10; ++k) {
        AlgVec v = s.algebra().vec(gaussian(rng, s.dim()));
        EXPECT_GT(inner_product(v, v), 0.0);
    }
    AlgVec a = space("sl2").algebra().vec(RVec::Ones(space("sl2").dim()));
    AlgVec b = space("sl8").algebra().vec(RVec::Ones(space("sl8").dim()));
    try {
        inner_product(a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BasisMismatch);
    }
}

TEST(InnerProduct, InvariantUnderSigmaAndUnitaryConjugation) {
    const auto& s = space("sl2");
    std::mt19937_64 rng(16);
    for (int k = 0; k < 20; ++k) {
        Mat x = s.algebra().to_mat(gaussian(rng, s.dim()));
        Mat y = s.algebra().to_mat(gaussian(rng, s.dim()));
        EXPECT_NEAR(trace_inner(s.sigma_alg(x), s.sigma_alg(y)), trace_inner(x, y), 10 * s.tol().eq);
        Mat u = mat_exp(random_hermitian(rng, 2, 1.0) * cplx(0, 1));
        u /= std::sqrt(u.determinant());
        EXPECT_NEAR(trace_inner(u * x * u.adjoint(), u * y * u.adjoint()), trace_inner(x, y), 10 * s.tol().eq);
    }
}

TEST(InnerProduct, InvariantUnderInvolutionsOnAllFixtures) {
    for (const char* name : {"sl2", "sl8"}) {
        const auto& s = space(name);
        std::mt19937_64 rng(17);
        for (int k = 0; k < 10; ++k) {
            RVec x = gaussian(rng, s.dim()), y = gaussian(rng, s.dim());
            for (const RMat* m : {&s.sigma_map(), &s.theta_map(), &s.delta_map()})
                EXPECT_NEAR(((*m) * x).dot((*m) * y), x.dot(y), 10 * s.tol().eq * x.norm() * y.norm());
        }
    }
}

TEST(Adjoint, IdentityWeightVectorAndRoundTrip) {
    const auto& s = space("sl2");
    Mat e12 = Mat::Zero(2, 2);
    e12(0, 1) = 1.0;
    AlgVec x = s.algebra().coords(e12, s.tol());
    EXPECT_LT((adjoint(s.algebra(), identity(2), x, s.tol()).coords - x.coords).norm(), 1e-14);
    const double lam = 1.7;
    AlgVec y = adjoint(s.algebra(), diag2(lam, 1 / lam), x, s.tol());
    EXPECT_LT(fro(s.algebra().to_mat(y) - lam * lam * e12), 1e-13);
    std::mt19937_64 rng(18);
    for (int k = 0; k < 10; ++k) {
        Mat g = random_group(s, rng);
        AlgVec z = s.algebra().vec(gaussian(rng, s.dim()));
        AlgVec back = adjoint(s.algebra(), g, adjoint(s.algebra(), inverse(g, s.tol()), z, s.tol()), s.tol());
        EXPECT_LT((back.coords - z.coords).norm(), 1e-10);
    }
}

TEST(AlgebraBasis, RejectsOutsideElement) {
    const auto& s = space("sl2");
    try {
        s.algebra().coords(identity(2), s.tol());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotInAlgebra);
    }
}

TEST(Tolerances, Validation) {
    EXPECT_NO_THROW(check_tol(Tol{}));
    EXPECT_THROW(check_tol(Tol{0.0, 1e-7, 1e-7}), Error);
    EXPECT_THROW(check_tol(Tol{1e-9, 1e-12, 1e-7}), Error);
    EXPECT_THROW(check_tol(Tol{1e-9, 1e-7, -1.0}), Error);
}
