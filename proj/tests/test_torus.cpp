#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"

using namespace hsq;
using namespace hsq::testing;

using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

TEST(Lattice, HermiteNormalForm) {
    IMat a(3, 2);
    a << 2, 4, 6, 3, 4, 8;
    Hnf r = hermite_normal_form(a);
    IMat prod = r.t * a;
    ASSERT_EQ(r.rank, 2);
    ASSERT_EQ(r.h.rows(), 2);
    EXPECT_TRUE(prod.topRows(2) == r.h);
    EXPECT_EQ(prod(2, 0), 0);
    EXPECT_EQ(prod(2, 1), 0);
    EXPECT_EQ(std::llabs(static_cast<long long>(std::llround(r.t.cast<double>().determinant()))), 1);
    EXPECT_EQ(r.h(1, 0), 0);
    EXPECT_GT(r.h(0, 0), 0);
    EXPECT_GT(r.h(1, 1), 0);
}

TEST(Lattice, Rationalize) {
    auto q = rationalize(0.75, 60, 1e-8);
    ASSERT_TRUE(q);
    EXPECT_EQ(q->first, 3);
    EXPECT_EQ(q->second, 4);
    auto n = rationalize(-2.0 / 7.0, 60, 1e-8);
    ASSERT_TRUE(n);
    EXPECT_EQ(n->first, -2);
    EXPECT_EQ(n->second, 7);
    EXPECT_FALSE(rationalize(kPi, 60, 1e-8));
}

TEST(Lattice, RescalesToPeriodTwoPi) {
    Mat x = Mat::Zero(2, 2);
    x(0, 1) = 2.0;
    x(1, 0) = -2.0;
    auto b = torus_lattice_basis({x}, 1e-9);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_LT(fro(mat_exp(2 * kPi * b[0]) - identity(2)), 1e-12);
    EXPECT_GT(fro(mat_exp(kPi * b[0]) - identity(2)), 1.0);
}

TEST(Lattice, IrrationalLineIsNotClosed) {
    Mat x = Mat::Zero(4, 4);
    x(0, 0) = cplx(0, 1);
    x(1, 1) = cplx(0, -1);
    x(2, 2) = cplx(0, std::sqrt(2.0));
    x(3, 3) = cplx(0, -std::sqrt(2.0));
    try {
        torus_lattice_basis({x}, 1e-9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotClosed);
    }
}

TEST(Coords, LogInvertsChart) {
    std::mt19937_64 rng(51);
    for (const char* name : {"sl2", "sl8"}) {
        const TorusChart& a = a0(name);
        TorusCoords tc(a, 1e-9);
        for (int k = 0; k < 20; ++k) {
            RVec eta = random_angles(rng, a.rank());
            auto back = tc.log(a.element(eta), 1e-8);
            ASSERT_TRUE(back);
            EXPECT_LT(angle_distance(*back, eta), 1e-9);
        }
        EXPECT_FALSE(tc.log(mat_exp(space(name).algebra().to_mat(RVec(space(name).decomposition().r0.col(0)))), 1e-8));
    }
}

TEST(Chart, FixtureToriPassChecks) {
    for (const char* name : {"sl2", "sl8"}) {
        ChartCheck c = check_chart(space(name), a0(name));
        EXPECT_TRUE(c.ok) << c.detail;
    }
    EXPECT_EQ(a0("sl8").rank(), 2);
    EXPECT_EQ(a0("sl8").compact_dim(), 2);
}

TEST(Chart, MaxSplitTorusSl2) {
    const auto& s = space("sl2");
    TorusChart e = max_split_torus(s, identity(2), 1);
    EXPECT_EQ(e.compact_dim(), 1);
    EXPECT_EQ(e.split_dim(), 0);
    Mat j(2, 2);
    j << 0, 1, -1, 0;
    EXPECT_LT(subspace_distance(column_span(s.algebra().project(e.mats[0]), 1e-9), column_span(s.algebra().project(j), 1e-9)), 1e-9);
    TorusChart v = max_split_torus(s, a0("sl2").element(vec({kPi / 2})), 1);
    EXPECT_EQ(v.compact_dim(), 0);
    ASSERT_EQ(v.split_dim(), 1);
    Mat k(2, 2);
    k << 0, 1, 1, 0;
    EXPECT_LT(subspace_distance(column_span(s.algebra().project(v.mats[0]), 1e-9), column_span(s.algebra().project(k), 1e-9)), 1e-9);
    EXPECT_TRUE(check_chart(s, v).ok);
}

TEST(Chart, MaxSplitTorusSl8) {
    // At e the split directions already give a torus of full rank 2.
    TorusChart e = max_split_torus(space("sl8"), identity(8), 1);
    EXPECT_EQ(e.split_dim(), 2);
    EXPECT_EQ(e.compact_dim(), 0);
    EXPECT_EQ(e.rank(), a0("sl8").rank());
}

TEST(Weyl, Sl2Trivial) {
    const auto& s = space("sl2");
    WeylGroupTable w = weyl_generate(s, a0("sl2"), fixture("sl2").candidates.weyl, WeylOptions{});
    EXPECT_TRUE(w.rejected.empty());
    for (const auto& e : w.elements) EXPECT_TRUE(e.action.is_identity(1e-9));
    EXPECT_EQ(w.order(), 1);
}

TEST(Weyl, Sl2ComplexifiedReflection) {
    const auto& s = space("sl2");
    WeylGroupTable w = weyl_generate(s, a0("sl2"), fixture("sl2").candidates.weyl_complexified, WeylOptions{});
    ASSERT_EQ(w.order(), 2);
    const ChartAction& g = w.elements[1].action;
    for (double eta : {0.1, 1.0, 3.0}) EXPECT_LT(angle_distance(g.apply(vec({eta})), vec({kPi - eta})), 1e-12);
    // On matrices: [[a, b], [-b, a]] goes to [[-a, b], [-b, -a]].
    const Mat& h = w.elements[1].rep;
    Mat u = a0("sl2").element(vec({0.4}));
    Mat img = star_raw(s, h, u);
    EXPECT_NEAR(img(0, 0).real(), -u(0, 0).real(), 1e-12);
    EXPECT_NEAR(img(0, 1).real(), u(0, 1).real(), 1e-12);
}

TEST(Weyl, Sl8OrderAndStructure) {
    const auto& s = space("sl8");
    WeylGroupTable w = weyl_generate(s, a0("sl8"), fixture("sl8").candidates.weyl, WeylOptions{});
    ASSERT_EQ(w.order(), 32);
    EXPECT_TRUE(w.closed);
    int translations = 0;
    for (const auto& e : w.elements) translations += e.action.is_translation(1e-9) ? 1 : 0;
    EXPECT_EQ(translations, 4);
    // Group axioms at the chart level.
    for (const auto& a : w.elements) {
        bool has_inverse = false;
        for (const auto& b : w.elements) {
            EXPECT_GE(w.find(a.action.compose(b.action), 1e-7), 0);
            has_inverse = has_inverse || a.action.compose(b.action).is_identity(1e-7);
        }
        EXPECT_TRUE(has_inverse);
    }
    // Representatives induce the recorded actions.
    TorusCoords tc(a0("sl8"), 1e-9);
    std::mt19937_64 rng(52);
    for (const auto& e : w.elements) {
        RVec eta = random_angles(rng, 2);
        auto got = tc.log(star_raw(s, e.rep, a0("sl8").element(eta)), 1e-8);
        ASSERT_TRUE(got);
        EXPECT_LT(angle_distance(*got, e.action.apply(eta)), 1e-8);
    }
}

TEST(Weyl, MaxOrderExceeded) {
    WeylOptions o;
    o.max_order = 8;
    try {
        weyl_generate(space("sl8"), a0("sl8"), fixture("sl8").candidates.weyl, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotClosed);
    }
}

TEST(Weyl, NonNormalizingCandidateRejected) {
    const auto& s = space("sl2");
    std::vector<Mat> c = {diag2(2.0, 0.5), diag2(-1.0, -1.0)};
    WeylGroupTable w = weyl_generate(s, a0("sl2"), c, WeylOptions{});
    ASSERT_EQ(w.rejected.size(), 1u);
    EXPECT_EQ(w.rejected[0].index, 0);
    EXPECT_EQ(w.accepted, std::vector<int>{1});
    TorusCoords tc(a0("sl2"), 1e-9);
    try {
        chart_action_of(s, a0("sl2"), tc, diag2(2.0, 0.5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotNormalizing);
    }
}
