#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"

using namespace hsq;
using namespace hsq::testing;

namespace {

// H = SO(1,1)-type diagonal subgroup, K = SO(2): the compact torus A0 is trivial.
const char* kDegenerate = R"({
  "schema": "hsquot-config/1",
  "name": "sl2-degenerate",
  "group": {
    "n": 2,
    "algebra": {"generator": "sl_real"},
    "sigma": {"conj_matrix": [[1, 0], [0, -1]], "inverse_transpose": false, "entrywise_conjugate": false},
    "theta": {"conj_matrix": [[1, 0], [0, 1]], "inverse_transpose": true, "entrywise_conjugate": false},
    "delta": {"conj_matrix": [[1, 0], [0, 1]], "inverse_transpose": true, "entrywise_conjugate": true},
    "phi": {"conj_matrix": [[1, 0], [0, 1]], "inverse_transpose": false, "entrywise_conjugate": true},
    "constraints": ["det_one", "real"],
    "assumptions": {"G_eq_HG0K": true},
    "component_reps": [[[-1, 0], [0, -1]]]
  },
  "torus": {"a0_generators": []},
  "numeric": {"grid_n": 8}
})";

const QuotientAtlas& sl2_atlas() {
    static const QuotientAtlas at = build_atlas(space("sl2"), fixture("sl2"), atlas_options(fixture("sl2")));
    return at;
}

FiberData fiber(const std::string& name, const RVec& eta, const std::vector<Mat>& extra = {}) {
    const Config& c = fixture(name);
    std::vector<Mat> cands = c.candidates.h_u;
    for (const Mat& r : c.group.component_reps) cands.push_back(r);
    for (const Mat& r : extra) cands.push_back(r);
    return fiber_at(space(name), a0(name), eta, cands, FiberOptions{});
}

std::vector<Mat> weyl_fixing(const std::string& name, const RVec& eta) {
    static const WeylGroupTable w8 = weyl_generate(space("sl8"), a0("sl8"), fixture("sl8").candidates.weyl, WeylOptions{});
    std::vector<Mat> out;
    (void)name;
    for (const auto& e : w8.elements)
        if (angle_distance(e.action.apply(eta), eta) < 1e-9) out.push_back(e.rep);
    return out;
}

}  // namespace

TEST(Strata, Sl2FourStrata) {
    const auto& st = sl2_atlas().strata;
    ASSERT_EQ(st.strata.size(), 4u);
    int points = 0, arcs = 0;
    for (const auto& s : st.strata) {
        if (s.dimension == 0) {
            ++points;
            double eta = s.representative(0);
            EXPECT_TRUE(std::abs(eta - kPi / 2) < 1e-9 || std::abs(eta - 3 * kPi / 2) < 1e-9) << eta;
            EXPECT_EQ(s.isotropy_dim, 1);
        } else {
            ++arcs;
            EXPECT_EQ(s.isotropy_dim, 0);
        }
    }
    EXPECT_EQ(points, 2);
    EXPECT_EQ(arcs, 2);
}

TEST(Strata, InvariantUnderComplexifiedWeyl) {
    const auto& at = sl2_atlas();
    ASSERT_TRUE(at.has_complexified);
    for (const auto& e : at.complexified.elements) {
        auto perm = stratum_permutation(at.strata, e.action);
        ASSERT_TRUE(perm);
        for (std::size_t i = 0; i < perm->size(); ++i)
            EXPECT_EQ(at.strata.strata[i].isotropy_dim, at.strata.strata[static_cast<std::size_t>((*perm)[i])].isotropy_dim);
    }
    EXPECT_TRUE(at.complexified_equal);
    EXPECT_TRUE(at.complexified_refines);
}

TEST(Strata, Sl8InvariantUnderWeylOnFullTorus) {
    const auto& s = space("sl8");
    WeylGroupTable w = weyl_generate(s, a0("sl8"), fixture("sl8").candidates.weyl, WeylOptions{});
    StratifyOptions o;
    o.grid_n = 8;
    o.refine_levels = 2;
    Stratification st = stratify(s, a0("sl8"), w, o);
    for (const auto& e : w.elements) {
        auto perm = stratum_permutation(st, e.action);
        ASSERT_TRUE(perm);
        for (std::size_t i = 0; i < perm->size(); ++i)
            EXPECT_EQ(st.strata[i].nodes.size(), st.strata[static_cast<std::size_t>((*perm)[i])].nodes.size());
    }
}

TEST(Strata, SliceConstantAlongStratum) {
    const auto& s = space("sl8");
    const TorusChart& a = a0("sl8");
    const double q = kPi / 2;
    // Interior points, the diagonal and one boundary edge.
    std::vector<std::vector<RVec>> groups = {
        {vec({0.3, 0.9}), vec({0.5, 1.2}), vec({0.2, 0.4})},
        {vec({0.3, 0.3}), vec({0.7, 0.7}), vec({1.2, 1.2})},
        {vec({0.0, 0.3}), vec({0.0, 0.8}), vec({0.0, 1.4})},
        {vec({0.2, q}), vec({0.9, q}), vec({1.3, q})},
    };
    for (const auto& g : groups) {
        RMat ref = slice_space(s, a.element(g[0]));
        for (const RVec& eta : g) {
            RMat other = slice_space(s, a.element(eta));
            ASSERT_EQ(other.cols(), ref.cols());
            EXPECT_LT(subspace_distance(ref, other), 10 * s.tol().eq * 10);
        }
    }
}

TEST(Strata, LabelerOnSyntheticWalls) {
    // Walls at eta = 1 and eta = 4 on a circle: two arcs and two points.
    Labeler lab = [](const RVec& e) {
        double d = std::min(std::abs(e(0) - 1.0), std::abs(e(0) - 4.0));
        Sample smp;
        smp.label.iso_dim = d < 1e-9 ? 1 : 0;
        smp.indicator = d;
        return smp;
    };
    StratifyOptions o;
    o.grid_n = 32;
    o.refine_levels = 4;
    Stratification st = stratify_with(lab, 1, o);
    EXPECT_EQ(st.strata.size(), 4u);
}

TEST(Fiber, Sl2AtV) {
    for (double eta : {kPi / 2, 3 * kPi / 2}) {
        FiberData f = fiber("sl2", vec({eta}));
        EXPECT_EQ(f.t_basis.cols(), 1);
        EXPECT_EQ(f.little_weyl.order(), 1);
        EXPECT_TRUE(f.chamber.empty());
        EXPECT_TRUE(f.maximal);
    }
}

TEST(Fiber, Sl8Diagonal) {
    RVec eta = vec({kPi / 4, kPi / 4});
    FiberData f = fiber("sl8", eta, weyl_fixing("sl8", eta));
    EXPECT_EQ(f.slice_noncompact_basis.cols(), 2);
    EXPECT_EQ(f.t_basis.cols(), 1);
    EXPECT_EQ(f.little_weyl.order(), 2);
    ASSERT_EQ(f.chamber.size(), 1u);
    EXPECT_EQ(f.chamber[0].text, "r1 >= 1");
}

TEST(Fiber, Sl8Identity) {
    RVec eta = vec({0.0, 0.0});
    FiberData f = fiber("sl8", eta, weyl_fixing("sl8", eta));
    EXPECT_EQ(f.slice_noncompact_basis.cols(), 6);
    EXPECT_EQ(f.t_basis.cols(), 2);
    EXPECT_EQ(f.little_weyl.order(), 8);
    EXPECT_TRUE(f.chamber_signed_permutation);
    EXPECT_TRUE(f.chamber_verified);
    std::vector<std::string> texts;
    for (const auto& c : f.chamber) texts.push_back(c.text);
    EXPECT_EQ(texts, (std::vector<std::string>{"r1 >= 1", "r2 >= 1", "r1 <= r2"}));
    // Representatives fix u and normalize t.
    const auto& s = space("sl8");
    for (const auto& e : f.little_weyl.elements) {
        EXPECT_LT(fro(star_raw(s, e.rep, identity(8)) - identity(8)), 1e-8);
        EXPECT_LT(normalization_residual(s, f.t_basis, e.rep), 1e-7);
    }
}

TEST(Fiber, Sl8MixedCorner) {
    RVec eta = vec({0.0, kPi / 2});
    FiberData f = fiber("sl8", eta, weyl_fixing("sl8", eta));
    EXPECT_EQ(f.t_basis.cols(), 2);
    EXPECT_EQ(f.little_weyl.order(), 4);
    std::vector<std::string> texts;
    for (const auto& c : f.chamber) texts.push_back(c.text);
    EXPECT_EQ(texts, (std::vector<std::string>{"r1 >= 1", "r2 >= 1"}));
}

TEST(Atlas, Sl2MinimalCollection) {
    const auto& at = sl2_atlas();
    EXPECT_EQ(at.quotient_dim, 1);
    ASSERT_EQ(at.tori.size(), 3u);
    EXPECT_TRUE(at.sub_maximal.empty());
    int compact = 0, split = 0;
    for (const auto& t : at.tori) {
        EXPECT_TRUE(t.standard) << t.check.detail;
        EXPECT_EQ(at.fibers[static_cast<std::size_t>(t.stratum_id)].little_weyl.order(), 1);
        compact += t.chart.compact_dim();
        split += t.chart.split_dim();
    }
    EXPECT_EQ(compact, 1);
    EXPECT_EQ(split, 2);
    // The compact torus is claimed by both arcs.
    for (const auto& t : at.tori) {
        if (t.chart.compact_dim() == 1) {
            EXPECT_EQ(t.claimed_strata.size(), 2u);
        }
    }
}

TEST(Atlas, ToriLieInKempfNessSet) {
    const auto& s = space("sl2");
    std::mt19937_64 rng(61);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (const auto& t : sl2_atlas().tori) {
        ChartCheck c = check_chart(s, t.chart);
        EXPECT_TRUE(c.ok);
        for (int k = 0; k < 10; ++k) {
            RVec co(t.chart.rank());
            for (int i = 0; i < t.chart.rank(); ++i) co(i) = nd(rng);
            EXPECT_TRUE(in_kempf_ness(s, make_point(s, t.chart.element(co))));
        }
    }
}

TEST(Atlas, EquivalenceBasics) {
    const auto& s = space("sl2");
    const auto& at = sl2_atlas();
    const MinimalTorus* pv = nullptr;
    const MinimalTorus* mv = nullptr;
    for (const auto& t : at.tori)
        if (t.chart.split_dim() == 1) (pv ? mv : pv) = &t;
    ASSERT_TRUE(pv && mv);
    auto same = equivalence_test(s, at, *pv, *pv);
    ASSERT_TRUE(same.element);
    EXPECT_TRUE(at.weyl.elements[static_cast<std::size_t>(*same.element)].action.is_identity(1e-9));
    EXPECT_FALSE(equivalence_test(s, at, *pv, *mv).element);
    EXPECT_TRUE(equivalence_test(s, at, *pv, *mv).table_closed);
    MinimalTorus bad = *pv;
    bad.standard = false;
    bad.check.detail = "forced";
    try {
        equivalence_test(s, at, bad, *mv);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotStandard);
    }
}

TEST(Atlas, EquivalenceRecoversAppliedWeylElement) {
    const auto& s = space("sl8");
    QuotientAtlas at;
    at.a0 = a0("sl8");
    at.weyl = weyl_generate(s, at.a0, fixture("sl8").candidates.weyl, WeylOptions{});
    StratifyOptions o;
    o.grid_n = 8;
    o.refine_levels = 2;
    at.strata = stratify(s, at.a0, at.weyl, o);
    FiberData empty;
    empty.t_basis = RMat(s.dim(), 0);
    int tested = 0;
    for (const auto& w : at.weyl.elements) {
        auto perm = stratum_permutation(at.strata, w.action);
        ASSERT_TRUE(perm);
        for (const auto& st : at.strata.strata) {
            const Stratum& img = at.strata.strata[static_cast<std::size_t>((*perm)[static_cast<std::size_t>(st.id)])];
            MinimalTorus a = stratum_torus(s, at.a0, st, empty);
            MinimalTorus b = stratum_torus(s, at.a0, img, empty);
            auto r = equivalence_test(s, at, a, b);
            ASSERT_TRUE(r.element);
            const ChartAction& found = at.weyl.elements[static_cast<std::size_t>(*r.element)].action;
            if (st.lie_c.cols()) {
                EXPECT_LT(subspace_distance(column_span(found.linear * st.lie_c, 1e-9), img.lie_c), 1e-6);
            }
            ++tested;
        }
    }
    EXPECT_GT(tested, 0);
}

TEST(Atlas, DegenerateTorusGivesSingleChart) {
    Config c = parse_config_text(kDegenerate, "degenerate");
    SymmetricSpace s = SymmetricSpace::create(c.group, c.numeric.tol);
    QuotientAtlas at = build_atlas(s, c, atlas_options(c));
    EXPECT_EQ(at.a0.rank(), 0);
    EXPECT_EQ(at.strata.strata.size(), 1u);
    EXPECT_EQ(at.quotient_dim, 1);
    ASSERT_EQ(at.tori.size(), 1u);
    EXPECT_EQ(at.tori[0].chart.compact_dim(), 0);
    EXPECT_EQ(at.tori[0].chart.split_dim(), 1);
    EXPECT_TRUE(at.tori[0].standard);
}
