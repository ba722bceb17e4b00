#include "hsq/atlas.hpp"

#include <cmath>

#include "hsq/parallel.hpp"

namespace hsq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool in_span(const RMat& basis, const RVec& v, double tol) {
    if (basis.cols() == 0) return v.norm() <= tol;
    RVec c = basis.colPivHouseholderQr().solve(v);
    return (basis * c - v).norm() <= tol;
}

// Translation test modulo the lattice 2 pi Z^r, searching a small box.
bool congruent_mod_span(const RMat& lie, const RVec& d, double tol) {
    const int r = static_cast<int>(d.size());
    if (r == 0) return true;
    std::vector<int> m(static_cast<std::size_t>(r), -2);
    while (true) {
        RVec v = d;
        for (int i = 0; i < r; ++i) v(i) -= kTwoPi * m[static_cast<std::size_t>(i)];
        if (in_span(lie, v, tol)) return true;
        int i = 0;
        while (i < r && m[static_cast<std::size_t>(i)] == 2) m[static_cast<std::size_t>(i++)] = -2;
        if (i == r) return false;
        ++m[static_cast<std::size_t>(i)];
    }
}

}  // namespace

AtlasOptions atlas_options(const Config& c) {
    AtlasOptions o;
    o.grid_n = c.numeric.grid_n;
    o.refine_levels = c.numeric.refine_levels;
    o.seed = c.numeric.seed;
    o.max_group_order = c.numeric.max_group_order;
    o.threads = c.numeric.threads;
    o.domain = c.torus.domain;
    return o;
}

MinimalTorus stratum_torus(const SymmetricSpace& s, const TorusChart& a0, const Stratum& st, const FiberData& fd) {
    MinimalTorus t;
    t.stratum_id = st.id;
    t.claimed_strata = {st.id};
    const int r = a0.rank();
    RVec base = st.representative;
    std::vector<Mat> compact;
    if (st.lie_c.cols() > 0) {
        base = (RMat::Identity(r, r) - projector(st.lie_c)) * st.representative;
        for (Eigen::Index j = 0; j < st.lie_c.cols(); ++j) {
            Mat x = Mat::Zero(s.n(), s.n());
            for (int i = 0; i < r; ++i) x += st.lie_c(i, j) * a0.mats[static_cast<std::size_t>(i)];
            compact.push_back(x);
        }
        compact = torus_lattice_basis(compact, s.tol().eq);
    }
    t.chart.base_point = a0.element(base);
    for (const Mat& x : compact) {
        t.chart.mats.push_back(x);
        t.chart.kinds.push_back(GenKind::Compact);
    }
    for (const Mat& x : s.algebra().to_mats(fd.t_basis)) {
        t.chart.mats.push_back(x);
        t.chart.kinds.push_back(GenKind::Split);
    }
    for (const Mat& x : t.chart.mats) t.chart.generators.push_back(s.algebra().vec(s.algebra().project(x)));
    t.check = check_chart(s, t.chart);
    t.standard = t.check.ok;
    return t;
}

EquivalenceResult equivalence_test(const SymmetricSpace& s, const QuotientAtlas& atlas, const MinimalTorus& a,
                                   const MinimalTorus& b) {
    (void)s;
    for (const MinimalTorus* t : {&a, &b})
        if (!t->standard) throw Error(ErrorKind::NotStandard, "torus of stratum " + std::to_string(t->stratum_id) + ": " + t->check.detail);
    EquivalenceResult res;
    res.table_closed = atlas.weyl.closed;
    const Stratum& sa = atlas.strata.strata[static_cast<std::size_t>(a.stratum_id)];
    const Stratum& sb = atlas.strata.strata[static_cast<std::size_t>(b.stratum_id)];
    if (sa.lie_c.cols() != sb.lie_c.cols()) return res;
    if (a.chart.split_dim() != b.chart.split_dim()) return res;
    const double tol = 1e-6;
    for (std::size_t k = 0; k < atlas.weyl.elements.size(); ++k) {
        const ChartAction& act = atlas.weyl.elements[k].action;
        RMat img = act.linear * sa.lie_c;
        if (img.cols() && subspace_distance(column_span(img, 1e-9), sb.lie_c) > tol) continue;
        RVec d = act.apply(sa.representative) - sb.representative;
        if (!congruent_mod_span(sb.lie_c, d, tol)) continue;
        res.element = static_cast<int>(k);
        return res;
    }
    return res;
}

void minimal_collection(const SymmetricSpace& s, QuotientAtlas& atlas) {
    atlas.tori.clear();
    atlas.sub_maximal.clear();
    for (const Stratum& st : atlas.strata.strata) {
        const FiberData& fd = atlas.fibers[static_cast<std::size_t>(st.id)];
        if (st.dimension + fd.t_basis.cols() != atlas.quotient_dim) {
            atlas.sub_maximal.push_back(st.id);
            continue;
        }
        MinimalTorus cand = stratum_torus(s, atlas.a0, st, fd);
        bool merged = false;
        for (MinimalTorus& kept : atlas.tori) {
            if (!kept.standard || !cand.standard) continue;
            if (equivalence_test(s, atlas, cand, kept).element) {
                kept.claimed_strata.push_back(st.id);
                merged = true;
                break;
            }
        }
        if (!merged) atlas.tori.push_back(std::move(cand));
    }
}

QuotientAtlas build_atlas(const SymmetricSpace& s, const Config& c, const AtlasOptions& opts) {
    QuotientAtlas at;
    at.a0 = chart_from_generators(s, c.torus.a0_generators);
    WeylOptions wo;
    wo.max_order = opts.max_group_order;
    at.weyl = weyl_generate(s, at.a0, c.candidates.weyl, wo);

    StratifyOptions so;
    so.grid_n = opts.grid_n;
    so.refine_levels = opts.refine_levels;
    so.threads = opts.threads;
    so.domain = opts.domain;
    at.strata = stratify(s, at.a0, at.weyl, so);
    at.quotient_dim = max_split_torus(s, identity(s.n()), opts.seed).rank();

    at.fibers.resize(at.strata.strata.size());
    parallel_for(static_cast<int>(at.strata.strata.size()), opts.threads, [&](int i) {
        const Stratum& st = at.strata.strata[static_cast<std::size_t>(i)];
        std::vector<Mat> cands = c.candidates.h_u;
        for (const Mat& r : c.group.component_reps) cands.push_back(r);
        for (int k : st.weyl_stabilizer) cands.push_back(at.weyl.elements[static_cast<std::size_t>(k)].rep);
        FiberOptions fo;
        fo.seed = opts.seed;
        fo.max_order = opts.max_group_order;
        at.fibers[static_cast<std::size_t>(i)] = fiber_at(s, at.a0, st.representative, cands, fo);
    });
    minimal_collection(s, at);

    if (!c.candidates.weyl_complexified.empty()) {
        at.has_complexified = true;
        at.complexified = weyl_generate(s, at.a0, c.candidates.weyl_complexified, wo);
        at.complexified_strata = weyl_stratify(at.complexified, at.a0.rank(), so);
        at.complexified_refines = refines(at.complexified_strata, at.strata);
        at.complexified_equal = same_partition(at.strata, at.complexified_strata);
    }
    return at;
}

}  // namespace hsq
