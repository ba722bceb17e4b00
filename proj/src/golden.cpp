#include "hsq/golden.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace hsq {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct Suite {
    GoldenResult res;
    void check(const std::string& name, bool ok, const std::string& detail = "") { res.checks.push_back({name, ok, detail}); }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool signed_permutation(const RMat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        int nz = 0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) < 1e-9) continue;
            if (std::abs(std::abs(m(i, j)) - 1) > 1e-9) return false;
            ++nz;
        }
        if (nz != 1) return false;
    }
    return true;
}

std::vector<std::string> chamber_texts(const FiberData& f) {
    std::vector<std::string> out;
    for (const auto& c : f.chamber) out.push_back(c.text);
    return out;
}

void golden_sl2(const Config& c, Suite& su) {
    SymmetricSpace s = SymmetricSpace::create(c.group, c.numeric.tol);
    su.check("validate", s.validation().ok());
    auto dims = s.decomposition().dims();
    su.check("dims h=1 q=2 r0=2", dims["h"] == 1 && dims["q"] == 2 && dims["r0"] == 2);

    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 2.0;
    g(1, 1) = 0.5;
    Mat b = beta(s, g).mat;
    Mat want = Mat::Zero(2, 2);
    want(0, 0) = 4.0;
    want(1, 1) = 0.25;
    su.check("beta(diag(2,1/2)) = diag(4,1/4)", fro(b - want) < 1e-12, "residual " + num(fro(b - want)));

    // Kempf-Ness set: y = 0 or z = 0.
    const int n = 40;
    int agree = 0, total = 0, in_m = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double z = -3.0 + 6.0 * i / n;
            double phi = 2 * kPi * j / n;
            double r = std::sqrt(1 + z * z);
            double x = r * std::cos(phi), y = r * std::sin(phi);
            if (j == 0 || 2 * j == n) y = 0.0;
            PointX p = make_point(s, sl2_point(x, y, z));
            bool kn = in_kempf_ness(s, p);
            bool expect = std::abs(y) < 1e-7 || std::abs(z) < 1e-7;
            bool small_mu = std::sqrt(mu(s, p).norm_sq) < c.numeric.tol.mu;
            agree += (kn == expect && kn == small_mu) ? 1 : 0;
            in_m += kn ? 1 : 0;
            ++total;
        }
    su.check("Kempf-Ness set on a 40x40 sample", agree == total, std::to_string(agree) + "/" + std::to_string(total) + " agree, " + std::to_string(in_m) + " in M");

    FlowOptions fo;
    fo.max_iters = c.numeric.max_iters;
    fo.mu_tol = c.numeric.tol.mu;
    fo.fd_step = c.numeric.fd_step;
    fo.keep_iterates = false;
    {
        double x0 = 0.5, z0 = 1.0, y0 = std::sqrt(1 + z0 * z0 - x0 * x0);
        FlowTrace t = gradient_flow(s, make_point(s, sl2_point(x0, y0, z0)), fo);
        RVec lim = sl2_coords(t.last.mat);
        su.check("flow from (0.5, y0, z0) reaches z = 0", t.converged && std::abs(lim(2)) < 1e-5 && std::abs(lim(0) - x0) < 1e-9,
                 "limit (" + num(lim(0)) + ", " + num(lim(1)) + ", " + num(lim(2)) + "), |mu| " + num(t.residual));
        su.res.payload["flow_example"] = json_of(t);
    }
    {
        bool all = true;
        std::string d;
        for (double sv : {0.5, 1.0, 2.0}) {
            try {
                ClosedOrbitResult r = is_orbit_closed(s, make_point(s, sl2_point(1.0, sv, sv)), fo);
                all = all && !r.closed;
                d += "s=" + num(sv) + ":" + (r.closed ? "closed " : "not closed ");
            } catch (const Error& e) {
                all = false;
                d += "s=" + num(sv) + ":" + e.what() + " ";
            }
        }
        su.check("(1,s,s) orbits are not closed", all, d);
    }

    TorusChart a0 = chart_from_generators(s, c.torus.a0_generators);
    {
        bool ok = true;
        std::string d;
        for (double eta : {kPi / 2, 3 * kPi / 2}) {
            PointX v = make_point(s, a0.element(RVec::Constant(1, eta)));
            SliceWeights w = slice_rep_weights(s, v);
            std::vector<double> vals;
            for (const auto& x : w.weights) vals.push_back(x.value.real());
            std::sort(vals.begin(), vals.end());
            bool good = slice_space(s, v.mat).cols() == 2 && vals.size() == 2 && std::abs(vals[0] + 2) < 1e-9 && std::abs(vals[1] - 2) < 1e-9;
            ok = ok && good;
            d += "eta=" + num(eta) + (good ? " ok " : " bad ");
        }
        su.check("slice at +-v: dim 2, weights +2 and -2", ok, d);
    }
    {
        bool ok = true;
        for (int k = 0; k < 64; ++k) {
            double eta = 2 * kPi * k / 64;
            bool at_v = k == 16 || k == 48;
            ok = ok && is_principal(s, make_point(s, a0.element(RVec::Constant(1, eta)))).principal == !at_v;
        }
        su.check("principal exactly off +-v", ok);
    }

    QuotientAtlas at = build_atlas(s, c, atlas_options(c));
    su.check("4 strata", at.strata.strata.size() == 4, std::to_string(at.strata.strata.size()));
    bool trivial = true;
    for (const auto& t : at.tori) trivial = trivial && at.fibers[static_cast<std::size_t>(t.stratum_id)].little_weyl.order() == 1;
    su.check("3 minimal tori with trivial little Weyl groups", at.tori.size() == 3 && trivial, std::to_string(at.tori.size()) + " tori");
    int nontrivial = 0;
    for (const auto& e : at.weyl.elements) nontrivial += e.action.is_identity(1e-9) ? 0 : 1;
    su.check("W0* acts trivially", nontrivial == 0);
    su.check("complexified table of order 2 with equal strata", at.has_complexified && at.complexified.order() == 2 && at.complexified_equal,
             "order " + std::to_string(at.complexified.order()));
    su.res.payload["atlas"] = json_of(at);
    su.res.payload["kempf_ness_cloud"] = sl2_kempf_ness_cloud(s, 40);
}

void golden_sl8(const Config& c, Suite& su) {
    SymmetricSpace s = SymmetricSpace::create(c.group, c.numeric.tol);
    su.check("validate", s.validation().ok());
    auto start = std::chrono::steady_clock::now();
    QuotientAtlas at = build_atlas(s, c, atlas_options(c));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto& w = at.weyl;
    int translations = 0;
    bool trans_order2 = true;
    std::vector<RMat> linear;
    for (const auto& e : w.elements) {
        if (e.action.is_translation(1e-9)) {
            ++translations;
            trans_order2 = trans_order2 && e.action.compose(e.action).is_identity(1e-7);
        }
        bool seen = false;
        for (const RMat& m : linear) seen = seen || (m - e.action.linear).cwiseAbs().maxCoeff() < 1e-9;
        if (!seen) linear.push_back(e.action.linear);
    }
    bool signed_perm = linear.size() == 8;
    for (const RMat& m : linear) signed_perm = signed_perm && signed_permutation(m);
    su.check("W0* has order 32", w.order() == 32 && w.closed, std::to_string(w.order()));
    su.check("translation subgroup of order 4", translations == 4 && trans_order2, std::to_string(translations));
    su.check("linear parts form the signed permutations of (eta1, eta2)", signed_perm, std::to_string(linear.size()) + " linear parts");

    struct Expect {
        int kase;
        int t_dim;
        int weyl;
        std::vector<std::string> chamber;
    };
    auto classify = [](const RVec& e) -> int {
        const double tol = 1e-6, q = kPi / 2;
        bool a0 = std::abs(e(0)) < tol, aq = std::abs(e(0) - q) < tol;
        bool b0 = std::abs(e(1)) < tol, bq = std::abs(e(1) - q) < tol;
        bool diag = std::abs(e(0) - e(1)) < tol;
        if (a0 && b0) return 4;
        if (aq && bq) return 5;
        if (a0 && bq) return 6;
        if (diag) return 2;
        if (a0 || bq) return 3;
        return 1;
    };
    std::map<int, Expect> expect = {
        {1, {1, 0, 1, {}}},
        {2, {2, 1, 2, {"r1 >= 1"}}},
        {3, {3, 1, 2, {"r1 >= 1"}}},
        {4, {4, 2, 8, {"r1 >= 1", "r2 >= 1", "r1 <= r2"}}},
        {5, {5, 2, 8, {"r1 >= 1", "r2 >= 1", "r1 <= r2"}}},
        {6, {6, 2, 4, {"r1 >= 1", "r2 >= 1"}}},
    };
    std::set<int> kinds;
    std::map<int, int> count;
    for (const auto& st : at.strata.strata) {
        int k = classify(st.representative);
        kinds.insert(k);
        ++count[k];
        const FiberData& f = at.fibers[static_cast<std::size_t>(st.id)];
        const Expect& x = expect[k];
        bool ok = f.t_basis.cols() == x.t_dim && f.little_weyl.order() == x.weyl && chamber_texts(f) == x.chamber &&
                  f.chamber_verified && f.maximal;
        std::ostringstream d;
        d << "stratum " << st.id << " at (" << num(st.representative(0)) << ", " << num(st.representative(1)) << "): dim t "
          << f.t_basis.cols() << ", |W| " << f.little_weyl.order() << ", chamber {";
        for (const auto& t : chamber_texts(f)) d << " " << t;
        d << " }";
        su.check("case " + std::to_string(k) + " fiber", ok, d.str());
    }
    su.check("7 strata of 6 types", at.strata.strata.size() == 7 && kinds.size() == 6 && count[3] == 2,
             std::to_string(at.strata.strata.size()) + " strata, " + std::to_string(kinds.size()) + " types");
    su.check("7 minimal tori", at.tori.size() == 7 && at.sub_maximal.empty(), std::to_string(at.tori.size()));
    su.check("atlas within 5 minutes", secs < 300, num(secs) + " s");
    su.res.payload["atlas"] = json_of(at);
}

}  // namespace

bool GoldenResult::ok() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

Mat sl2_point(double x, double y, double z) {
    Mat m(2, 2);
    m << cplx(y + z, 0), cplx(x, 0), cplx(-x, 0), cplx(y - z, 0);
    return m;
}

RVec sl2_coords(const Mat& m) {
    RVec v(3);
    v << m(0, 1).real(), (m(0, 0).real() + m(1, 1).real()) / 2, (m(0, 0).real() - m(1, 1).real()) / 2;
    return v;
}

json sl2_kempf_ness_cloud(const SymmetricSpace& s, int n) {
    json pts = json::array();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double z = -3.0 + 6.0 * i / n;
            double phi = 2 * kPi * j / n;
            double r = std::sqrt(1 + z * z);
            double x = r * std::cos(phi), y = (j == 0 || 2 * j == n) ? 0.0 : r * std::sin(phi);
            PointX p = make_point(s, sl2_point(x, y, z));
            if (in_kempf_ness(s, p)) pts.push_back(json::array({x, y, z}));
        }
    return pts;
}

GoldenResult run_golden(const std::string& name, const Config& c) {
    Suite su;
    su.res.payload = json::object();
    if (name == "sl2")
        golden_sl2(c, su);
    else if (name == "sl8")
        golden_sl8(c, su);
    else
        throw Error(ErrorKind::Usage, "unknown example " + name);
    json checks = json::array();
    for (const auto& ch : su.res.checks) checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
    su.res.payload["checks"] = checks;
    su.res.payload["ok"] = su.res.ok();
    return su.res;
}

}  // namespace hsq
