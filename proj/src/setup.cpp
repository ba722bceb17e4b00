#include "hsq/setup.hpp"

#include <cmath>
#include <random>

namespace hsq {

Mat apply_involution(const InvolutionSpec& inv, const Mat& g) {
    Mat op = inv.entrywise_conjugate ? Mat(g.conjugate()) : g;
    if (inv.inverse_transpose) op = Mat(op.transpose()).inverse();
    return inv.conj_matrix * op * inv.conj_matrix.inverse();
}

Mat apply_involution_algebra(const InvolutionSpec& inv, const Mat& z) {
    Mat op = inv.entrywise_conjugate ? Mat(z.conjugate()) : z;
    if (inv.inverse_transpose) op = -Mat(op.transpose());
    return inv.conj_matrix * op * inv.conj_matrix.inverse();
}

const char* constraint_name(Constraint c) {
    switch (c) {
        case Constraint::DetOne: return "det_one";
        case Constraint::Real: return "real";
        case Constraint::Unitary: return "unitary";
    }
    return "?";
}

bool satisfies_constraints(const GroupSpec& spec, const Mat& g, const Tol& tol, std::string* why) {
    const double scale = std::max(1.0, fro(g));
    for (Constraint c : spec.constraints) {
        double r = 0;
        switch (c) {
            case Constraint::DetOne: r = std::abs(g.determinant() - cplx(1.0, 0.0)) / std::pow(scale, g.rows()); break;
            case Constraint::Real: r = g.imag().cwiseAbs().maxCoeff() / scale; break;
            case Constraint::Unitary: r = fro(g * g.adjoint() - identity(static_cast<int>(g.rows()))) / scale; break;
        }
        if (r > 10 * tol.eq) {
            if (why) *why = std::string(constraint_name(c)) + " residual " + std::to_string(r);
            return false;
        }
    }
    return true;
}

bool ValidationReport::ok() const { return first_failure() == nullptr; }

const CheckResult* ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return &c;
    return nullptr;
}

std::map<std::string, int> Decomposition::dims() const {
    auto d = [](const RMat& m) { return static_cast<int>(m.cols()); };
    return {{"h", d(h)}, {"q", d(q)}, {"k", d(k)}, {"p", d(p)}, {"g0", d(g0)}, {"r0", d(r0)},
            {"h_g0", d(h_g0)}, {"h_r0", d(h_r0)}, {"q_g0", d(q_g0)}, {"q_r0", d(q_r0)},
            {"p_q", d(p_q)}, {"p_q_g0", d(p_q_g0)}, {"p_q_r0", d(p_q_r0)},
            {"u_h", static_cast<int>(u_h.size())}};
}

namespace {

RMat stack(std::initializer_list<RMat> parts) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& p : parts) {
        rows += p.rows();
        cols = p.cols();
    }
    RMat out(rows, cols);
    Eigen::Index r = 0;
    for (const auto& p : parts) {
        out.middleRows(r, p.rows()) = p;
        r += p.rows();
    }
    return out;
}

struct Named {
    const char* name;
    const InvolutionSpec* inv;
};

}  // namespace

Decomposition decompose(const AlgebraBasis& basis, const RMat& ms, const RMat& mt, const RMat& md, double rank_tol) {
    const RMat I = RMat::Identity(basis.dim(), basis.dim());
    Decomposition d;
    d.h = nullspace(ms - I, rank_tol);
    d.q = nullspace(ms + I, rank_tol);
    d.k = nullspace(mt - I, rank_tol);
    d.p = nullspace(mt + I, rank_tol);
    d.g0 = nullspace(md - I, rank_tol);
    d.r0 = nullspace(md + I, rank_tol);
    d.h_g0 = nullspace(stack({ms - I, md - I}), rank_tol);
    d.h_r0 = nullspace(stack({ms - I, md + I}), rank_tol);
    d.q_g0 = nullspace(stack({ms + I, md - I}), rank_tol);
    d.q_r0 = nullspace(stack({ms + I, md + I}), rank_tol);
    d.p_q = nullspace(stack({mt + I, ms + I}), rank_tol);
    d.p_q_g0 = nullspace(stack({mt + I, ms + I, md - I}), rank_tol);
    d.p_q_r0 = nullspace(stack({mt + I, ms + I, md + I}), rank_tol);

    std::vector<Mat> raw = basis.to_mats(d.h_g0);
    d.u_h_compact = static_cast<int>(raw.size());
    for (const Mat& m : basis.to_mats(d.h_r0)) raw.push_back(cplx(0, 1) * m);
    for (Mat v : raw) {
        for (int pass = 0; pass < 2; ++pass)
            for (const Mat& e : d.u_h) v -= trace_inner(v, e) * e;
        const double nv = fro(v);
        if (nv > rank_tol) d.u_h.push_back(v / nv);
    }
    return d;
}

Decomposition decompose(const GroupSpec& spec, const Tol& tol) {
    return SymmetricSpace::create(spec, tol).decomposition();
}

ValidationReport validate_setup(const GroupSpec& spec, const Tol& tol) {
    ValidationReport rep;
    auto add = [&](std::string name, bool ok, double res, std::string detail = {}) {
        rep.checks.push_back(CheckResult{std::move(name), ok, res, std::move(detail)});
    };
    const double lim = 10 * tol.eq;

    if (spec.n <= 0 || spec.n > 16) {
        add("matrix_size", false, 0, "n must be in 1..16");
        return rep;
    }
    const Named invs[] = {{"sigma", &spec.sigma}, {"theta", &spec.theta}, {"delta", &spec.delta}, {"phi", &spec.phi}};
    for (const auto& nm : invs) {
        const Mat& J = nm.inv->conj_matrix;
        bool ok = J.rows() == spec.n && J.cols() == spec.n && is_finite(J) &&
                  std::abs(J.determinant()) > tol.rank;
        add(std::string("involution_matrix:") + nm.name, ok, 0, ok ? "" : "conj_matrix must be an invertible n x n matrix");
        if (!ok) return rep;
    }

    AlgebraBasis basis;
    try {
        basis = AlgebraBasis(spec.algebra_spanning, tol);
    } catch (const Error& e) {
        add("algebra_basis", false, 0, e.what());
        return rep;
    }
    add("algebra_basis", basis.dim() > 0, 0, "dim " + std::to_string(basis.dim()));

    double worst = 0;
    for (int i = 0; i < basis.dim(); ++i)
        for (int j = i + 1; j < basis.dim(); ++j) {
            double r = 0;
            basis.project(bracket(basis.element(i), basis.element(j)), &r);
            worst = std::max(worst, r);
        }
    add("bracket_closure", worst <= lim, worst);

    add("holomorphic:sigma", !spec.sigma.entrywise_conjugate, 0,
        spec.sigma.entrywise_conjugate ? "sigma must be holomorphic" : "");
    add("holomorphic:theta", !spec.theta.entrywise_conjugate, 0,
        spec.theta.entrywise_conjugate ? "theta must be holomorphic" : "");

    // Maps on the algebra and preservation of g.
    std::vector<RMat> maps;
    for (const auto& nm : invs) {
        double w = 0;
        for (const Mat& b : basis.elements()) {
            double r = 0;
            basis.project(apply_involution_algebra(*nm.inv, b), &r);
            w = std::max(w, r);
        }
        add(std::string("preserves_algebra:") + nm.name, w <= lim, w);
        maps.push_back(basis.linear_map([&](const Mat& b) { return apply_involution_algebra(*nm.inv, b); }));
    }
    {
        double r = (maps[3] - RMat::Identity(basis.dim(), basis.dim())).norm();
        add("real_form_fixes_algebra", r <= lim, r);
    }

    // Sample elements of the complexified group exp(X + iY).
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> nd(0.0, 0.4);
    std::vector<Mat> samples;
    for (int s = 0; s < 4; ++s) {
        Mat z = Mat::Zero(spec.n, spec.n);
        for (const Mat& b : basis.elements()) z += cplx(nd(rng), s == 0 ? 0.0 : nd(rng)) * b;
        samples.push_back(mat_exp(z));
    }
    for (const auto& nm : invs) {
        double w = 0;
        for (const Mat& g : samples)
            w = std::max(w, fro(apply_involution(*nm.inv, apply_involution(*nm.inv, g)) - g) / std::max(1.0, fro(g)));
        add(std::string("involution_square:") + nm.name, w <= lim, w);
    }
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            double w = 0;
            for (const Mat& g : samples) {
                Mat ab = apply_involution(*invs[a].inv, apply_involution(*invs[b].inv, g));
                Mat ba = apply_involution(*invs[b].inv, apply_involution(*invs[a].inv, g));
                w = std::max(w, fro(ab - ba) / std::max(1.0, fro(g)));
            }
            w = std::max(w, (maps[static_cast<std::size_t>(a)] * maps[static_cast<std::size_t>(b)] -
                             maps[static_cast<std::size_t>(b)] * maps[static_cast<std::size_t>(a)]).norm());
            add(std::string("commute:") + invs[a].name + "," + invs[b].name, w <= lim, w);
        }

    const RMat I = RMat::Identity(basis.dim(), basis.dim());
    for (int a = 0; a < 3; ++a) {
        const RMat& m = maps[static_cast<std::size_t>(a)];
        double r = (m.transpose() * m - I).norm();
        add(std::string("invariant_inner_product:") + invs[a].name, r <= lim, r);
    }

    // Cartan involution: fixed part skew-Hermitian, -1 part Hermitian, trace form definite on both.
    RMat g0 = nullspace(maps[2] - I, tol.rank), r0 = nullspace(maps[2] + I, tol.rank);
    {
        double w = 0;
        for (const Mat& x : basis.to_mats(g0)) w = std::max(w, fro(x + x.adjoint()));
        for (const Mat& x : basis.to_mats(r0)) w = std::max(w, fro(x - x.adjoint()));
        add("cartan_polar_compatible", w <= lim, w);
        auto form_min = [&](const RMat& sub) {
            std::vector<Mat> xs = basis.to_mats(sub);
            const int k = static_cast<int>(xs.size());
            if (k == 0) return 1.0;
            RMat f(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    f(i, j) = -(xs[static_cast<std::size_t>(i)] * apply_involution_algebra(spec.delta, xs[static_cast<std::size_t>(j)])).trace().real();
            return Eigen::SelfAdjointEigenSolver<RMat>((f + f.transpose()) / 2).eigenvalues().minCoeff();
        };
        double m0 = form_min(g0), m1 = form_min(r0);
        add("cartan_form_positive", m0 > tol.rank && m1 > tol.rank, std::min(m0, m1));
    }

    // Center: zero for semisimple; otherwise sigma*theta must have finite order on it.
    {
        RMat adstack(static_cast<Eigen::Index>(basis.dim()) * basis.dim(), basis.dim());
        for (int i = 0; i < basis.dim(); ++i) adstack.middleRows(static_cast<Eigen::Index>(i) * basis.dim(), basis.dim()) = basis.ad(basis.element(i));
        RMat center = nullspace(adstack, tol.rank);
        if (center.cols() == 0) {
            add("center_condition", true, 0, "satisfied: semisimple");
        } else {
            RMat st = center.transpose() * maps[0] * maps[1] * center;
            RMat pw = st;
            int order = 0;
            for (int k = 1; k <= 24; ++k) {
                if ((pw - RMat::Identity(st.rows(), st.cols())).norm() <= lim) {
                    order = k;
                    break;
                }
                pw = pw * st;
            }
            add("center_condition", order > 0, 0,
                order > 0 ? "sigma*theta has order " + std::to_string(order) + " on the center" : "no finite order found");
        }
    }

    for (std::size_t i = 0; i < spec.component_reps.size(); ++i) {
        const Mat& h = spec.component_reps[i];
        std::string why;
        bool ok = h.rows() == spec.n && h.cols() == spec.n;
        double r = ok ? fro(apply_involution(spec.sigma, h) - h) : 0;
        ok = ok && r <= lim * std::max(1.0, fro(h)) && satisfies_constraints(spec, h, tol, &why);
        add("component_rep:" + std::to_string(i), ok, r, ok ? "" : (why.empty() ? "not fixed by sigma" : why));
    }
    add("assumption_G_eq_HG0K", true, 0, spec.assume_hg0k ? "declared" : "not declared");
    return rep;
}

SymmetricSpace SymmetricSpace::create(const GroupSpec& spec, const Tol& tol) {
    check_tol(tol);
    SymmetricSpace s;
    s.spec_ = spec;
    s.tol_ = tol;
    s.report_ = validate_setup(spec, tol);
    if (const CheckResult* f = s.report_.first_failure())
        throw Error(ErrorKind::InvalidSetup, f->name + " (residual " + std::to_string(f->residual) + ") " + f->detail);
    s.basis_ = AlgebraBasis(spec.algebra_spanning, tol);
    s.m_sigma_ = s.basis_.linear_map([&](const Mat& b) { return apply_involution_algebra(spec.sigma, b); });
    s.m_theta_ = s.basis_.linear_map([&](const Mat& b) { return apply_involution_algebra(spec.theta, b); });
    s.m_delta_ = s.basis_.linear_map([&](const Mat& b) { return apply_involution_algebra(spec.delta, b); });
    s.dec_ = decompose(s.basis_, s.m_sigma_, s.m_theta_, s.m_delta_, tol.rank);
    return s;
}

bool SymmetricSpace::near(double residual, double scale) const {
    return residual <= 10 * tol_.eq * std::max(1.0, scale);
}

std::vector<Mat> sl_real_basis(int n) {
    std::vector<Mat> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Mat e = Mat::Zero(n, n);
            e(i, j) = 1.0;
            out.push_back(e);
        }
    for (int i = 0; i + 1 < n; ++i) {
        Mat e = Mat::Zero(n, n);
        e(i, i) = 1.0;
        e(i + 1, i + 1) = -1.0;
        out.push_back(e);
    }
    return out;
}

}  // namespace hsq
