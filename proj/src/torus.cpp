#include "hsq/torus.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

namespace hsq {

using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

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

// Joint eigenbasis of commuting skew-Hermitian matrices and their (real) weights.
struct JointDiag {
    Mat v;
    RMat weights;  // m x r
};

JointDiag joint_diagonalize(const std::vector<Mat>& gens, double tol) {
    const int n = static_cast<int>(gens.front().rows());
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> ud(0.5, 1.5);
    Mat z = Mat::Zero(n, n);
    for (const Mat& g : gens) z += ud(rng) * g;
    Mat herm = cplx(0, -1) * z;
    herm = (herm + herm.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    JointDiag out;
    out.v = es.eigenvectors();
    out.weights.resize(n, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Mat d = out.v.adjoint() * gens[i] * out.v;
        Mat off = d;
        off.diagonal().setZero();
        if (off.norm() > 1e3 * tol * std::max(1.0, d.norm()))
            throw Error(ErrorKind::NotClosed, "torus generators are not simultaneously diagonalizable with imaginary weights");
        for (int k = 0; k < n; ++k) out.weights(k, static_cast<Eigen::Index>(i)) = d(k, k).imag();
    }
    return out;
}

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

}  // namespace

const char* gen_kind_name(GenKind k) { return k == GenKind::Compact ? "compact" : "split"; }

int TorusChart::compact_dim() const {
    int c = 0;
    for (GenKind k : kinds) c += k == GenKind::Compact ? 1 : 0;
    return c;
}

Mat TorusChart::exp_part(const RVec& c) const {
    Mat z = Mat::Zero(base_point.rows(), base_point.cols());
    for (int i = 0; i < rank(); ++i) z += c(i) * mats[static_cast<std::size_t>(i)];
    return mat_exp(z);
}

Mat TorusChart::element(const RVec& c) const { return exp_part(c) * base_point; }

ChartCheck check_chart(const SymmetricSpace& s, const TorusChart& chart) {
    ChartCheck c;
    const int r = chart.rank();
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            c.bracket_residual = std::max(c.bracket_residual, fro(bracket(chart.mats[static_cast<std::size_t>(i)], chart.mats[static_cast<std::size_t>(j)])));
    const Mat& u = chart.base_point;
    Mat ui = inverse(u, s.tol());
    for (int i = 0; i < r; ++i) {
        const Mat& x = chart.mats[static_cast<std::size_t>(i)];
        const double sc = std::max(1.0, fro(x));
        if (chart.kinds[static_cast<std::size_t>(i)] == GenKind::Compact) {
            c.period_residual = std::max(c.period_residual, fro(mat_exp(kTwoPi * x) - identity(s.n())));
            c.delta_residual = std::max(c.delta_residual, fro(s.delta_alg(x) - x) / sc);
        } else {
            c.delta_residual = std::max(c.delta_residual, fro(s.delta_alg(x) + x) / sc);
        }
        c.split_residual = std::max(c.split_residual, fro(s.sigma_alg(x) + x) / sc);
        c.split_residual = std::max(c.split_residual, fro(u * s.theta_alg(x) * ui + x) / sc);
    }
    const double lim = 10 * s.tol().eq;
    auto fail = [&](const char* what, double v) {
        if (v > lim * 100) {
            c.ok = false;
            if (!c.detail.empty()) c.detail += "; ";
            c.detail += std::string(what) + " residual " + std::to_string(v);
        }
    };
    fail("bracket", c.bracket_residual);
    fail("period", c.period_residual);
    fail("split", c.split_residual);
    fail("delta", c.delta_residual);
    return c;
}

Hnf hermite_normal_form(const IMat& a) {
    const Eigen::Index m = a.rows(), k = a.cols();
    IMat h = a;
    IMat t = IMat::Identity(m, m);
    Eigen::Index p = 0;
    for (Eigen::Index j = 0; j < k && p < m; ++j) {
        while (true) {
            Eigen::Index piv = -1;
            for (Eigen::Index i = p; i < m; ++i)
                if (h(i, j) != 0 && (piv < 0 || std::llabs(h(i, j)) < std::llabs(h(piv, j)))) piv = i;
            if (piv < 0) break;
            h.row(p).swap(h.row(piv));
            t.row(p).swap(t.row(piv));
            bool done = true;
            for (Eigen::Index i = p + 1; i < m; ++i) {
                if (h(i, j) == 0) continue;
                long long q = h(i, j) / h(p, j);
                h.row(i) -= q * h.row(p);
                t.row(i) -= q * t.row(p);
                if (h(i, j) != 0) done = false;
            }
            if (done) break;
        }
        if (p >= m || h(p, j) == 0) continue;
        if (h(p, j) < 0) {
            h.row(p) *= -1;
            t.row(p) *= -1;
        }
        for (Eigen::Index i = 0; i < p; ++i) {
            long long q = h(i, j) / h(p, j);
            if (h(i, j) - q * h(p, j) < 0) --q;
            h.row(i) -= q * h.row(p);
            t.row(i) -= q * t.row(p);
        }
        ++p;
    }
    Hnf out;
    out.rank = static_cast<int>(p);
    out.h = h.topRows(p);
    out.t = t;
    return out;
}

std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den, double tol) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        long long ai = static_cast<long long>(a);
        long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= tol) return std::make_pair(p2, q2);
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

std::vector<Mat> torus_lattice_basis(const std::vector<Mat>& gens, double tol) {
    const int r = static_cast<int>(gens.size());
    if (r == 0) return {};
    JointDiag jd = joint_diagonalize(gens, tol);
    const RMat& w = jd.weights;
    Eigen::ColPivHouseholderQR<RMat> qr(w.transpose());
    qr.setThreshold(1e-8);
    if (qr.rank() < r) throw Error(ErrorKind::NotClosed, "torus generators are linearly dependent");
    RMat rsel(r, r);
    for (int i = 0; i < r; ++i) rsel.row(i) = w.row(qr.colsPermutation().indices()(i));
    RMat rinv = rsel.inverse();
    RMat q = w * rinv;
    long long den = 1;
    std::vector<std::pair<long long, long long>> fr(static_cast<std::size_t>(q.size()));
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        auto f = rationalize(q.data()[i], 60, 1e-8);
        if (!f) throw Error(ErrorKind::NotClosed, "torus weights are not commensurable: exp of the span is not closed");
        fr[static_cast<std::size_t>(i)] = *f;
        den = lcm_ll(den, f->second);
    }
    IMat nmat(q.rows(), q.cols());
    for (Eigen::Index i = 0; i < q.size(); ++i)
        nmat.data()[i] = fr[static_cast<std::size_t>(i)].first * (den / fr[static_cast<std::size_t>(i)].second);
    Hnf hnf = hermite_normal_form(nmat);
    if (hnf.rank != r) throw Error(ErrorKind::NotClosed, "weight lattice has deficient rank");
    RMat p = hnf.h.cast<double>() / static_cast<double>(den);
    RMat b = rinv * p.inverse();  // columns: lattice basis in generator coordinates
    RMat br = b.array().round().matrix();
    if ((b - br).cwiseAbs().maxCoeff() < 1e-6 && std::abs(std::abs(br.determinant()) - 1.0) < 1e-6) return gens;
    std::vector<Mat> out;
    for (int j = 0; j < r; ++j) {
        Mat x = Mat::Zero(gens.front().rows(), gens.front().cols());
        for (int i = 0; i < r; ++i) x += b(i, j) * gens[static_cast<std::size_t>(i)];
        out.push_back(x);
    }
    return out;
}

TorusCoords::TorusCoords(const TorusChart& chart, double tol) {
    for (int i = 0; i < chart.rank(); ++i)
        if (chart.kinds[static_cast<std::size_t>(i)] == GenKind::Compact) mats_.push_back(chart.mats[static_cast<std::size_t>(i)]);
    rank_ = static_cast<int>(mats_.size());
    if (rank_ == 0) return;
    JointDiag jd = joint_diagonalize(mats_, tol);
    v_ = jd.v;
    RMat wr = jd.weights.array().round().matrix();
    if ((jd.weights - wr).cwiseAbs().maxCoeff() > 1e-6)
        throw Error(ErrorKind::NotClosed, "compact generators do not have period 2*pi");
    Hnf hnf = hermite_normal_form(wr.cast<long long>());
    if (hnf.rank != rank_ || hnf.h != IMat::Identity(rank_, rank_))
        throw Error(ErrorKind::NotClosed, "compact generators do not form a basis of the period lattice");
    solve_ = hnf.t.topRows(rank_);
}

std::optional<RVec> TorusCoords::log(const Mat& a, double tol) const {
    if (rank_ == 0) {
        if (fro(a - identity(static_cast<int>(a.rows()))) <= tol * 100) return RVec(0);
        return std::nullopt;
    }
    Mat d = v_.adjoint() * a * v_;
    Mat off = d;
    off.diagonal().setZero();
    if (off.norm() > 100 * tol * std::max(1.0, d.norm())) return std::nullopt;
    const Eigen::Index m = d.rows();
    RVec phase(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        if (std::abs(std::abs(d(k, k)) - 1.0) > 100 * tol) return std::nullopt;
        phase(k) = std::arg(d(k, k));
    }
    RVec eta = wrap_angles(solve_.cast<double>() * phase);
    Mat z = Mat::Zero(a.rows(), a.cols());
    for (int i = 0; i < rank_; ++i) z += eta(i) * mats_[static_cast<std::size_t>(i)];
    if (fro(mat_exp(z) - a) > 100 * tol * std::max(1.0, fro(a))) return std::nullopt;
    return eta;
}

RVec wrap_angles(const RVec& eta) {
    RVec out = eta;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        double x = std::fmod(out(i), kTwoPi);
        if (x < 0) x += kTwoPi;
        if (kTwoPi - x < 1e-12) x = 0.0;
        out(i) = x;
    }
    return out;
}

double angle_distance(const RVec& a, const RVec& b) {
    double worst = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double d = std::fmod(std::abs(a(i) - b(i)), kTwoPi);
        worst = std::max(worst, std::min(d, kTwoPi - d));
    }
    return worst;
}

RMat centralizer_in(const SymmetricSpace& s, const std::vector<Mat>& zs, const RMat& span) {
    if (zs.empty() || span.cols() == 0) return span;
    RMat a(static_cast<Eigen::Index>(zs.size()) * s.dim(), span.cols());
    for (std::size_t i = 0; i < zs.size(); ++i)
        a.middleRows(static_cast<Eigen::Index>(i) * s.dim(), s.dim()) = s.algebra().ad(zs[i]) * span;
    RMat c = nullspace(a, s.tol().rank);
    return span * c;
}

RMat max_abelian(const SymmetricSpace& s, const RMat& span, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    RMat chosen(span.rows(), 0);
    std::vector<Mat> mats;
    while (true) {
        RMat c = centralizer_in(s, mats, span);
        RMat rest = c - chosen * (chosen.transpose() * c);
        RMat basis = column_span(rest, s.tol().rank);
        if (basis.cols() == 0) break;
        RVec coef(basis.cols());
        for (Eigen::Index i = 0; i < coef.size(); ++i) coef(i) = nd(rng);
        RVec v = basis * coef;
        v -= chosen * (chosen.transpose() * v);
        v.normalize();
        chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 1);
        chosen.col(chosen.cols() - 1) = v;
        mats.push_back(s.algebra().to_mat(v));
    }
    return chosen;
}

TorusChart max_split_torus(const SymmetricSpace& s, const Mat& u, std::uint64_t seed) {
    const RMat I = RMat::Identity(s.dim(), s.dim());
    RMat tu = theta_x_map(s, u);
    RMat v0 = nullspace(stack({tu + I, s.sigma_map() + I, s.delta_map() - I}), s.tol().rank);
    RMat v1 = nullspace(stack({tu + I, s.sigma_map() + I, s.delta_map() + I}), s.tol().rank);
    // Split directions first, then the compact part of their centralizer.
    RMat b1 = max_abelian(s, v1, seed);
    RMat b0 = max_abelian(s, centralizer_in(s, s.algebra().to_mats(b1), v0), seed + 1);
    std::vector<Mat> b0m = s.algebra().to_mats(b0);
    TorusChart chart;
    chart.base_point = u;
    for (const Mat& x : torus_lattice_basis(b0m, s.tol().eq)) {
        chart.mats.push_back(x);
        chart.kinds.push_back(GenKind::Compact);
    }
    for (const Mat& x : s.algebra().to_mats(b1)) {
        chart.mats.push_back(x);
        chart.kinds.push_back(GenKind::Split);
    }
    for (const Mat& x : chart.mats) chart.generators.push_back(s.algebra().vec(s.algebra().project(x)));
    return chart;
}

TorusChart chart_from_generators(const SymmetricSpace& s, const std::vector<Mat>& gens) {
    TorusChart chart;
    chart.base_point = identity(s.n());
    for (const Mat& g : gens) s.algebra().coords(g, s.tol());
    for (const Mat& x : torus_lattice_basis(gens, s.tol().eq)) {
        chart.mats.push_back(x);
        chart.kinds.push_back(GenKind::Compact);
        chart.generators.push_back(s.algebra().coords(x, s.tol()));
    }
    ChartCheck c = check_chart(s, chart);
    if (!c.ok) throw Error(ErrorKind::ValidationError, "torus generators: " + c.detail);
    return chart;
}

RVec ChartAction::apply(const RVec& eta) const { return linear * eta + translation; }

ChartAction ChartAction::compose(const ChartAction& inner) const {
    return ChartAction{linear * inner.linear, wrap_angles(linear * inner.translation + translation)};
}

bool ChartAction::same(const ChartAction& o, double tol) const {
    if (linear.rows() != o.linear.rows()) return false;
    if (linear.size() && (linear - o.linear).cwiseAbs().maxCoeff() > tol) return false;
    return angle_distance(translation, o.translation) <= tol;
}

bool ChartAction::is_translation(double tol) const {
    return linear.size() == 0 || (linear - RMat::Identity(linear.rows(), linear.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool ChartAction::is_identity(double tol) const {
    return is_translation(tol) && angle_distance(translation, RVec::Zero(translation.size())) <= tol;
}

int WeylGroupTable::find(const ChartAction& a, double tol) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (elements[i].action.same(a, tol)) return static_cast<int>(i);
    return -1;
}

ChartAction chart_action_of(const SymmetricSpace& s, const TorusChart& a0, const TorusCoords& coords, const Mat& h,
                            bool with_translation) {
    const int r = a0.rank();
    Mat hi = inverse(h, s.tol());
    RMat gram(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) gram(i, j) = trace_inner(a0.mats[static_cast<std::size_t>(i)], a0.mats[static_cast<std::size_t>(j)]);
    ChartAction act;
    act.linear.resize(r, r);
    for (int j = 0; j < r; ++j) {
        Mat y = h * a0.mats[static_cast<std::size_t>(j)] * hi;
        RVec b(r);
        for (int i = 0; i < r; ++i) b(i) = trace_inner(y, a0.mats[static_cast<std::size_t>(i)]);
        RVec c = r ? RVec(gram.ldlt().solve(b)) : RVec(0);
        Mat rec = Mat::Zero(y.rows(), y.cols());
        for (int i = 0; i < r; ++i) rec += c(i) * a0.mats[static_cast<std::size_t>(i)];
        double res = fro(y - rec);
        if (!s.near(res, fro(y))) throw Error(ErrorKind::NotNormalizing, "does not normalize the torus (residual " + std::to_string(res) + ")");
        RVec cr = c.array().round().matrix();
        if ((c - cr).cwiseAbs().maxCoeff() > 1e-6) throw Error(ErrorKind::NotNormalizing, "induced action is not integral");
        act.linear.col(j) = cr;
    }
    if (!with_translation) {
        act.translation = RVec::Zero(r);
        return act;
    }
    Mat b = h * inverse(s.theta(h), s.tol());
    auto t = coords.log(b, s.tol().eq);
    if (!t) throw Error(ErrorKind::NotNormalizing, "beta(h) does not lie in the torus");
    act.translation = *t;
    return act;
}

WeylGroupTable weyl_generate(const SymmetricSpace& s, const TorusChart& a0, const std::vector<Mat>& candidates,
                             const WeylOptions& opts) {
    WeylGroupTable tab;
    TorusCoords coords(a0, s.tol().eq);
    const int r = a0.rank();
    const double act_tol = 1e-7;
    std::vector<WeylElement> gens;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Mat& h = candidates[i];
        try {
            if (h.rows() != s.n() || h.cols() != s.n() || !is_finite(h)) throw Error(ErrorKind::NotNormalizing, "wrong shape");
            if (!s.near(fro(s.sigma(h) - h), fro(h))) throw Error(ErrorKind::NotInH, "not fixed by sigma");
            ChartAction act = chart_action_of(s, a0, coords, h, opts.require_beta_in_torus);
            gens.push_back(WeylElement{h, act, {static_cast<int>(i)}});
            tab.accepted.push_back(static_cast<int>(i));
        } catch (const Error& e) {
            tab.rejected.push_back(RejectedCandidate{static_cast<int>(i), e.what()});
        }
    }
    tab.elements.push_back(WeylElement{identity(s.n()), ChartAction{RMat::Identity(r, r), RVec::Zero(r)}, {}});
    for (std::size_t i = 0; i < tab.elements.size(); ++i) {
        for (const WeylElement& g : gens) {
            ChartAction a = g.action.compose(tab.elements[i].action);
            if (tab.find(a, act_tol) >= 0) continue;
            WeylElement e;
            e.rep = g.rep * tab.elements[i].rep;
            e.action = a;
            e.word = tab.elements[i].word;
            e.word.insert(e.word.begin(), g.word.front());
            tab.elements.push_back(std::move(e));
            if (tab.order() > opts.max_order) {
                tab.closed = false;
                throw Error(ErrorKind::NotClosed, "group exceeds max order " + std::to_string(opts.max_order));
            }
        }
    }
    return tab;
}

}  // namespace hsq
