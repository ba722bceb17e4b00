#include "hsq/fiber.hpp"

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

namespace hsq {

namespace {

RMat stack3(const RMat& a, const RMat& b, const RMat& c) {
    RMat out(a.rows() + b.rows() + c.rows(), a.cols());
    out << a, b, c;
    return out;
}

// Linear action of Ad(rep) on t (orthonormal columns) and the residual outside t.
RMat induced(const SymmetricSpace& s, const RMat& t, const Mat& rep, double* residual) {
    const auto& alg = s.algebra();
    Mat ri = inverse(rep, s.tol());
    RMat m(t.cols(), t.cols());
    double worst = 0;
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        RVec y = alg.project(rep * alg.to_mat(RVec(t.col(j))) * ri);
        RVec c = t.transpose() * y;
        worst = std::max(worst, (y - t * c).norm());
        m.col(j) = c;
    }
    if (residual) *residual = worst;
    return m;
}

// Gradient ascent of <Ad(k) y0, target> over k in exp(k1); returns k.
Mat bracket_ascent(const SymmetricSpace& s, const RMat& k1, const Mat& y0, const Mat& target, const Mat& k0, int iters) {
    const auto& alg = s.algebra();
    Mat k = k0;
    for (int it = 0; it < iters; ++it) {
        Mat y = k * y0 * k.adjoint();
        RVec z = k1 * (k1.transpose() * alg.project(bracket(y, target)));
        if (z.norm() < 1e-13) break;
        k = mat_exp(-0.2 * alg.to_mat(z)) * k;
    }
    return k;
}

bool is_signed_perm(const RMat& m, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        int nz = 0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double a = std::abs(m(i, j));
            if (a > tol && std::abs(a - 1) > tol) return false;
            if (a > tol) ++nz;
        }
        if (nz != 1) return false;
    }
    return true;
}

bool in_chamber(const std::vector<ChamberConstraint>& ch, const RVec& t, double slack) {
    for (const auto& c : ch) {
        switch (c.kind) {
            case ChamberConstraint::Kind::AtLeastOne:
                if (t(c.i) < -slack) return false;
                break;
            case ChamberConstraint::Kind::Ordered:
                if (t(c.i) > t(c.j) + slack) return false;
                break;
            case ChamberConstraint::Kind::HalfSpace:
                if (c.normal.dot(t) < -slack) return false;
                break;
        }
    }
    return true;
}

}  // namespace

double normalization_residual(const SymmetricSpace& s, const RMat& t_basis, const Mat& rep) {
    double r = 0;
    induced(s, t_basis, rep, &r);
    return r;
}

FiberData fiber_at(const SymmetricSpace& s, const TorusChart& a0, const RVec& u_coords, const std::vector<Mat>& candidates_hu,
                   const FiberOptions& opts) {
    const auto& alg = s.algebra();
    const RMat I = RMat::Identity(s.dim(), s.dim());
    FiberData fd;
    fd.base_coords = u_coords;
    fd.base_point = a0.element(u_coords);
    const Mat& u = fd.base_point;
    RMat tu = theta_x_map(s, u);
    fd.slice_noncompact_basis = nullspace(stack3(tu + I, s.sigma_map() + I, s.delta_map() + I), s.tol().rank);
    fd.isotropy_compact_basis = nullspace(stack3(tu - I, s.sigma_map() - I, s.delta_map() - I), s.tol().rank);
    const RMat& p1 = fd.slice_noncompact_basis;
    const RMat& k1 = fd.isotropy_compact_basis;

    RMat t = max_abelian(s, p1, opts.seed);
    const int r = static_cast<int>(t.cols());
    {
        RMat cent = centralizer_in(s, alg.to_mats(t), p1);
        RMat extra = cent - t * (t.transpose() * cent);
        fd.centralizer_excess = extra.cols() ? static_cast<int>(column_span(extra, s.tol().rank).cols()) : 0;
        fd.maximal = fd.centralizer_excess == 0;
    }

    std::mt19937_64 rng(opts.seed ^ 0xf1be5ULL);
    std::normal_distribution<double> nd(0.0, 1.0);
    RVec treg_c(r);
    for (int i = 0; i < r; ++i) treg_c(i) = nd(rng);
    if (r) treg_c.normalize();
    const Mat treg = alg.to_mat(RVec(t * treg_c));
    auto random_k = [&](double scale) {
        RVec c(k1.cols());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = nd(rng);
        if (c.size()) c *= scale / c.norm();
        return mat_exp(alg.to_mat(RVec(k1 * c)));
    };

    // Generators with representatives: root reflections and candidates fixing u.
    struct Gen {
        RMat m;
        Mat rep;
    };
    std::vector<Gen> gens;
    double worst_rep = 0;
    std::vector<RejectedCandidate> rejected;

    if (r > 0) {
        RMat g1 = column_span((RMat(s.dim(), p1.cols() + k1.cols()) << p1, k1).finished(), s.tol().rank);
        RMat a = g1.transpose() * alg.ad(treg) * g1;
        Eigen::SelfAdjointEigenSolver<RMat> es((a + a.transpose()) / 2);
        std::vector<RMat> adt;
        for (int j = 0; j < r; ++j) adt.push_back(g1.transpose() * alg.ad(alg.to_mat(RVec(t.col(j)))) * g1);
        std::vector<RVec> roots;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (std::abs(es.eigenvalues()(i)) <= 1e-6) continue;
            RVec v = es.eigenvectors().col(i);
            RVec al(r);
            for (int j = 0; j < r; ++j) al(j) = v.dot(adt[static_cast<std::size_t>(j)] * v);
            bool dup = false;
            for (const RVec& b : roots)
                if ((b - al).norm() < 1e-6 || (b + al).norm() < 1e-6) dup = true;
            if (!dup) roots.push_back(al);
        }
        fd.root_count = static_cast<int>(roots.size());
        for (const RVec& al : roots) {
            RMat refl = RMat::Identity(r, r) - 2 * al * al.transpose() / al.squaredNorm();
            Mat target = alg.to_mat(RVec(t * (refl * treg_c)));
            Mat rep;
            double res = 1;
            for (int attempt = 0; attempt < 4 && res > 1e-7; ++attempt) {
                rep = bracket_ascent(s, k1, treg, target, random_k(0.3), opts.max_ascent_iters);
                RMat m = induced(s, t, rep, &res);
                if ((m - refl).norm() > 1e-6) res = std::max(res, (m - refl).norm());
            }
            worst_rep = std::max(worst_rep, res);
            gens.push_back(Gen{refl, rep});
        }
        for (std::size_t ci = 0; ci < candidates_hu.size(); ++ci) {
            const Mat& h = candidates_hu[ci];
            Mat hu = star_raw(s, h, u);
            if (!s.near(fro(hu - u), fro(h) * fro(h))) {
                rejected.push_back({static_cast<int>(ci), "does not fix u"});
                continue;
            }
            if (!s.near(fro(s.delta(h) - h), fro(h))) {
                rejected.push_back({static_cast<int>(ci), "not in the compact isotropy group"});
                continue;
            }
            double res = 0;
            RMat m = induced(s, t, h, &res);
            Mat rep = h;
            if (res > 1e-9) {
                Mat y = h * treg * inverse(h, s.tol());
                Mat k = bracket_ascent(s, k1, y, treg, identity(s.n()), opts.max_ascent_iters);
                rep = k * h;
                m = induced(s, t, rep, &res);
            }
            if (res > 1e-7) {
                rejected.push_back({static_cast<int>(ci), "could not be moved into the normalizer of t (residual " + std::to_string(res) + ")"});
                continue;
            }
            worst_rep = std::max(worst_rep, res);
            gens.push_back(Gen{m, rep});
        }
    }

    // Closure on t coordinates.
    WeylGroupTable& tab = fd.little_weyl;
    tab.rejected = rejected;
    tab.elements.push_back(WeylElement{identity(s.n()), ChartAction{RMat::Identity(r, r), RVec::Zero(r)}, {}});
    for (std::size_t i = 0; i < tab.elements.size(); ++i)
        for (std::size_t g = 0; g < gens.size(); ++g) {
            ChartAction a{gens[g].m * tab.elements[i].action.linear, RVec::Zero(r)};
            if (tab.find(a, 1e-6) >= 0) continue;
            WeylElement e{gens[g].rep * tab.elements[i].rep, a, tab.elements[i].word};
            e.word.insert(e.word.begin(), static_cast<int>(g));
            tab.elements.push_back(std::move(e));
            if (tab.order() > opts.max_order) {
                tab.closed = false;
                throw Error(ErrorKind::NotClosed, "little Weyl group exceeds max order");
            }
        }
    fd.rep_residual = worst_rep;

    // Chamber: look for an orthonormal basis of reflection normals making the group signed permutations.
    if (r > 0) {
        std::vector<RVec> normals;
        for (const auto& e : tab.elements) {
            const RMat& m = e.action.linear;
            Eigen::SelfAdjointEigenSolver<RMat> es((m + m.transpose()) / 2);
            int neg = 0;
            for (Eigen::Index i = 0; i < r; ++i) neg += es.eigenvalues()(i) < -0.5 ? 1 : 0;
            if (neg != 1 || (m.transpose() * m - RMat::Identity(r, r)).norm() > 1e-6 || (m - m.transpose()).norm() > 1e-6) continue;
            RVec nrm = es.eigenvectors().col(0);
            bool dup = false;
            for (const RVec& x : normals)
                if (std::abs(std::abs(x.dot(nrm)) - 1) < 1e-8) dup = true;
            if (!dup) normals.push_back(nrm);
        }
        RMat best;
        double best_score = -1;
        const int nn = static_cast<int>(normals.size());
        for (int size = std::min(r, nn); size >= 0 && best_score < 0; --size) {
            std::vector<int> pick(static_cast<std::size_t>(size));
            std::function<void(int, int)> rec = [&](int pos, int start) {
                if (pos == size) {
                    RMat e(r, r);
                    for (int k = 0; k < size; ++k) e.col(k) = normals[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])];
                    for (int a = 0; a < size; ++a)
                        for (int b = a + 1; b < size; ++b)
                            if (std::abs(e.col(a).dot(e.col(b))) > 1e-8) return;
                    if (size < r) {
                        RMat part = e.leftCols(size);
                        RMat comp = nullspace(part.transpose(), 1e-8);
                        if (size == 0) comp = RMat::Identity(r, r);
                        e.rightCols(r - size) = comp;
                    }
                    for (const auto& el : tab.elements)
                        if (!is_signed_perm(e.transpose() * el.action.linear * e, 1e-6)) return;
                    double score = 0;
                    for (int k = 0; k < r; ++k) {
                        Mat x = alg.to_mat(RVec(t * e.col(k)));
                        Eigen::ComplexEigenSolver<Mat> ce(x, false);
                        score += ce.eigenvalues().cwiseAbs().maxCoeff();
                    }
                    if (score > best_score + 1e-9) {
                        best_score = score;
                        best = e;
                    }
                    return;
                }
                for (int i = start; i < nn; ++i) {
                    pick[static_cast<std::size_t>(pos)] = i;
                    rec(pos + 1, i + 1);
                }
            };
            rec(0, 0);
        }
        if (best_score >= 0) {
            fd.chamber_signed_permutation = true;
            for (int k = 0; k < r; ++k) {
                RVec g = t * best.col(k);
                Eigen::Index idx;
                g.cwiseAbs().maxCoeff(&idx);
                if (g(idx) < 0) best.col(k) *= -1;
            }
            fd.t_basis = t * best;
            for (auto& el : tab.elements) el.action.linear = (best.transpose() * el.action.linear * best).array().round().matrix();
            for (int i = 0; i < r; ++i) {
                RMat flip = RMat::Identity(r, r);
                flip(i, i) = -1;
                if (tab.find(ChartAction{flip, RVec::Zero(r)}, 1e-6) >= 0)
                    fd.chamber.push_back({ChamberConstraint::Kind::AtLeastOne, i, i, RVec(), "r" + std::to_string(i + 1) + " >= 1"});
            }
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    RMat sw = RMat::Identity(r, r);
                    sw(i, i) = sw(j, j) = 0;
                    sw(i, j) = sw(j, i) = 1;
                    if (tab.find(ChartAction{sw, RVec::Zero(r)}, 1e-6) >= 0)
                        fd.chamber.push_back({ChamberConstraint::Kind::Ordered, i, j, RVec(),
                                              "r" + std::to_string(i + 1) + " <= r" + std::to_string(j + 1)});
                }
        } else {
            fd.t_basis = t;
            RVec t0(r);
            for (int i = 0; i < r; ++i) t0(i) = nd(rng);
            for (const RVec& nrm : normals) {
                RVec n = nrm.dot(t0) >= 0 ? nrm : RVec(-nrm);
                std::string txt = "halfspace";
                fd.chamber.push_back({ChamberConstraint::Kind::HalfSpace, 0, 0, n, txt});
            }
        }
        // Fundamental domain check: almost every point has exactly one image in the chamber.
        bool ok = true;
        for (int trial = 0; trial < 200 && ok; ++trial) {
            RVec p(r);
            for (int i = 0; i < r; ++i) p(i) = nd(rng);
            int hits = 0;
            for (const auto& el : tab.elements)
                if (in_chamber(fd.chamber, el.action.linear * p, 0.0)) ++hits;
            ok = hits == 1;
        }
        fd.chamber_verified = ok;
    } else {
        fd.t_basis = t;
        fd.chamber_verified = true;
    }
    return fd;
}

}  // namespace hsq
