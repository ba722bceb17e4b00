#include "hsq/kempf_ness.hpp"

#include <algorithm>
#include <cmath>

namespace hsq {

double rho(const Mat& g, const Tol& tol) {
    Polar p = polar_decompose(g, PolarSide::Right, tol);
    return 0.5 * p.herm_log.squaredNorm();
}

double nu_xi(const Mat& g, const Mat& xi, const Tol& tol) {
    Polar p = polar_decompose(g, PolarSide::Right, tol);
    Mat eta = cplx(0, -1) * p.herm_log;
    return trace_inner(xi, eta);
}

MomentValue mu(const SymmetricSpace& s, const PointX& x) {
    const auto& uh = s.decomposition().u_h;
    MomentValue out;
    out.coords.resize(static_cast<Eigen::Index>(uh.size()));
    Mat eta = cplx(0, -1) * x.Y_mat;
    Mat ui = x.u.adjoint();
    for (std::size_t j = 0; j < uh.size(); ++j) {
        Mat d = s.theta_alg(uh[j]) - ui * uh[j] * x.u;
        out.coords(static_cast<Eigen::Index>(j)) = trace_inner(eta, d);
    }
    out.norm_sq = out.coords.squaredNorm();
    return out;
}

bool in_kempf_ness(const SymmetricSpace& s, const PointX& x) {
    Polar p = polar_decompose(x.mat, PolarSide::Left, s.tol());
    const Mat& xi = p.herm_log;
    const Mat& u = p.unitary;
    const double scale = std::max(1.0, fro(xi));
    double r = 0;
    s.algebra().project(xi, &r);
    if (!s.near(r, scale)) return false;
    if (!s.near(fro(s.delta_alg(xi) + xi), scale)) return false;
    if (!s.near(fro(s.sigma_alg(xi) + xi), scale)) return false;
    if (!s.near(fro(u * s.theta_alg(xi) * u.adjoint() + xi), scale)) return false;
    if (!s.near(fro(u * u.adjoint() - identity(s.n())))) return false;
    return s.near(fro(s.theta(u) * u - identity(s.n())));
}

const char* flow_status_name(FlowStatus st) {
    switch (st) {
        case FlowStatus::Converged: return "converged";
        case FlowStatus::Stagnated: return "stagnated";
        case FlowStatus::MaxIters: return "max_iters";
        case FlowStatus::NoDescent: return "no_descent";
        case FlowStatus::Stalled: return "stalled";
    }
    return "?";
}

namespace {

double f_at(const SymmetricSpace& s, const Mat& x) { return mu(s, make_point_unchecked(s, x)).norm_sq; }

Mat move(const SymmetricSpace& s, const Mat& zeta, double t, const Mat& x) {
    return star_raw(s, mat_exp(-t * zeta), x);
}

}  // namespace

FlowTrace gradient_flow(const SymmetricSpace& s, const PointX& x0, const FlowOptions& opts) {
    FlowTrace tr;
    std::vector<Mat> hb = s.algebra().to_mats(s.decomposition().h);
    PointX x = x0;
    double f = mu(s, x).norm_sq;
    tr.iterates.push_back(FlowStep{x, f, 0.0});
    double step = 1.0;
    bool progressed = false;
    auto finish = [&](FlowStatus st) {
        tr.status = st;
        tr.converged = st == FlowStatus::Converged;
        tr.residual = std::sqrt(f);
        tr.last = x;
        if (!opts.keep_iterates && tr.iterates.back().point.mat != x.mat) tr.iterates.push_back(FlowStep{x, f, step});
        return tr;
    };
    if (std::sqrt(f) < opts.mu_tol) return finish(FlowStatus::Converged);
    if (hb.empty()) return finish(FlowStatus::Stagnated);

    for (int it = 0; it < opts.max_iters; ++it) {
        RVec g(static_cast<Eigen::Index>(hb.size()));
        const double e = opts.fd_step;
        try {
            for (std::size_t j = 0; j < hb.size(); ++j) {
                double fp = f_at(s, star_raw(s, mat_exp(e * hb[j]), x.mat));
                double fm = f_at(s, star_raw(s, mat_exp(-e * hb[j]), x.mat));
                g(static_cast<Eigen::Index>(j)) = (fp - fm) / (2 * e);
            }
        } catch (const Error&) {
            return finish(FlowStatus::Stalled);
        }
        tr.grad_norm = g.norm();
        if (tr.grad_norm < opts.grad_tol) return finish(FlowStatus::Stagnated);
        Mat zeta = Mat::Zero(s.n(), s.n());
        for (std::size_t j = 0; j < hb.size(); ++j) zeta += g(static_cast<Eigen::Index>(j)) * hb[j];

        // Each move stays within unit distance in h; long jumps land on
        // ill-conditioned points near the boundary of an orbit.
        const double t_max = opts.max_move / fro(zeta);
        double t = std::min(progressed ? 2 * step : 1.0, t_max);
        bool accepted = false;
        Mat xn;
        double fn = 0;
        while (t > 1e-30) {
            xn = move(s, zeta, t, x.mat);
            if (is_finite(xn)) {
                try {
                    fn = f_at(s, xn);
                    if (fn <= f - opts.armijo_c * t * tr.grad_norm * tr.grad_norm) {
                        accepted = true;
                        break;
                    }
                } catch (const Error&) {
                }
            }
            t *= 0.5;
        }
        if (!accepted) return finish(progressed ? FlowStatus::Stalled : FlowStatus::NoDescent);
        progressed = true;
        step = t;
        x = make_point_unchecked(s, xn);
        f = fn;
        ++tr.iterations;
        if (opts.keep_iterates) tr.iterates.push_back(FlowStep{x, f, t});
        if (std::sqrt(f) < opts.mu_tol) return finish(FlowStatus::Converged);
    }
    return finish(FlowStatus::MaxIters);
}

int orbit_dimension(const SymmetricSpace& s, const Mat& x, double rel_tol) {
    const auto& hb = s.decomposition().h;
    const int n = s.n();
    RMat tangent(2 * n * n, hb.cols());
    for (Eigen::Index j = 0; j < hb.cols(); ++j) {
        Mat z = s.algebra().to_mat(RVec(hb.col(j)));
        Mat d = z * x - x * s.theta_alg(z);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                tangent(2 * (r * n + c), j) = d(r, c).real();
                tangent(2 * (r * n + c) + 1, j) = d(r, c).imag();
            }
    }
    if (tangent.cols() == 0) return 0;
    RVec sv = Eigen::JacobiSVD<RMat>(tangent).singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > rel_tol * sv(0) ? 1 : 0;
    return rank;
}

ClosedOrbitResult is_orbit_closed(const SymmetricSpace& s, const PointX& x, const FlowOptions& opts) {
    ClosedOrbitResult out;
    out.trace = gradient_flow(s, x, opts);
    out.representative = out.trace.last;
    switch (out.trace.status) {
        case FlowStatus::Converged: {
            // A small |mu| is also reached on the way to the boundary of a
            // non-closed orbit, where the orbit dimension drops. Push the flow
            // to working precision and compare orbit dimensions.
            FlowOptions deep = opts;
            deep.mu_tol = std::min(opts.mu_tol, 1e-13);
            deep.max_iters = 200;
            deep.keep_iterates = false;
            PointX limit = gradient_flow(s, out.trace.last, deep).last;
            constexpr double kOrbitRankTol = 1e-4;
            out.closed = orbit_dimension(s, limit.mat, kOrbitRankTol) == orbit_dimension(s, x.mat, kOrbitRankTol);
            break;
        }
        case FlowStatus::Stagnated: out.closed = false; break;
        default:
            throw Error(ErrorKind::Inconclusive, std::string("flow ended with status ") + flow_status_name(out.trace.status) +
                                                     ", |mu| = " + std::to_string(out.trace.residual) +
                                                     ", |grad| = " + std::to_string(out.trace.grad_norm));
    }
    return out;
}

SliceWeights slice_rep_weights(const SymmetricSpace& s, const PointX& x) {
    return slice_weights(s, transversal(s, x));
}

}  // namespace hsq
