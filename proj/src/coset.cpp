#include "hsq/coset.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace hsq {

namespace {

RMat stack2(const RMat& a, const RMat& b) {
    RMat out(a.rows() + b.rows(), a.cols());
    out << a, b;
    return out;
}

}  // namespace

PointX make_point_unchecked(const SymmetricSpace& s, const Mat& x) {
    Polar p = polar_decompose(x, PolarSide::Right, s.tol());
    PointX out;
    out.mat = x;
    out.u = p.unitary;
    out.Y_mat = p.herm_log;
    out.Y = s.algebra().vec(s.algebra().project(p.herm_log));
    return out;
}

PointX make_point(const SymmetricSpace& s, const Mat& x) {
    if (x.rows() != s.n() || x.cols() != s.n() || !is_finite(x))
        throw Error(ErrorKind::MembershipViolation, "point has wrong shape or non-finite entries");
    std::string why;
    if (!satisfies_constraints(s.spec(), x, s.tol(), &why)) throw Error(ErrorKind::MembershipViolation, "point not in G: " + why);
    const double scale = fro(x) * fro(x);
    double r = fro(s.theta(x) * x - identity(s.n()));
    if (!s.near(r, scale)) throw Error(ErrorKind::MembershipViolation, "theta(x) x != I, residual " + std::to_string(r));
    PointX p = make_point_unchecked(s, x);
    double ry = 0;
    s.algebra().project(p.Y_mat, &ry);
    if (!s.near(ry, fro(p.Y_mat))) throw Error(ErrorKind::MembershipViolation, "Cartan factor Y not in the algebra");
    r = fro(s.theta(p.u) * p.u - identity(s.n()));
    if (!s.near(r, scale)) throw Error(ErrorKind::MembershipViolation, "theta(u) != u^-1, residual " + std::to_string(r));
    r = fro(s.theta_alg(p.Y_mat) + p.u * p.Y_mat * p.u.adjoint());
    if (!s.near(r, scale)) throw Error(ErrorKind::MembershipViolation, "theta(Y) != -Ad(u)Y, residual " + std::to_string(r));
    return p;
}

PointX beta(const SymmetricSpace& s, const Mat& g) {
    std::string why;
    if (g.rows() != s.n() || g.cols() != s.n() || !satisfies_constraints(s.spec(), g, s.tol(), &why))
        throw Error(ErrorKind::MembershipViolation, "element not in G: " + why);
    Mat x = g * inverse(s.theta(g), s.tol());
    return make_point(s, x);
}

Mat star_raw(const SymmetricSpace& s, const Mat& h, const Mat& x) {
    return h * x * inverse(s.theta(h), s.tol());
}

PointX star_action(const SymmetricSpace& s, const Mat& h, const PointX& x) {
    std::string why;
    if (h.rows() != s.n() || h.cols() != s.n()) throw Error(ErrorKind::NotInH, "wrong shape");
    double r = fro(s.sigma(h) - h);
    if (!s.near(r, fro(h)) || !satisfies_constraints(s.spec(), h, s.tol(), &why))
        throw Error(ErrorKind::NotInH, "element not in H: residual " + std::to_string(r) + " " + why);
    return make_point(s, star_raw(s, h, x.mat));
}

Mat lambda_projection(const PointX& x) { return x.u; }

Mat theta_x(const SymmetricSpace& s, const Mat& x, const Mat& g) {
    return x * s.theta(g) * inverse(x, s.tol());
}

AlgVec theta_x(const SymmetricSpace& s, const Mat& x, const AlgVec& z) {
    Mat xi = inverse(x, s.tol());
    return s.algebra().coords(x * s.theta_alg(s.algebra().to_mat(z)) * xi, s.tol());
}

RMat theta_x_map(const SymmetricSpace& s, const Mat& x) {
    Mat xi = inverse(x, s.tol());
    return s.algebra().linear_map([&](const Mat& b) -> Mat { return x * s.theta_alg(b) * xi; });
}

RMat tau_x_map(const SymmetricSpace& s, const Mat& x) { return theta_x_map(s, x) * s.sigma_map(); }

RMat slice_space(const SymmetricSpace& s, const Mat& x) {
    const RMat I = RMat::Identity(s.dim(), s.dim());
    return nullspace(stack2(theta_x_map(s, x) + I, s.sigma_map() + I), s.tol().rank);
}

RMat isotropy_algebra(const SymmetricSpace& s, const Mat& x) {
    const RMat I = RMat::Identity(s.dim(), s.dim());
    return nullspace(stack2(theta_x_map(s, x) - I, s.sigma_map() - I), s.tol().rank);
}

TransversalData transversal(const SymmetricSpace& s, const PointX& x) {
    const RMat I = RMat::Identity(s.dim(), s.dim());
    RMat tx = theta_x_map(s, x.mat);
    TransversalData t;
    t.base = x;
    t.slice_basis = nullspace(stack2(tx + I, s.sigma_map() + I), s.tol().rank);
    t.isotropy_basis = nullspace(stack2(tx - I, s.sigma_map() - I), s.tol().rank);
    t.fixed_algebra_basis = nullspace(tx * s.sigma_map() - I, s.tol().rank);
    return t;
}

SliceWeights slice_weights(const SymmetricSpace& s, const TransversalData& t) {
    SliceWeights out;
    const RMat& S = t.slice_basis;
    if (S.cols() == 0) return out;
    for (Eigen::Index g = 0; g < t.isotropy_basis.cols(); ++g) {
        Mat z = s.algebra().to_mat(RVec(t.isotropy_basis.col(g)));
        Eigen::ComplexEigenSolver<Mat> ez(z, false);
        double radius = ez.eigenvalues().cwiseAbs().maxCoeff();
        out.generator_scale.push_back(radius);
        if (radius <= s.tol().rank) continue;
        RMat a = S.transpose() * s.algebra().ad(z / radius) * S;
        Eigen::EigenSolver<RMat> es(a, true);
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            cplx ev = es.eigenvalues()(i);
            if (std::abs(ev) <= s.tol().rank) continue;
            SliceWeight w;
            w.value = ev;
            w.generator = static_cast<int>(g);
            w.vector = S.cast<cplx>() * es.eigenvectors().col(i);
            out.weights.push_back(w);
        }
    }
    return out;
}

std::vector<int> fixing_reps(const SymmetricSpace& s, const Mat& x) {
    std::vector<int> out;
    const auto& reps = s.spec().component_reps;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        Mat hx = star_raw(s, reps[i], x);
        if (s.near(fro(hx - x), fro(x) * fro(reps[i]) * fro(reps[i]))) out.push_back(static_cast<int>(i));
    }
    return out;
}

PrincipalResult is_principal(const SymmetricSpace& s, const PointX& x) {
    TransversalData t = transversal(s, x);
    PrincipalResult out;
    double worst = 0;
    const auto& alg = s.algebra();
    for (Eigen::Index g = 0; g < t.isotropy_basis.cols(); ++g) {
        Mat z = alg.to_mat(RVec(t.isotropy_basis.col(g)));
        for (Eigen::Index j = 0; j < t.slice_basis.cols(); ++j)
            worst = std::max(worst, fro(bracket(z, alg.to_mat(RVec(t.slice_basis.col(j))))));
    }
    out.bracket_residual = worst;
    bool ok = s.near(worst);
    out.fixing_witnesses = fixing_reps(s, x.mat);
    for (int i : out.fixing_witnesses) {
        const Mat& h = s.spec().component_reps[static_cast<std::size_t>(i)];
        Mat hi = inverse(h, s.tol());
        double r = 0;
        for (Eigen::Index j = 0; j < t.slice_basis.cols(); ++j) {
            Mat sj = alg.to_mat(RVec(t.slice_basis.col(j)));
            r = std::max(r, fro(h * sj * hi - sj));
        }
        if (!s.near(r, fro(h) * fro(hi))) {
            out.acting_witnesses.push_back(i);
            ok = false;
        }
    }
    out.algebra_level_only = s.spec().component_reps.empty();
    out.principal = ok;
    out.weights = slice_weights(s, t);
    return out;
}

double tau_x_eigen_condition(const SymmetricSpace& s, const Mat& x) {
    RMat m = tau_x_map(s, x);
    Eigen::EigenSolver<RMat> es(m, true);
    Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    const RVec& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0) return std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd rec = v * es.eigenvalues().asDiagonal() * v.inverse();
    if ((rec - m.cast<cplx>()).norm() > s.tol().rank * std::max(1.0, m.norm())) return std::numeric_limits<double>::infinity();
    return sv(0) / sv(sv.size() - 1);
}

}  // namespace hsq
