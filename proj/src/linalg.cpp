#include "hsq/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace hsq {

void check_tol(const Tol& tol) {
    if (!(tol.eq > 0) || tol.eq > 1e-5 || !(tol.rank >= tol.eq) || !(tol.mu > 0))
        throw Error(ErrorKind::ValidationError, "tolerances must satisfy 0 < eq <= 1e-5, rank >= eq, mu > 0");
}

Mat identity(int n) { return Mat::Identity(n, n); }

bool is_finite(const Mat& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!std::isfinite(a.data()[i].real()) || !std::isfinite(a.data()[i].imag())) return false;
    return true;
}

Mat mat_exp(const Mat& a) {
    if (a.isZero(0.0)) return identity(static_cast<int>(a.rows()));
    return a.exp();
}

Mat mat_log_principal(const Mat& p, const Tol& tol) {
    const double scale = std::max(1.0, fro(p));
    if (fro(p - p.adjoint()) > tol.eq * scale * 10)
        throw Error(ErrorKind::NotPositiveDefinite, "matrix is not Hermitian");
    Mat h = (p + p.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const RVec& ev = es.eigenvalues();
    if (ev.minCoeff() <= tol.rank)
        throw Error(ErrorKind::NotPositiveDefinite, "eigenvalue " + std::to_string(ev.minCoeff()) + " below rank threshold");
    RVec l = ev.array().log();
    const Mat& v = es.eigenvectors();
    return v * l.cast<cplx>().asDiagonal() * v.adjoint();
}

Polar polar_decompose(const Mat& g, PolarSide side, const Tol& tol) {
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVec& s = svd.singularValues();
    if (s.size() == 0 || s(s.size() - 1) <= tol.rank * std::max(1.0, s(0)))
        throw Error(ErrorKind::Singular, "matrix not invertible within rank tolerance");
    const Mat& w = svd.matrixU();
    const Mat& v = svd.matrixV();
    RVec l = s.array().log();
    Polar out;
    out.unitary = w * v.adjoint();
    if (side == PolarSide::Right)
        out.herm_log = v * l.cast<cplx>().asDiagonal() * v.adjoint();
    else
        out.herm_log = w * l.cast<cplx>().asDiagonal() * w.adjoint();
    out.herm_log = (out.herm_log + out.herm_log.adjoint()) * 0.5;
    return out;
}

Mat inverse(const Mat& g, const Tol& tol) {
    Eigen::FullPivLU<Mat> lu(g);
    lu.setThreshold(tol.rank * 1e-3);
    if (!lu.isInvertible()) throw Error(ErrorKind::Singular, "matrix not invertible");
    return lu.inverse();
}

RMat nullspace(const RMat& linmap, double rank_tol) {
    const Eigen::Index k = linmap.cols();
    if (k == 0) return RMat(0, 0);
    if (linmap.rows() == 0) return RMat::Identity(k, k);
    Eigen::JacobiSVD<RMat> svd(linmap, Eigen::ComputeFullV);
    const RVec& s = svd.singularValues();
    const double thr = rank_tol * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > thr) ++r;
    RMat n = svd.matrixV().rightCols(k - r);
    // Deterministic signs: the largest-magnitude entry of each column is positive.
    for (Eigen::Index j = 0; j < n.cols(); ++j) {
        Eigen::Index idx;
        n.col(j).cwiseAbs().maxCoeff(&idx);
        if (n(idx, j) < 0) n.col(j) *= -1.0;
    }
    return n;
}

RMat column_span(const RMat& a, double rank_tol) {
    if (a.cols() == 0) return RMat(a.rows(), 0);
    Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeThinU);
    const RVec& s = svd.singularValues();
    const double thr = rank_tol * std::max(1.0, s(0));
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > thr) ++r;
    RMat u = svd.matrixU().leftCols(r);
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index idx;
        u.col(j).cwiseAbs().maxCoeff(&idx);
        if (u(idx, j) < 0) u.col(j) *= -1.0;
    }
    return u;
}

RMat projector(const RMat& basis) { return basis * basis.transpose(); }

double subspace_distance(const RMat& a, const RMat& b) {
    if (a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    if (a.cols() == 0) return 0.0;
    return (projector(a) - projector(b)).norm();
}

double trace_inner(const Mat& x, const Mat& y) {
    return (x.array() * y.array().conjugate()).sum().real();
}

double fro(const Mat& a) { return a.norm(); }

Mat bracket(const Mat& a, const Mat& b) { return a * b - b * a; }

RMat intersect(const RMat& a, const RMat& b, double rank_tol) {
    if (a.cols() == 0 || b.cols() == 0) return RMat(a.rows(), 0);
    RMat resid = b - a * (a.transpose() * b);
    RMat c = nullspace(resid, rank_tol);
    return column_span(b * c, rank_tol);
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace hsq
