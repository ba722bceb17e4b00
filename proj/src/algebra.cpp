#include "hsq/algebra.hpp"

#include <cmath>

namespace hsq {

namespace {

Eigen::Map<const Eigen::VectorXcd> flat(const Mat& m) { return {m.data(), m.size()}; }

}  // namespace

AlgebraBasis::AlgebraBasis(const std::vector<Mat>& spanning, const Tol& tol) {
    if (spanning.empty()) throw Error(ErrorKind::InvalidSetup, "empty algebra basis");
    n_ = static_cast<int>(spanning.front().rows());
    for (const Mat& m : spanning) {
        if (m.rows() != n_ || m.cols() != n_) throw Error(ErrorKind::InvalidSetup, "basis matrices differ in size");
        if (!is_finite(m)) throw Error(ErrorKind::InvalidSetup, "non-finite basis matrix");
        Mat v = m;
        // two passes of modified Gram-Schmidt
        for (int pass = 0; pass < 2; ++pass)
            for (const Mat& e : elems_) v -= trace_inner(v, e) * e;
        const double nv = fro(v);
        if (nv <= tol.rank * std::max(1.0, fro(m))) continue;
        elems_.push_back(v / nv);
    }
    dim_ = static_cast<int>(elems_.size());
    stacked_.resize(static_cast<Eigen::Index>(n_) * n_, dim_);
    for (int j = 0; j < dim_; ++j) stacked_.col(j) = flat(elems_[static_cast<std::size_t>(j)]);
    std::uint64_t h = fnv1a(&n_, sizeof n_);
    for (const Mat& e : elems_) h = fnv1a(e.data(), sizeof(cplx) * static_cast<std::size_t>(e.size()), h);
    id_ = h;
}

Mat AlgebraBasis::to_mat(const RVec& c) const {
    Mat out = Mat::Zero(n_, n_);
    for (int j = 0; j < dim_; ++j) out += c(j) * elems_[static_cast<std::size_t>(j)];
    return out;
}

Mat AlgebraBasis::to_mat(const AlgVec& v) const {
    if (v.basis_id != id_) throw Error(ErrorKind::BasisMismatch, "vector belongs to another basis");
    return to_mat(v.coords);
}

RVec AlgebraBasis::project(const Mat& m, double* residual) const {
    RVec c = (stacked_.adjoint() * flat(m)).real();
    if (residual) {
        Eigen::VectorXcd r = flat(m) - stacked_ * c.cast<cplx>();
        *residual = r.norm();
    }
    return c;
}

AlgVec AlgebraBasis::coords(const Mat& m, const Tol& tol) const {
    double res = 0;
    RVec c = project(m, &res);
    if (res > tol.eq * std::max(1.0, fro(m)))
        throw Error(ErrorKind::NotInAlgebra, "projection residual " + std::to_string(res));
    return AlgVec{c, id_};
}

RMat AlgebraBasis::linear_map(const std::function<Mat(const Mat&)>& f) const {
    RMat out(dim_, dim_);
    for (int j = 0; j < dim_; ++j) out.col(j) = project(f(elems_[static_cast<std::size_t>(j)]));
    return out;
}

RMat AlgebraBasis::ad(const Mat& x) const {
    return linear_map([&](const Mat& b) { return bracket(x, b); });
}

RMat AlgebraBasis::conj_map(const Mat& g, const Mat& ginv) const {
    return linear_map([&](const Mat& b) -> Mat { return g * b * ginv; });
}

std::vector<Mat> AlgebraBasis::to_mats(const RMat& cols) const {
    std::vector<Mat> out;
    out.reserve(static_cast<std::size_t>(cols.cols()));
    for (Eigen::Index j = 0; j < cols.cols(); ++j) out.push_back(to_mat(RVec(cols.col(j))));
    return out;
}

double inner_product(const AlgVec& x, const AlgVec& y) {
    if (x.basis_id != y.basis_id || x.coords.size() != y.coords.size())
        throw Error(ErrorKind::BasisMismatch, "inner product across different bases");
    return x.coords.dot(y.coords);
}

AlgVec adjoint(const AlgebraBasis& b, const Mat& g, const AlgVec& x, const Tol& tol) {
    Mat gi = inverse(g, tol);
    return b.coords(g * b.to_mat(x) * gi, tol);
}

}  // namespace hsq
