#pragma once

#include <functional>
#include <vector>

#include "hsq/linalg.hpp"

namespace hsq {

struct AlgVec {
    RVec coords;
    std::uint64_t basis_id = 0;
};

// Real Lie algebra inside n x n complex matrices with an ordered basis that is
// orthonormal for Re tr(x y*).
class AlgebraBasis {
public:
    AlgebraBasis() = default;
    // Gram-Schmidt in the given order; dependent elements are dropped.
    AlgebraBasis(const std::vector<Mat>& spanning, const Tol& tol);

    int dim() const { return dim_; }
    int n() const { return n_; }
    std::uint64_t id() const { return id_; }
    const Mat& element(int j) const { return elems_[static_cast<std::size_t>(j)]; }
    const std::vector<Mat>& elements() const { return elems_; }

    Mat to_mat(const RVec& c) const;
    Mat to_mat(const AlgVec& v) const;
    AlgVec vec(const RVec& c) const { return AlgVec{c, id_}; }

    // Orthogonal projection coordinates and the residual norm of m outside the span.
    RVec project(const Mat& m, double* residual = nullptr) const;
    // Throws NotInAlgebra when the residual exceeds tol.eq * max(1, |m|).
    AlgVec coords(const Mat& m, const Tol& tol) const;

    // Matrix of a real-linear map on coordinates: column j is the image of basis j.
    RMat linear_map(const std::function<Mat(const Mat&)>& f) const;
    RMat ad(const Mat& x) const;
    RMat conj_map(const Mat& g, const Mat& ginv) const;

    // Basis columns (coordinate vectors) to matrices.
    std::vector<Mat> to_mats(const RMat& cols) const;

private:
    int n_ = 0;
    int dim_ = 0;
    std::uint64_t id_ = 0;
    std::vector<Mat> elems_;
    Mat stacked_;  // n^2 x dim, column j = vec(element j)
};

double inner_product(const AlgVec& x, const AlgVec& y);
AlgVec adjoint(const AlgebraBasis& b, const Mat& g, const AlgVec& x, const Tol& tol);

}  // namespace hsq
