#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hsq/error.hpp"

namespace hsq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Tol {
    double eq = 1e-9;
    double rank = 1e-7;
    double mu = 1e-7;
};

void check_tol(const Tol& tol);

Mat identity(int n);
bool is_finite(const Mat& a);

// Scaling-and-squaring Pade exponential.
Mat mat_exp(const Mat& a);

// Hermitian logarithm of a Hermitian positive-definite matrix.
Mat mat_log_principal(const Mat& p, const Tol& tol);

enum class PolarSide { Left, Right };

struct Polar {
    Mat unitary;
    Mat herm_log;
};

// Right: g = u exp(Y), Y = log(g*g)/2.  Left: g = exp(Y) u, Y = log(g g*)/2.
Polar polar_decompose(const Mat& g, PolarSide side, const Tol& tol);

Mat inverse(const Mat& g, const Tol& tol);

// Orthonormal kernel basis (columns). Singular values at or below
// tol * max(1, largest) count as zero.
RMat nullspace(const RMat& linmap, double rank_tol);

// Orthonormal basis of the column span.
RMat column_span(const RMat& a, double rank_tol);

RMat projector(const RMat& basis);
double subspace_distance(const RMat& a, const RMat& b);

// Re tr(x y*)
double trace_inner(const Mat& x, const Mat& y);
double fro(const Mat& a);
Mat bracket(const Mat& a, const Mat& b);

// Columns of basis2 expressed inside span(basis1) intersected with span(basis2).
RMat intersect(const RMat& a, const RMat& b, double rank_tol);

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ULL);

}  // namespace hsq
