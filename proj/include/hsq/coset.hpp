#pragma once

#include <vector>

#include "hsq/setup.hpp"

namespace hsq {

// A point of X = beta(G) with right Cartan factors x = u exp(Y).
struct PointX {
    Mat mat;
    Mat u;
    AlgVec Y;
    Mat Y_mat;
};

// Checks theta(x) = x^-1, the constraint tags, and the conditions on the Cartan factors.
PointX make_point(const SymmetricSpace& s, const Mat& x);
// Factors only; used for trial points inside iterations.
PointX make_point_unchecked(const SymmetricSpace& s, const Mat& x);

PointX beta(const SymmetricSpace& s, const Mat& g);
PointX star_action(const SymmetricSpace& s, const Mat& h, const PointX& x);
Mat star_raw(const SymmetricSpace& s, const Mat& h, const Mat& x);
Mat lambda_projection(const PointX& x);

Mat theta_x(const SymmetricSpace& s, const Mat& x, const Mat& g);
AlgVec theta_x(const SymmetricSpace& s, const Mat& x, const AlgVec& z);
RMat theta_x_map(const SymmetricSpace& s, const Mat& x);
RMat tau_x_map(const SymmetricSpace& s, const Mat& x);

struct TransversalData {
    PointX base;
    RMat slice_basis;
    RMat isotropy_basis;
    RMat fixed_algebra_basis;
};

TransversalData transversal(const SymmetricSpace& s, const PointX& x);
// Slice space and isotropy for a bare matrix (points of A0 and translated tori).
RMat slice_space(const SymmetricSpace& s, const Mat& x);
RMat isotropy_algebra(const SymmetricSpace& s, const Mat& x);

struct SliceWeight {
    cplx value;
    int generator = 0;
    Eigen::VectorXcd vector;  // algebra coordinates
};

struct SliceWeights {
    std::vector<SliceWeight> weights;  // nonzero eigenvalues only
    std::vector<double> generator_scale;
};

// Eigenvalues of ad(Z) on the slice for an orthonormal isotropy basis, each Z
// rescaled to spectral radius 1 in the defining representation.
SliceWeights slice_weights(const SymmetricSpace& s, const TransversalData& t);

struct PrincipalResult {
    bool principal = false;
    bool algebra_level_only = false;
    double bracket_residual = 0.0;
    std::vector<int> fixing_witnesses;
    std::vector<int> acting_witnesses;  // fix x but move the slice
    SliceWeights weights;
};

PrincipalResult is_principal(const SymmetricSpace& s, const PointX& x);

// Condition number of an eigenvector basis of tau_x (infinity when defective).
double tau_x_eigen_condition(const SymmetricSpace& s, const Mat& x);

// Indices of configured component representatives h with h*x = x.
std::vector<int> fixing_reps(const SymmetricSpace& s, const Mat& x);

}  // namespace hsq
