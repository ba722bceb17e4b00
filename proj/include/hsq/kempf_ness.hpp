#pragma once

#include <vector>

#include "hsq/coset.hpp"

namespace hsq {

// rho(g) = |Y|^2 / 2 with g = u exp(Y) (right polar form).
double rho(const Mat& g, const Tol& tol);

// <xi, eta> with g = u exp(i eta); xi is a skew-Hermitian matrix of the compact form.
double nu_xi(const Mat& g, const Mat& xi, const Tol& tol);

struct MomentValue {
    RVec coords;  // over the orthonormal basis decomposition().u_h
    double norm_sq = 0.0;
};

MomentValue mu(const SymmetricSpace& s, const PointX& x);
bool in_kempf_ness(const SymmetricSpace& s, const PointX& x);

struct FlowOptions {
    int max_iters = 10000;
    double mu_tol = 1e-7;
    double fd_step = 1e-6;
    double grad_tol = 1e-10;
    double armijo_c = 1e-4;
    double max_move = 1.0;  // bound on |t zeta| per step
    bool keep_iterates = true;
};

enum class FlowStatus { Converged, Stagnated, MaxIters, NoDescent, Stalled };
const char* flow_status_name(FlowStatus s);

struct FlowStep {
    PointX point;
    double norm_sq = 0.0;
    double step = 0.0;
};

struct FlowTrace {
    std::vector<FlowStep> iterates;  // starts with x0
    bool converged = false;
    double residual = 0.0;  // final |mu|
    FlowStatus status = FlowStatus::MaxIters;
    double grad_norm = 0.0;
    int iterations = 0;
    PointX last;
};

// Descent of f = |mu|^2 along H: x <- exp(-s zeta) * x.
FlowTrace gradient_flow(const SymmetricSpace& s, const PointX& x0, const FlowOptions& opts);

struct ClosedOrbitResult {
    bool closed = false;
    PointX representative;
    FlowTrace trace;
};

// Dimension of the H-orbit through x: numerical rank of Z -> Z x - x theta(Z) on h.
int orbit_dimension(const SymmetricSpace& s, const Mat& x, double rel_tol);

ClosedOrbitResult is_orbit_closed(const SymmetricSpace& s, const PointX& x, const FlowOptions& opts);

SliceWeights slice_rep_weights(const SymmetricSpace& s, const PointX& x);

}  // namespace hsq
