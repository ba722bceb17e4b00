#pragma once

#include <string>
#include <vector>

#include "hsq/torus.hpp"

namespace hsq {

struct ChamberConstraint {
    enum class Kind { AtLeastOne, Ordered, HalfSpace } kind = Kind::AtLeastOne;
    int i = 0;
    int j = 0;
    RVec normal;  // HalfSpace: normal . t >= 0
    std::string text;
};

struct FiberData {
    RVec base_coords;
    Mat base_point;
    RMat slice_noncompact_basis;  // S_u ∩ r0
    RMat isotropy_compact_basis;  // h ∩ k^(u) ∩ g0
    RMat t_basis;                 // maximal abelian, adapted to the chamber
    int centralizer_excess = 0;  // dimension of the centralizer of t in S_u ∩ r0 beyond t
    bool maximal = true;
    int root_count = 0;
    WeylGroupTable little_weyl;  // linear actions on t coordinates
    std::vector<ChamberConstraint> chamber;
    bool chamber_signed_permutation = false;
    bool chamber_verified = false;
    double rep_residual = 0.0;  // worst normalization residual of the representatives
};

struct FiberOptions {
    std::uint64_t seed = 1;
    int max_order = 1024;
    int max_ascent_iters = 20000;
};

// Fiber of the projection to X0 over u = exp(u_coords) in A0: exp(t)/W(S, t) data.
FiberData fiber_at(const SymmetricSpace& s, const TorusChart& a0, const RVec& u_coords,
                   const std::vector<Mat>& candidates_hu, const FiberOptions& opts);

// Does the element of the compact isotropy group given by rep fix u and map t to itself?
double normalization_residual(const SymmetricSpace& s, const RMat& t_basis, const Mat& rep);

}  // namespace hsq
