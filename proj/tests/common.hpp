#pragma once

#include <random>

#include "hsq/atlas.hpp"
#include "hsq/config.hpp"
#include "hsq/golden.hpp"

namespace hsq::testing {

constexpr double kPi = 3.14159265358979323846;

inline const Config& fixture(const std::string& name) {
    static const Config sl2 = load_config("builtin:sl2");
    static const Config sl8 = load_config("builtin:sl8");
    return name == "sl2" ? sl2 : sl8;
}

inline const SymmetricSpace& space(const std::string& name) {
    static const SymmetricSpace sl2 = SymmetricSpace::create(fixture("sl2").group, fixture("sl2").numeric.tol);
    static const SymmetricSpace sl8 = SymmetricSpace::create(fixture("sl8").group, fixture("sl8").numeric.tol);
    return name == "sl2" ? sl2 : sl8;
}

inline const TorusChart& a0(const std::string& name) {
    static const TorusChart sl2 = chart_from_generators(space("sl2"), fixture("sl2").torus.a0_generators);
    static const TorusChart sl8 = chart_from_generators(space("sl8"), fixture("sl8").torus.a0_generators);
    return name == "sl2" ? sl2 : sl8;
}

inline Mat diag2(cplx a, cplx b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

inline RVec vec(std::initializer_list<double> xs) {
    RVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

inline RVec gaussian(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    RVec v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

// Random element of the identity component of G (exp of a small algebra element).
inline Mat random_group(const SymmetricSpace& s, std::mt19937_64& rng, double scale = 0.5) {
    return mat_exp(s.algebra().to_mat(gaussian(rng, s.dim(), scale)));
}

// Random element of H0 (exp of h).
inline Mat random_h(const SymmetricSpace& s, std::mt19937_64& rng, double scale = 0.5) {
    const RMat& h = s.decomposition().h;
    return mat_exp(s.algebra().to_mat(RVec(h * gaussian(rng, static_cast<int>(h.cols()), scale))));
}

inline Mat random_h_compact(const SymmetricSpace& s, std::mt19937_64& rng, double scale = 0.5) {
    const RMat& h = s.decomposition().h_g0;
    if (h.cols() == 0) return identity(s.n());
    return mat_exp(s.algebra().to_mat(RVec(h * gaussian(rng, static_cast<int>(h.cols()), scale))));
}

// Random point beta(g) of X.
inline PointX random_point(const SymmetricSpace& s, std::mt19937_64& rng, double scale = 0.5) {
    return beta(s, random_group(s, rng, scale));
}

inline RVec random_angles(std::mt19937_64& rng, int r) {
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    RVec v(r);
    for (int i = 0; i < r; ++i) v(i) = u(rng);
    return v;
}

}  // namespace hsq::testing
