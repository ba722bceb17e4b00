#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsq/coset.hpp"

namespace hsq {

enum class GenKind { Compact, Split };
const char* gen_kind_name(GenKind k);

// exp(sum c_i X_i) * base_point. Compact generators come first and have period 2*pi.
struct TorusChart {
    std::vector<AlgVec> generators;
    std::vector<Mat> mats;
    std::vector<GenKind> kinds;
    Mat base_point;

    int rank() const { return static_cast<int>(mats.size()); }
    int compact_dim() const;
    int split_dim() const { return rank() - compact_dim(); }
    Mat element(const RVec& c) const;
    Mat exp_part(const RVec& c) const;
};

struct ChartCheck {
    bool ok = true;
    double bracket_residual = 0.0;
    double period_residual = 0.0;
    double split_residual = 0.0;
    double delta_residual = 0.0;
    std::string detail;
};

// Abelian, periodic compact part, (sigma, theta_base)-split and delta-stable generators.
ChartCheck check_chart(const SymmetricSpace& s, const TorusChart& chart);

// Integer Hermite normal form on rows: T * a = [h; 0] with T unimodular.
struct Hnf {
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> h;
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> t;
    int rank = 0;
};
Hnf hermite_normal_form(const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& a);

// p/q with q <= max_den and |x - p/q| <= tol.
std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den, double tol);

// Replaces commuting skew-Hermitian generators by a basis of the same span whose
// exponential has period lattice 2*pi Z^r. Throws NotClosed when the span does not
// exponentiate to a closed torus. Generators that already form such a basis are kept.
std::vector<Mat> torus_lattice_basis(const std::vector<Mat>& gens, double tol);

// Coordinates on a compact torus chart with base e.
class TorusCoords {
public:
    TorusCoords() = default;
    TorusCoords(const TorusChart& chart, double tol);
    // eta with exp(sum eta_i X_i) = a (components reduced to [0, 2pi)), or nothing if a is not in the torus.
    std::optional<RVec> log(const Mat& a, double tol) const;
    int rank() const { return rank_; }

private:
    int rank_ = 0;
    std::vector<Mat> mats_;
    Mat v_;  // joint eigenbasis
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> solve_;  // r x m integer
};

RVec wrap_angles(const RVec& eta);
double angle_distance(const RVec& a, const RVec& b);

// Greedy maximal abelian subspace of span(cols) (coordinate columns), seeded.
RMat max_abelian(const SymmetricSpace& s, const RMat& span, std::uint64_t seed);
// Coordinates of the centralizer of the matrices zs inside span(cols).
RMat centralizer_in(const SymmetricSpace& s, const std::vector<Mat>& zs, const RMat& span);

// Maximal torus of X through u with the largest split part.
TorusChart max_split_torus(const SymmetricSpace& s, const Mat& u, std::uint64_t seed);
// Chart from configured generators (lattice-normalized).
TorusChart chart_from_generators(const SymmetricSpace& s, const std::vector<Mat>& gens);

struct ChartAction {
    RMat linear;
    RVec translation;

    RVec apply(const RVec& eta) const;
    ChartAction compose(const ChartAction& inner) const;  // this after inner
    bool same(const ChartAction& o, double tol) const;
    bool is_identity(double tol) const;
    bool is_translation(double tol) const;
};

struct WeylElement {
    Mat rep;
    ChartAction action;
    std::vector<int> word;  // generator indices, rightmost applied first
};

struct RejectedCandidate {
    int index = 0;
    std::string reason;
};

struct WeylGroupTable {
    std::vector<WeylElement> elements;
    int identity_index = 0;
    std::vector<RejectedCandidate> rejected;
    std::vector<int> accepted;  // candidate indices used as generators
    bool closed = true;

    int order() const { return static_cast<int>(elements.size()); }
    // Index of the element with the given action, or -1.
    int find(const ChartAction& a, double tol) const;
};

struct WeylOptions {
    int max_order = 1024;
    bool require_beta_in_torus = true;  // the *-Weyl group criterion
};

// Induced chart action of h on A0 (h * exp(eta) = exp(L eta + t)); throws NotNormalizing.
ChartAction chart_action_of(const SymmetricSpace& s, const TorusChart& a0, const TorusCoords& coords, const Mat& h,
                            bool with_translation = true);

WeylGroupTable weyl_generate(const SymmetricSpace& s, const TorusChart& a0, const std::vector<Mat>& candidates,
                             const WeylOptions& opts);

}  // namespace hsq
