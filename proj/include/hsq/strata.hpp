#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hsq/config.hpp"
#include "hsq/torus.hpp"

namespace hsq {

struct Label {
    int iso_dim = 0;
    std::vector<int> tags;

    bool operator==(const Label& o) const { return iso_dim == o.iso_dim && tags == o.tags; }
    bool operator!=(const Label& o) const { return !(*this == o); }
    bool operator<(const Label& o) const {
        if (iso_dim != o.iso_dim) return iso_dim < o.iso_dim;
        return tags < o.tags;
    }
};

struct Sample {
    Label label;
    double indicator = 0.0;  // small near a jump of the label, +inf when not available
};

using Labeler = std::function<Sample(const RVec&)>;

struct StratumNode {
    RVec coords;
    std::vector<int> grid;  // empty for refinement nodes
    Label label;
    double indicator = 0.0;
};

struct Stratum {
    int id = 0;
    std::vector<int> nodes;
    int isotropy_dim = 0;
    std::vector<int> fixers;
    RVec representative;
    int dimension = 0;
    RMat lie_c;  // chart coordinates of the Lie algebra of the stabilized subtorus
    std::vector<int> weyl_stabilizer;
};

struct StratifyOptions {
    int grid_n = 64;
    int refine_levels = 4;
    int threads = 1;
    std::vector<Inequality> domain;  // empty: whole torus, periodic
};

struct Stratification {
    std::vector<StratumNode> nodes;
    std::vector<int> node_stratum;
    std::vector<Stratum> strata;
    bool periodic = true;
    int grid_n = 0;
    int rank = 0;
    double resolution = 0.0;  // wall localization
    int refined_edges = 0;

    int stratum_of_grid(const std::vector<int>& grid) const;
};

Stratification stratify_with(const Labeler& labeler, int rank, const StratifyOptions& opts);

// Isotropy-type strata of A0 (base e); labels are isotropy dimension and fixing component witnesses.
Stratification stratify(const SymmetricSpace& s, const TorusChart& a0, const WeylGroupTable& weyl,
                        const StratifyOptions& opts);

// Strata of the stabilizer type under the chart actions of a Weyl table.
Stratification weyl_stratify(const WeylGroupTable& weyl, int rank, const StratifyOptions& opts);

Sample isotropy_sample(const SymmetricSpace& s, const TorusChart& a0, const RVec& eta);

// Chart coordinates of {X in Lie(A0) : [iso(u), X] = 0, Ad(h) X = X for witnesses h fixing u}.
RMat stabilized_subtorus(const SymmetricSpace& s, const TorusChart& a0, const Mat& u);

// Same partition of the shared grid nodes (bijection between stratum ids).
bool same_partition(const Stratification& a, const Stratification& b);

// Every stratum of fine lies inside one stratum of coarse (grid nodes).
bool refines(const Stratification& fine, const Stratification& coarse);

// Permutation of stratum ids induced by a chart action on grid nodes, if consistent.
std::optional<std::vector<int>> stratum_permutation(const Stratification& st, const ChartAction& act);

bool in_domain(const std::vector<Inequality>& domain, const RVec& eta);

}  // namespace hsq
