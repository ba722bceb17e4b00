#pragma once

#include <optional>
#include <vector>

#include "hsq/config.hpp"
#include "hsq/fiber.hpp"
#include "hsq/strata.hpp"

namespace hsq {

// exp(Lie C) exp(t) u for the stratum with the given id.
struct MinimalTorus {
    int stratum_id = 0;
    TorusChart chart;
    std::vector<int> claimed_strata;  // strata whose tori are W-equivalent to this one
    bool standard = true;
    ChartCheck check;
};

struct QuotientAtlas {
    TorusChart a0;
    WeylGroupTable weyl;
    Stratification strata;
    std::vector<FiberData> fibers;  // indexed by stratum id
    std::vector<MinimalTorus> tori;
    std::vector<int> sub_maximal;  // strata with dim C + dim t below the quotient dimension
    int quotient_dim = 0;

    bool has_complexified = false;
    WeylGroupTable complexified;
    Stratification complexified_strata;
    bool complexified_refines = false;
    bool complexified_equal = false;
};

struct AtlasOptions {
    int grid_n = 64;
    int refine_levels = 4;
    std::uint64_t seed = 1;
    int max_group_order = 1024;
    int threads = 0;
    std::vector<Inequality> domain;
};

AtlasOptions atlas_options(const Config& c);

struct EquivalenceResult {
    std::optional<int> element;  // index into the W0* table
    bool table_closed = true;
};

// Is there w in W0* carrying the compact part of one stratum torus onto the other?
// Throws NotStandard when either chart fails its structural check.
EquivalenceResult equivalence_test(const SymmetricSpace& s, const QuotientAtlas& atlas, const MinimalTorus& a,
                                   const MinimalTorus& b);

// Torus attached to a stratum and its fiber data.
MinimalTorus stratum_torus(const SymmetricSpace& s, const TorusChart& a0, const Stratum& st, const FiberData& fd);

// One torus per W-class of maximal strata, in stratum id order.
void minimal_collection(const SymmetricSpace& s, QuotientAtlas& atlas);

QuotientAtlas build_atlas(const SymmetricSpace& s, const Config& c, const AtlasOptions& opts);

}  // namespace hsq
