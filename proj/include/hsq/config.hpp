#pragma once

#include <string>
#include <vector>

#include "hsq/setup.hpp"

namespace hsq {

struct Inequality {
    RVec coeffs;
    double rhs_over_pi = 0.0;  // coeffs . eta <= rhs_over_pi * pi
};

struct TorusBlock {
    std::vector<Mat> a0_generators;
    std::vector<Inequality> domain;  // empty: the whole torus
};

struct CandidatesBlock {
    std::vector<Mat> weyl;
    std::vector<Mat> weyl_complexified;
    std::vector<Mat> h_u;
    std::vector<Mat> component_witnesses;
};

struct NumericBlock {
    Tol tol;
    int grid_n = 64;
    int refine_levels = 4;
    std::uint64_t seed = 1;
    int max_iters = 10000;
    double fd_step = 1e-6;
    int max_group_order = 1024;
    int threads = 0;  // 0: hardware concurrency
};

struct Config {
    std::string name;
    GroupSpec group;
    TorusBlock torus;
    CandidatesBlock candidates;
    NumericBlock numeric;
    std::string digest;  // FNV-1a of the canonical JSON, hex
    std::string origin;
};

Config parse_config_text(const std::string& text, const std::string& origin);
Config parse_config(const std::string& path);
// "builtin:sl2", "builtin:sl8" or a file path.
Config load_config(const std::string& where);

const std::string& builtin_fixture(const std::string& name);
std::vector<std::string> builtin_names();

// Matrix helpers shared with the report writer and the CLI.
Mat parse_matrix_text(const std::string& text, int n);

}  // namespace hsq
