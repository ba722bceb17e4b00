#pragma once

#include <string>
#include <vector>

#include "hsq/report.hpp"

namespace hsq {

struct GoldenCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct GoldenResult {
    std::vector<GoldenCheck> checks;
    json payload;
    bool ok() const;
};

// Hyperboloid coordinates for SL2: x^2 + y^2 = 1 + z^2 <-> [[y+z, x], [-x, y-z]].
Mat sl2_point(double x, double y, double z);
RVec sl2_coords(const Mat& m);

// Points of an n x n sample of the hyperboloid (|z| <= 3) that lie in the Kempf-Ness set.
json sl2_kempf_ness_cloud(const SymmetricSpace& s, int n);

// Golden suites for the bundled fixtures ("sl2", "sl8").
GoldenResult run_golden(const std::string& name, const Config& c);

}  // namespace hsq
