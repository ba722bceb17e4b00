#pragma once

#include <string>

#include <json.hpp>

#include "hsq/atlas.hpp"
#include "hsq/kempf_ness.hpp"

namespace hsq {

using json = nlohmann::json;

inline constexpr const char* kReportSchema = "hsquot-report/1";
const char* tool_version();

// Deterministic text: sorted keys, two-space indent, floats with 17 significant digits.
std::string dump_json(const json& j);

json json_of(const Mat& m);  // rows of [re, im] pairs
json json_of(const RVec& v);
json json_of_real(const RMat& m);
Mat mat_of(const json& j);  // inverse of json_of(Mat)

json json_of(const ValidationReport& r);
json json_of(const Decomposition& d);
json json_of(const SymmetricSpace& s, const PointX& x);
json json_of(const FlowTrace& t);
json json_of(const SliceWeights& w);
json json_of(const WeylGroupTable& w, bool with_reps);
json json_of(const Stratification& st);
json json_of(const FiberData& f);
json json_of(const TorusChart& c);
json json_of(const QuotientAtlas& a);

json make_report(const std::string& command, const Config& c, json payload);

}  // namespace hsq
