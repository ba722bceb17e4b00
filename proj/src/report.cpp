#include "hsq/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hsq {

#ifndef HSQ_VERSION
#define HSQ_VERSION "0.0.0"
#endif

const char* tool_version() { return HSQ_VERSION; }

namespace {

void write_number(std::ostream& os, double v) {
    if (!std::isfinite(v)) {
        os << "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep floats recognizable as floats when read back.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    os << s;
}

void write(std::ostream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << json(it.key()).dump() << ": ";
                write(os, it.value(), indent + 2);
            }
            os << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            bool scalars = true;
            for (const auto& e : j)
                if (e.is_structured() && !(e.is_array() && e.size() <= 2 && (e.empty() || !e[0].is_structured()))) scalars = false;
            if (scalars) {
                os << "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) os << ", ";
                    first = false;
                    write(os, e, indent + 2);
                }
                os << "]";
                return;
            }
            os << "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                write(os, e, indent + 2);
            }
            os << "\n" << close << "]";
            return;
        }
        case json::value_t::number_float:
            write_number(os, j.get<double>());
            return;
        default:
            os << j.dump();
    }
}

json ints(const std::vector<int>& v) { return json(v); }

}  // namespace

std::string dump_json(const json& j) {
    std::ostringstream os;
    write(os, j, 0);
    os << "\n";
    return os.str();
}

json json_of(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows;
}

Mat mat_of(const json& j) {
    const auto r = static_cast<Eigen::Index>(j.size());
    const auto c = r ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Mat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index k = 0; k < c; ++k) {
            const json& e = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    return m;
}

json json_of(const RVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json json_of_real(const RMat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(json_of(RVec(m.row(i).transpose())));
    return rows;
}

json json_of(const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}, {"detail", c.detail}});
    return {{"ok", r.ok()}, {"checks", checks}};
}

json json_of(const Decomposition& d) {
    json o = json::object();
    for (const auto& [k, v] : d.dims()) o[k] = v;
    return o;
}

json json_of(const SymmetricSpace& s, const PointX& x) {
    return {{"matrix", json_of(x.mat)},
            {"unitary_factor", json_of(x.u)},
            {"log_factor", json_of(x.Y_mat)},
            {"kempf_ness", in_kempf_ness(s, x)},
            {"moment_norm", std::sqrt(mu(s, x).norm_sq)}};
}

json json_of(const FlowTrace& t) {
    json norms = json::array();
    for (const auto& st : t.iterates) norms.push_back(std::sqrt(st.norm_sq));
    return {{"status", flow_status_name(t.status)},
            {"converged", t.converged},
            {"iterations", t.iterations},
            {"residual", t.residual},
            {"grad_norm", t.grad_norm},
            {"limit", json_of(t.last.mat)},
            {"moment_norms", norms}};
}

json json_of(const SliceWeights& w) {
    json ws = json::array();
    for (const auto& x : w.weights) ws.push_back(json::array({x.value.real(), x.value.imag()}));
    return {{"weights", ws}, {"generator_scale", w.generator_scale}};
}

json json_of(const WeylGroupTable& w, bool with_reps) {
    json els = json::array();
    for (const auto& e : w.elements) {
        json o = {{"linear", json_of_real(e.action.linear)}, {"translation", json_of(e.action.translation)}, {"word", ints(e.word)}};
        if (with_reps) o["rep"] = json_of(e.rep);
        els.push_back(o);
    }
    json rej = json::array();
    for (const auto& r : w.rejected) rej.push_back({{"index", r.index}, {"reason", r.reason}});
    return {{"order", w.order()}, {"closed", w.closed}, {"accepted", ints(w.accepted)}, {"rejected", rej}, {"elements", els}};
}

json json_of(const Stratification& st) {
    json strata = json::array();
    for (const auto& s : st.strata) {
        strata.push_back({{"id", s.id},
                          {"isotropy_dim", s.isotropy_dim},
                          {"fixers", ints(s.fixers)},
                          {"dimension", s.dimension},
                          {"representative", json_of(s.representative)},
                          {"grid_nodes", static_cast<int>(s.nodes.size())},
                          {"lie_c", json_of_real(s.lie_c)},
                          {"weyl_stabilizer", ints(s.weyl_stabilizer)}});
    }
    return {{"count", static_cast<int>(st.strata.size())},
            {"grid_n", st.grid_n},
            {"periodic", st.periodic},
            {"resolution", st.resolution},
            {"refined_edges", st.refined_edges},
            {"strata", strata}};
}

json json_of(const FiberData& f) {
    json ch = json::array();
    for (const auto& c : f.chamber) ch.push_back(c.text);
    json lw = json::array();
    for (const auto& e : f.little_weyl.elements) lw.push_back(json_of_real(e.action.linear));
    return {{"base_coords", json_of(f.base_coords)},
            {"slice_noncompact_dim", static_cast<int>(f.slice_noncompact_basis.cols())},
            {"isotropy_compact_dim", static_cast<int>(f.isotropy_compact_basis.cols())},
            {"t_dim", static_cast<int>(f.t_basis.cols())},
            {"t_maximal", f.maximal},
            {"roots", f.root_count},
            {"little_weyl_order", f.little_weyl.order()},
            {"little_weyl", lw},
            {"chamber", ch},
            {"chamber_signed_permutation", f.chamber_signed_permutation},
            {"chamber_verified", f.chamber_verified},
            {"rep_residual", f.rep_residual}};
}

json json_of(const TorusChart& c) {
    json gens = json::array();
    for (std::size_t i = 0; i < c.mats.size(); ++i) gens.push_back({{"kind", gen_kind_name(c.kinds[i])}, {"matrix", json_of(c.mats[i])}});
    return {{"rank", c.rank()}, {"compact_dim", c.compact_dim()}, {"split_dim", c.split_dim()}, {"base_point", json_of(c.base_point)}, {"generators", gens}};
}

json json_of(const QuotientAtlas& a) {
    json fibers = json::array();
    for (const auto& f : a.fibers) fibers.push_back(json_of(f));
    json tori = json::array();
    for (const auto& t : a.tori) {
        tori.push_back({{"stratum", t.stratum_id},
                        {"claimed_strata", ints(t.claimed_strata)},
                        {"standard", t.standard},
                        {"chart", json_of(t.chart)},
                        {"little_weyl_order", a.fibers[static_cast<std::size_t>(t.stratum_id)].little_weyl.order()}});
    }
    json o = {{"a0", json_of(a.a0)},
              {"weyl", json_of(a.weyl, true)},
              {"strata", json_of(a.strata)},
              {"fibers", fibers},
              {"tori", tori},
              {"sub_maximal", ints(a.sub_maximal)},
              {"quotient_dim", a.quotient_dim}};
    if (a.has_complexified) {
        o["complexified"] = {{"weyl", json_of(a.complexified, true)},
                             {"strata", json_of(a.complexified_strata)},
                             {"refines", a.complexified_refines},
                             {"equal", a.complexified_equal}};
    }
    return o;
}

json make_report(const std::string& command, const Config& c, json payload) {
    return {{"schema", kReportSchema},
            {"tool_version", tool_version()},
            {"command", command},
            {"config", {{"name", c.name}, {"digest", c.digest}, {"origin", c.origin}}},
            {"payload", std::move(payload)}};
}

}  // namespace hsq
