#include "hsq/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hsq/fixtures_data.hpp"

namespace hsq {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::SchemaError, path + ": " + msg);
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) schema(path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) schema(path + "." + it.key(), "unknown key");
}

const json& need(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) schema(path.empty() ? key : path + "." + key, "missing required block \"" + std::string(key) + "\"");
    return *it;
}

cplx parse_entry(const json& e, const std::string& path) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) return {e[0].get<double>(), e[1].get<double>()};
    schema(path, "matrix entry must be a number or [re, im]");
}

Mat parse_matrix(const json& j, int n, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) schema(path, "expected " + std::to_string(n) + " rows");
    Mat m(n, n);
    for (int r = 0; r < n; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            schema(path + "[" + std::to_string(r) + "]", "expected " + std::to_string(n) + " entries");
        for (int c = 0; c < n; ++c) m(r, c) = parse_entry(row[static_cast<std::size_t>(c)], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    if (!is_finite(m)) throw Error(ErrorKind::ValidationError, path + ": non-finite entry");
    return m;
}

std::vector<Mat> parse_matrix_list(const json& j, int n, const std::string& path) {
    if (!j.is_array()) schema(path, "expected a list of matrices");
    std::vector<Mat> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_matrix(j[i], n, path + "[" + std::to_string(i) + "]"));
    return out;
}

bool get_bool(const json& j, const std::string& path, const char* key, bool dflt) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_boolean()) schema(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

double get_num(const json& j, const std::string& path, const char* key, double dflt) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number()) schema(path + "." + key, "expected a number");
    return it->get<double>();
}

long long get_int(const json& j, const std::string& path, const char* key, long long dflt) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number_integer()) schema(path + "." + key, "expected an integer");
    return it->get<long long>();
}

InvolutionSpec parse_involution(const json& j, int n, const std::string& path) {
    only_keys(j, path, {"conj_matrix", "inverse_transpose", "entrywise_conjugate"});
    InvolutionSpec inv;
    inv.conj_matrix = parse_matrix(need(j, path, "conj_matrix"), n, path + ".conj_matrix");
    inv.inverse_transpose = get_bool(j, path, "inverse_transpose", false);
    inv.entrywise_conjugate = get_bool(j, path, "entrywise_conjugate", false);
    return inv;
}

std::string line_context(const std::string& text, std::size_t byte) {
    std::size_t line = 1, start = 0;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') {
            ++line;
            start = i + 1;
        }
    std::size_t end = text.find('\n', start);
    std::string src = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::ostringstream os;
    os << "line " << line << ", column " << (byte >= start ? byte - start + 1 : 1) << ": " << src;
    return os.str();
}

}  // namespace

Config parse_config_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, origin + ": " + e.what() + " at " + line_context(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    only_keys(root, "config", {"schema", "name", "group", "torus", "candidates", "numeric"});
    const json& sch = need(root, "", "schema");
    if (!sch.is_string() || sch.get<std::string>() != "hsquot-config/1") schema("schema", "expected \"hsquot-config/1\"");

    Config cfg;
    cfg.origin = origin;
    if (root.contains("name")) {
        if (!root["name"].is_string()) schema("name", "expected a string");
        cfg.name = root["name"].get<std::string>();
    }

    const json& g = need(root, "", "group");
    only_keys(g, "group", {"n", "algebra", "sigma", "theta", "delta", "phi", "constraints", "assumptions", "component_reps"});
    long long n = get_int(g, "group", "n", -1);
    if (n < 1 || n > 16) throw Error(ErrorKind::ValidationError, "group.n must be in 1..16");
    GroupSpec& spec = cfg.group;
    spec.n = static_cast<int>(n);
    spec.name = cfg.name;
    const json& alg = need(g, "group", "algebra");
    only_keys(alg, "group.algebra", {"generator", "basis"});
    if (alg.contains("generator") == alg.contains("basis")) schema("group.algebra", "give exactly one of \"generator\" or \"basis\"");
    if (alg.contains("generator")) {
        if (alg["generator"] != "sl_real") schema("group.algebra.generator", "only \"sl_real\" is supported");
        spec.algebra_spanning = sl_real_basis(spec.n);
    } else {
        spec.algebra_spanning = parse_matrix_list(alg["basis"], spec.n, "group.algebra.basis");
        if (spec.algebra_spanning.empty()) throw Error(ErrorKind::ValidationError, "group.algebra.basis is empty");
    }
    spec.sigma = parse_involution(need(g, "group", "sigma"), spec.n, "group.sigma");
    spec.theta = parse_involution(need(g, "group", "theta"), spec.n, "group.theta");
    spec.delta = parse_involution(need(g, "group", "delta"), spec.n, "group.delta");
    spec.phi = parse_involution(need(g, "group", "phi"), spec.n, "group.phi");
    if (g.contains("constraints")) {
        const json& c = g["constraints"];
        if (!c.is_array()) schema("group.constraints", "expected a list of tags");
        for (const auto& t : c) {
            if (t == "det_one") spec.constraints.push_back(Constraint::DetOne);
            else if (t == "real") spec.constraints.push_back(Constraint::Real);
            else if (t == "unitary") spec.constraints.push_back(Constraint::Unitary);
            else schema("group.constraints", "unknown constraint tag " + t.dump());
        }
    }
    if (g.contains("assumptions")) {
        only_keys(g["assumptions"], "group.assumptions", {"G_eq_HG0K"});
        spec.assume_hg0k = get_bool(g["assumptions"], "group.assumptions", "G_eq_HG0K", true);
    }
    if (g.contains("component_reps")) spec.component_reps = parse_matrix_list(g["component_reps"], spec.n, "group.component_reps");

    if (root.contains("torus")) {
        const json& t = root["torus"];
        only_keys(t, "torus", {"a0_generators", "domain"});
        if (t.contains("a0_generators")) cfg.torus.a0_generators = parse_matrix_list(t["a0_generators"], spec.n, "torus.a0_generators");
        if (t.contains("domain")) {
            only_keys(t["domain"], "torus.domain", {"inequalities"});
            const json& ineqs = need(t["domain"], "torus.domain", "inequalities");
            if (!ineqs.is_array()) schema("torus.domain.inequalities", "expected a list");
            for (std::size_t i = 0; i < ineqs.size(); ++i) {
                std::string path = "torus.domain.inequalities[" + std::to_string(i) + "]";
                only_keys(ineqs[i], path, {"coeffs", "rhs_over_pi"});
                const json& co = need(ineqs[i], path, "coeffs");
                if (!co.is_array()) schema(path + ".coeffs", "expected a list of numbers");
                Inequality q;
                q.coeffs.resize(static_cast<Eigen::Index>(co.size()));
                for (std::size_t k = 0; k < co.size(); ++k) {
                    if (!co[k].is_number()) schema(path + ".coeffs", "expected numbers");
                    q.coeffs(static_cast<Eigen::Index>(k)) = co[k].get<double>();
                }
                q.rhs_over_pi = get_num(ineqs[i], path, "rhs_over_pi", 0.0);
                cfg.torus.domain.push_back(q);
            }
        }
    }

    if (root.contains("candidates")) {
        const json& c = root["candidates"];
        only_keys(c, "candidates", {"weyl", "weyl_complexified", "h_u", "component_witnesses"});
        if (c.contains("weyl")) cfg.candidates.weyl = parse_matrix_list(c["weyl"], spec.n, "candidates.weyl");
        if (c.contains("weyl_complexified"))
            cfg.candidates.weyl_complexified = parse_matrix_list(c["weyl_complexified"], spec.n, "candidates.weyl_complexified");
        if (c.contains("h_u")) cfg.candidates.h_u = parse_matrix_list(c["h_u"], spec.n, "candidates.h_u");
        if (c.contains("component_witnesses"))
            cfg.candidates.component_witnesses = parse_matrix_list(c["component_witnesses"], spec.n, "candidates.component_witnesses");
        for (const Mat& m : cfg.candidates.component_witnesses) spec.component_reps.push_back(m);
    }

    if (root.contains("numeric")) {
        const json& nm = root["numeric"];
        const std::string p = "numeric";
        only_keys(nm, p, {"tol_eq", "tol_rank", "mu_tol", "grid_n", "refine_levels", "seed", "max_iters", "fd_step", "max_group_order", "threads"});
        NumericBlock& b = cfg.numeric;
        b.tol.eq = get_num(nm, p, "tol_eq", b.tol.eq);
        b.tol.rank = get_num(nm, p, "tol_rank", b.tol.rank);
        b.tol.mu = get_num(nm, p, "mu_tol", b.tol.mu);
        b.grid_n = static_cast<int>(get_int(nm, p, "grid_n", b.grid_n));
        b.refine_levels = static_cast<int>(get_int(nm, p, "refine_levels", b.refine_levels));
        long long seed = get_int(nm, p, "seed", static_cast<long long>(b.seed));
        if (seed < 0) throw Error(ErrorKind::ValidationError, "numeric.seed must be non-negative");
        b.seed = static_cast<std::uint64_t>(seed);
        b.max_iters = static_cast<int>(get_int(nm, p, "max_iters", b.max_iters));
        b.fd_step = get_num(nm, p, "fd_step", b.fd_step);
        b.max_group_order = static_cast<int>(get_int(nm, p, "max_group_order", b.max_group_order));
        b.threads = static_cast<int>(get_int(nm, p, "threads", b.threads));
    }
    const NumericBlock& b = cfg.numeric;
    check_tol(b.tol);
    if (b.grid_n < 2 || b.grid_n > 4096) throw Error(ErrorKind::ValidationError, "numeric.grid_n must be in 2..4096");
    if (b.refine_levels < 0 || b.refine_levels > 12) throw Error(ErrorKind::ValidationError, "numeric.refine_levels must be in 0..12");
    if (b.max_iters < 1) throw Error(ErrorKind::ValidationError, "numeric.max_iters must be positive");
    if (!(b.fd_step > 0 && b.fd_step < 1e-2)) throw Error(ErrorKind::ValidationError, "numeric.fd_step must be in (0, 1e-2)");
    if (b.max_group_order < 1) throw Error(ErrorKind::ValidationError, "numeric.max_group_order must be positive");
    if (b.threads < 0) throw Error(ErrorKind::ValidationError, "numeric.threads must be non-negative");

    std::string canon = root.dump();
    std::uint64_t h = fnv1a(canon.data(), canon.size());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    cfg.digest = buf;
    return cfg;
}

Config parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

Config load_config(const std::string& where) {
    const std::string prefix = "builtin:";
    if (where.rfind(prefix, 0) == 0) {
        std::string name = where.substr(prefix.size());
        return parse_config_text(builtin_fixture(name), where);
    }
    return parse_config(where);
}

const std::string& builtin_fixture(const std::string& name) {
    static const std::string sl2 = fixtures::kSl2;
    static const std::string sl8 = fixtures::kSl8;
    if (name == "sl2") return sl2;
    if (name == "sl8") return sl8;
    throw Error(ErrorKind::Usage, "unknown builtin fixture \"" + name + "\" (known: sl2, sl8)");
}

std::vector<std::string> builtin_names() { return {"sl2", "sl8"}; }

Mat parse_matrix_text(const std::string& text, int n) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, std::string("matrix argument: ") + e.what());
    }
    return parse_matrix(j, n, "matrix");
}

}  // namespace hsq
