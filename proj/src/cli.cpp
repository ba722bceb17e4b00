#include "hsq/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hsq/golden.hpp"

namespace hsq {

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::Usage:
        case ErrorKind::ParseError:
        case ErrorKind::SchemaError:
        case ErrorKind::ValidationError:
            return 2;
        case ErrorKind::InvalidSetup:
        case ErrorKind::MembershipViolation:
        case ErrorKind::NotInH:
        case ErrorKind::NotInAlgebra:
            return 1;
        default:
            return 3;
    }
}

namespace {

struct Flags {
    std::string config = "builtin:sl2";
    std::string out;
    std::optional<double> tol_eq, tol_rank, mu_tol, fd_step;
    std::optional<int> grid, max_iters, max_group_order, threads;
    std::optional<std::uint64_t> seed;
};

void apply(const Flags& f, Config& c) {
    auto& n = c.numeric;
    if (f.tol_eq) n.tol.eq = *f.tol_eq;
    if (f.tol_rank) n.tol.rank = *f.tol_rank;
    if (f.mu_tol) n.tol.mu = *f.mu_tol;
    if (f.fd_step) n.fd_step = *f.fd_step;
    if (f.grid) n.grid_n = *f.grid;
    if (f.max_iters) n.max_iters = *f.max_iters;
    if (f.max_group_order) n.max_group_order = *f.max_group_order;
    if (f.threads) n.threads = *f.threads;
    if (f.seed) n.seed = *f.seed;
    check_tol(n.tol);
    if (n.grid_n < 2) throw Error(ErrorKind::ValidationError, "--grid must be at least 2");
    if (n.max_iters < 0) throw Error(ErrorKind::ValidationError, "--max-iters must be non-negative");
    if (n.max_group_order < 1) throw Error(ErrorKind::ValidationError, "--max-group-order must be positive");
    if (!(n.fd_step > 0)) throw Error(ErrorKind::ValidationError, "--fd-step must be positive");
    if (n.threads < 0) throw Error(ErrorKind::ValidationError, "--threads must be non-negative");
}

FlowOptions flow_options(const Config& c) {
    FlowOptions fo;
    fo.max_iters = c.numeric.max_iters;
    fo.mu_tol = c.numeric.tol.mu;
    fo.fd_step = c.numeric.fd_step;
    fo.keep_iterates = false;
    return fo;
}

void emit(const Flags& f, const json& report, std::ostream& out) {
    std::string text = dump_json(report);
    if (f.out.empty()) {
        out << text;
        return;
    }
    std::ofstream os(f.out, std::ios::binary);
    if (!os) throw Error(ErrorKind::Usage, "cannot write " + f.out);
    os << text;
}

SymmetricSpace space_or_report(const Config& c, const Flags& f, std::ostream& out, int& code) {
    ValidationReport rep = validate_setup(c.group, c.numeric.tol);
    if (!rep.ok()) {
        emit(f, make_report("validate", c, json_of(rep)), out);
        code = 1;
        throw Error(ErrorKind::InvalidSetup, rep.first_failure()->name + ": " + rep.first_failure()->detail);
    }
    return SymmetricSpace::create(c.group, c.numeric.tol);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quotients of symmetric spaces by symmetric subgroups", "hsquot"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));
    Flags f;
    app.add_option("--config", f.config, "config file path or builtin:sl2 / builtin:sl8");
    app.add_option("--out", f.out, "write the JSON report to this file instead of stdout");
    app.add_option("--tol-eq", f.tol_eq, "equality tolerance");
    app.add_option("--tol-rank", f.tol_rank, "relative rank tolerance");
    app.add_option("--mu-tol", f.mu_tol, "moment map zero tolerance");
    app.add_option("--grid", f.grid, "grid points per torus coordinate");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--max-iters", f.max_iters, "gradient flow iteration bound");
    app.add_option("--max-group-order", f.max_group_order, "bound for group closure");
    app.add_option("--threads", f.threads, "worker threads (0: all cores)");
    app.add_option("--fd-step", f.fd_step, "finite difference step of the flow gradient");

    std::string matrix, example;
    bool check = false;
    auto* validate = app.add_subcommand("validate", "check the group setup");
    auto* member = app.add_subcommand("member", "membership of a matrix in X and the Kempf-Ness set");
    auto* flow = app.add_subcommand("flow", "gradient flow of |mu|^2 from a point");
    auto* closed = app.add_subcommand("closed", "is the H-orbit of a point closed");
    auto* slice = app.add_subcommand("slice", "slice representation at a Kempf-Ness point");
    auto* atlas = app.add_subcommand("atlas", "strata, fibers and minimal tori of the quotient");
    auto* ex = app.add_subcommand("example", "golden suite for a bundled example");
    for (auto* sc : {member, flow, closed, slice}) sc->add_option("matrix", matrix, "JSON matrix, rows of numbers or [re, im] pairs")->required();
    ex->add_option("name", example, "sl2 or sl8")->required()->check(CLI::IsMember(builtin_names()));
    ex->add_flag("--check", check, "exit nonzero on any mismatch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    int code = 0;
    try {
        Config c = load_config(ex->parsed() && f.config == "builtin:sl2" ? "builtin:" + example : f.config);
        apply(f, c);
        if (validate->parsed()) {
            ValidationReport rep = validate_setup(c.group, c.numeric.tol);
            json payload = json_of(rep);
            if (rep.ok()) payload["dims"] = json_of(decompose(c.group, c.numeric.tol));
            emit(f, make_report("validate", c, payload), out);
            return rep.ok() ? 0 : 1;
        }
        if (ex->parsed()) {
            GoldenResult g = run_golden(example, c);
            emit(f, make_report("example", c, g.payload), out);
            for (const auto& ch : g.checks)
                err << (ch.passed ? "PASS " : "FAIL ") << ch.name << (ch.detail.empty() ? "" : " (" + ch.detail + ")") << "\n";
            return check && !g.ok() ? 1 : 0;
        }
        SymmetricSpace s = space_or_report(c, f, out, code);
        if (atlas->parsed()) {
            QuotientAtlas at = build_atlas(s, c, atlas_options(c));
            json payload = json_of(at);
            if (c.group.n == 2 && c.name == "sl2") payload["kempf_ness_cloud"] = sl2_kempf_ness_cloud(s, 40);
            emit(f, make_report("atlas", c, payload), out);
            return 0;
        }
        Mat m = parse_matrix_text(matrix, c.group.n);
        if (member->parsed()) {
            json payload;
            try {
                PointX p = make_point(s, m);
                payload = json_of(s, p);
                payload["in_X"] = true;
                payload["lambda"] = json_of(lambda_projection(p));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::MembershipViolation) throw;
                payload = {{"in_X", false}, {"reason", e.what()}};
            }
            payload["in_G"] = satisfies_constraints(c.group, m, c.numeric.tol);
            payload["in_H"] = payload["in_G"].get<bool>() && s.near(fro(s.sigma(m) - m), fro(m));
            emit(f, make_report("member", c, payload), out);
            return 0;
        }
        PointX p = make_point(s, m);
        if (flow->parsed()) {
            FlowTrace t = gradient_flow(s, p, flow_options(c));
            emit(f, make_report("flow", c, json_of(t)), out);
            return 0;
        }
        if (closed->parsed()) {
            ClosedOrbitResult r = is_orbit_closed(s, p, flow_options(c));
            json payload = {{"closed", r.closed}, {"representative", json_of(r.representative.mat)}, {"flow", json_of(r.trace)}};
            emit(f, make_report("closed", c, payload), out);
            return 0;
        }
        if (slice->parsed()) {
            PrincipalResult pr = is_principal(s, p);
            TransversalData td = transversal(s, p);
            json payload = {{"slice_dim", static_cast<int>(td.slice_basis.cols())},
                            {"isotropy_dim", static_cast<int>(td.isotropy_basis.cols())},
                            {"kempf_ness", in_kempf_ness(s, p)},
                            {"principal", pr.principal},
                            {"algebra_level_only", pr.algebra_level_only},
                            {"weights", json_of(slice_weights(s, td))}};
            emit(f, make_report("slice", c, payload), out);
            return 0;
        }
        throw Error(ErrorKind::Usage, "no command");
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return code ? code : exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace hsq
