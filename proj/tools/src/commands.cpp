#include "modkit_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>

#include "modkit/errors.hpp"
#include "modkit/operator_spaces.hpp"
#include "modkit/random.hpp"

namespace modkit::cli {

using nlohmann::ordered_json;

namespace {

// Entries of listed matrices: 9 significant digits, noise below 1e-12 dropped.
double entry_value(double v) {
    if (std::abs(v) < 1e-12) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return std::strtod(buf, nullptr);
}

ordered_json rounded_matrix(const CMatrix& m) {
    ordered_json data = ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back({entry_value(m(i, j).real()), entry_value(m(i, j).imag())});
        }
        data.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ordered_json rounded_vector(const CVector& v) {
    ordered_json out = ordered_json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back({entry_value(v(i).real()), entry_value(v(i).imag())});
    return out;
}

std::string arg(const std::vector<std::string>& args, std::size_t i) {
    return i < args.size() ? args[i] : std::string();
}

struct Context {
    const Workspace& ws;
    const std::vector<std::string>& args;
    const Options& opts;
    Report& report;
    const Tolerances& tol() const { return ws.tol(); }
};

bool within(double r, double tol) { return r <= tol; }

// ---- validate -------------------------------------------------------------

void cmd_validate(Context& cx) {
    const auto& inst = cx.ws.instance();
    auto& rep = cx.report;
    std::map<std::string, bool> algebra_ok;
    for (const auto& [id, spec] : inst.algebras) {
        try {
            const CStarAlgebra a = cx.ws.algebra(id);
            auto& r = rep.add("algebra " + id, true);
            r.details["blocks"] = spec.blocks;
            r.details["dim"] = a.dim();
            r.details["rep_dim"] = a.rep_dim();
            algebra_ok[id] = true;
        } catch (const ClosureError& e) {
            auto& r = rep.add("algebra " + id, false);
            r.details["axiom"] = e.axiom();
            r.details["message"] = e.what();
            algebra_ok[id] = false;
        }
    }
    std::map<std::string, bool> module_ok;
    for (const auto& [id, spec] : inst.modules) {
        if (!algebra_ok[spec.algebra]) {
            rep.add("module " + id, false).details["message"] = "algebra " + spec.algebra + " is invalid";
            module_ok[id] = false;
            continue;
        }
        const OperatorSubspace space = cx.ws.module_space(id);
        const auto checks = check_module_axioms(space, cx.ws.algebra(spec.algebra), cx.tol());
        bool ok = true;
        for (const auto& c : checks) {
            auto& r = rep.add("module " + id + ": " + c.axiom, c.passed, c.residual);
            r.details["dim"] = space.dim();
            if (!c.passed) r.details["witness"] = c.witness;
            ok = ok && c.passed;
        }
        module_ok[id] = ok;
    }
    for (const auto& [id, spec] : inst.correspondences) {
        if (!module_ok[spec.module] || !algebra_ok[spec.left_algebra]) {
            rep.add("correspondence " + id, false).details["message"] = "depends on an invalid module or algebra";
            continue;
        }
        const ConcreteModule m = cx.ws.module(spec.module);
        StarHomomorphism phi;
        try {
            phi = cx.ws.phi(id);
        } catch (const ClosureError& e) {
            auto& r = rep.add("correspondence " + id + ": " + e.axiom(), false);
            r.details["message"] = e.what();
            continue;
        }
        for (const auto& c : check_correspondence(m, cx.ws.algebra(spec.left_algebra), phi)) {
            auto& r = rep.add("correspondence " + id + ": " + c.axiom, c.passed, c.residual);
            if (!c.passed) r.details["witness"] = c.witness;
        }
    }
    for (const auto& [id, spec] : inst.representations) {
        const Representation rho = cx.ws.representation(id);
        const double resid = std::max(rho.multiplicativity_residual(), rho.adjoint_residual());
        auto& r = rep.add("representation " + id + ": star-homomorphism", is_star_homomorphism(rho, cx.tol()), resid);
        r.details["dim"] = rho.rows();
        r.details["nondegenerate"] = is_nondegenerate(rho, cx.tol());
        r.details["faithful"] = is_injective(rho, cx.tol());
    }
}

// ---- compacts / adjointables ------------------------------------------------

bool nondegenerate_check(Context& cx, const ConcreteModule& m) {
    const bool ok = is_nondegenerate(m);
    auto& r = cx.report.add("precondition: nondegenerate", ok);
    r.details["module_dim"] = m.dim();
    r.details["H0"] = m.h0();
    r.details["H1"] = m.h1();
    return ok;
}

void cmd_compacts(Context& cx) {
    const ConcreteModule m = cx.ws.module(cx.ws.resolve("modules", arg(cx.args, 1)));
    if (!nondegenerate_check(cx, m)) return;
    const RepresentedCompacts k = compacts(m);
    auto& dim = cx.report.add("compacts dimension", k.algebra_space.dim() == k.theta_span.dim());
    dim.details["dim"] = k.algebra_space.dim();
    dim.details["theta_dim"] = k.theta_span.dim();
    if (cx.opts.basis) {
        ordered_json b = ordered_json::array();
        for (const auto& e : k.algebra_space.basis()) b.push_back(rounded_matrix(e));
        dim.details["basis"] = std::move(b);
    }
    cx.report.add("closure under product and adjoint", within(k.closure_residual, cx.tol().eq), k.closure_residual);
    cx.report.add("theta to x y* isomorphism", within(k.iso_residual, cx.tol().eq), k.iso_residual);
}

void cmd_adjointables(Context& cx) {
    const ConcreteModule m = cx.ws.module(cx.ws.resolve("modules", arg(cx.args, 1)));
    if (!nondegenerate_check(cx, m)) return;
    const RepresentedAdjointables a = adjointables(m);
    auto& dim = cx.report.add("idealizer dimension", true);
    dim.details["dim"] = a.dim();
    if (cx.opts.basis) {
        ordered_json b = ordered_json::array();
        for (const auto& e : a.idealizer.basis()) b.push_back(rounded_matrix(e));
        dim.details["basis"] = std::move(b);
    }
    cx.report.add("tau is a *-homomorphism", within(a.homomorphism_residual, cx.tol().eq), a.homomorphism_residual);

    double round_trip = 0.0;
    bool ok = true;
    try {
        for (const auto& b : a.idealizer.basis()) {
            const ModuleMap t = a.tau(b);
            const CMatrix back = tau_inverse(a, t);
            round_trip = std::max(round_trip, op_norm(back - b));
            round_trip = std::max(round_trip, op_norm(a.tau(back).action - t.action));
        }
    } catch (const Error& e) {
        ok = false;
        cx.report.add("tau round trip", false).details["message"] = e.what();
    }
    if (ok) cx.report.add("tau round trip", within(round_trip, cx.tol().eq), round_trip);

    const RepresentedCompacts k = compacts(m);
    double outside = 0.0;
    for (const auto& e : k.algebra_space.basis()) outside = std::max(outside, hs_norm(e - a.idealizer.project(e)));
    cx.report.add("compacts contained in idealizer", within(outside, cx.tol().eq), outside);
}

// ---- represent ----------------------------------------------------------------

Representation pick_rho(Context& cx, const Correspondence& c, const std::string& id) {
    if (id.empty() || id == "default") return standard_representation(c.right_algebra().structure());
    return cx.ws.representation(cx.ws.resolve("representations", id));
}

void representation_checks(Context& cx, const RepresentationReport& r, bool rho_faithful) {
    const double eq = cx.tol().eq;
    cx.report.add("cco1 pi(phi(a) x) = lambda(a) pi(x)", within(r.cco1, eq), r.cco1);
    cx.report.add("cco2 pi(x b) = pi(x) rho(b)", within(r.cco2, eq), r.cco2);
    cx.report.add("cco3 rho(<x, y>) = pi(x)* pi(y)", within(r.cco3, eq), r.cco3);
    auto& iso = cx.report.add("isometry", !rho_faithful || within(r.isometry_defect, eq), r.isometry_defect);
    iso.details["rho_faithful"] = rho_faithful;
    cx.report.add("pi(X) H0 spans H1", r.spanning);
}

void cmd_represent(Context& cx) {
    const Correspondence c = cx.ws.correspondence(cx.ws.resolve("correspondences", arg(cx.args, 1)));
    const Representation rho = pick_rho(cx, c, arg(cx.args, 2));
    const bool nondeg = rho.source() == c.right_algebra().structure() && is_nondegenerate(rho, cx.tol());
    auto& pre = cx.report.add("precondition: rho nondegenerate", nondeg);
    pre.details["H0"] = rho.rows();
    if (!nondeg) return;

    RepresentationTriple t = build_representation(c, rho);
    auto& dims = cx.report.add("Hilbert space dimensions", true);
    dims.details["H0"] = t.h0();
    dims.details["H1"] = t.h1();
    if (cx.opts.inject_noise > 0.0) {
        Rng rng(1);
        for (auto& p : t.pi) {
            CMatrix n = rng.gaussian_matrix(p.rows(), p.cols());
            const double norm = op_norm(n);
            if (norm > 0.0) p += (cx.opts.inject_noise / norm) * n;
        }
        dims.details["injected_noise"] = cx.opts.inject_noise;
    }
    const bool rho_faithful = is_injective(rho, cx.tol());
    const RepresentationReport r = verify_representation(c, t);
    representation_checks(cx, r, rho_faithful);
    const FaithfulnessReport f = faithfulness_check(c, t, rho_faithful);
    auto& lam = cx.report.add("lambda faithfulness and nondegeneracy",
                              f.consistent && (!r.phi_nondegenerate || r.lambda_nondegenerate));
    lam.details["lambda_faithful"] = f.lambda_injective;
    lam.details["phi_injective"] = f.phi_injective;
    lam.details["lambda_nondegenerate"] = r.lambda_nondegenerate;
    lam.details["phi_nondegenerate"] = r.phi_nondegenerate;
}

// ---- bimodule-check / ideal-check ---------------------------------------------

void left_ip_checks(Context& cx, const LeftInnerProduct& ip) {
    const double eq = cx.tol().eq;
    auto& s = cx.report.add("left inner product solve", within(ip.solve_residual, eq), ip.solve_residual);
    s.details["values_in"] = ip.domain.describe();
    ordered_json vals = ordered_json::array();
    for (Index i = 0; i < ip.module_dim; ++i)
        for (Index j = 0; j < ip.module_dim; ++j) vals.push_back(rounded_vector(ip.at(i, j)));
    s.details["structure_constants"] = std::move(vals);
    cx.report.add("left inner product unique", within(ip.uniqueness_residual, eq), ip.uniqueness_residual);
    cx.report.add("norm identity ||<x,x>|| = ||x||^2", within(ip.norm_residual, eq), ip.norm_residual);
    cx.report.add("bimodule identity <x,y> z = x <y,z>", within(ip.bimod_residual, eq), ip.bimod_residual);
    cx.report.add("left action adjointable", within(ip.adjoint_residual, eq), ip.adjoint_residual);
}

void ideal_checks(Context& cx, const Correspondence& c, bool with_structure) {
    const IdealDecision d = ideal_criterion(c);
    auto& r = cx.report.add("ideal search", true, d.ideal ? std::optional<double>(d.projector_distance) : std::nullopt);
    r.details["ideal"] = d.ideal ? d.ideal->describe() : std::string("none");
    r.details["examined"] = d.examined;
    if (with_structure && d.left_ip) left_ip_checks(cx, *d.left_ip);
}

void cmd_bimodule_check(Context& cx) {
    const Correspondence c = cx.ws.correspondence(cx.ws.resolve("correspondences", arg(cx.args, 1)));
    const BimoduleDecision d = bimodule_criterion(c);
    auto& r = cx.report.add("bimodule criterion", true, d.containment_residual);
    r.details["verdict"] = d.is_bimodule ? "bimodule" : "no bimodule structure";
    r.details["compacts_dim"] = d.compacts_dim;
    r.details["phi_image_dim"] = d.phi_image_dim;
    r.details["kernel"] = d.kernel.describe();
    if (d.left_ip) left_ip_checks(cx, *d.left_ip);
    ideal_checks(cx, c, false);
}

void cmd_ideal_check(Context& cx) {
    const Correspondence c = cx.ws.correspondence(cx.ws.resolve("correspondences", arg(cx.args, 1)));
    ideal_checks(cx, c, true);
}

// ---- tensor -----------------------------------------------------------------------

void cmd_tensor(Context& cx) {
    const Correspondence x = cx.ws.correspondence(cx.ws.resolve("correspondences", arg(cx.args, 1)));
    const Correspondence y = cx.ws.correspondence(cx.ws.resolve("correspondences", arg(cx.args, 2)));
    const bool match = x.right_algebra().structure() == y.left_algebra().structure();
    auto& pre = cx.report.add("precondition: middle algebras match", match);
    if (!match) {
        pre.details["message"] = "the right algebra of X is not the left algebra of Y";
        return;
    }
    const TensorModule t = interior_tensor(x, y);
    auto& dim = cx.report.add("tensor dimension", true);
    dim.details["dim"] = t.module().dim();
    dim.details["elementary"] = t.kx * t.ky;
    dim.details["H"] = t.quotient_dim();

    double balance = 0.0;
    const Index nb = x.right_algebra().dim();
    for (Index i = 0; i < t.kx; ++i) {
        CVector xi = CVector::Zero(t.kx);
        xi(i) = 1.0;
        for (Index g = 0; g < nb; ++g) {
            const CVector b = x.right_algebra().basis_element(g);
            for (Index p = 0; p < t.ky; ++p) {
                CVector yp = CVector::Zero(t.ky);
                yp(p) = 1.0;
                balance = std::max(balance, balancing_residual(x, y, t, xi, b, yp));
            }
        }
    }
    cx.report.add("balancing xb (x) y = x (x) phi(b) y", within(balance, cx.tol().eq), balance);

    const Index ky = y.module().dim();
    CMatrix act(ky, ky * nb);
    for (Index g = 0; g < nb; ++g) act.middleCols(g * ky, ky) = y.phi().image(g);
    const bool nondeg = numerical_rank(act, cx.tol().rank) == ky;
    cx.report.add("precondition: B acts nondegenerately on Y", nondeg);
    if (!nondeg) return;

    const Representation rho = pick_rho(cx, y, arg(cx.args, 3));
    const TensorRepresentation tr = tensor_representation(x, y, rho);
    representation_checks(cx, tr.report, is_injective(rho, cx.tol()));
    cx.report.add("span of pi equals span of tau_X(X) pi_Y(Y)", within(tr.span_distance, cx.tol().eq),
                  tr.span_distance);
}

// ---- daws -------------------------------------------------------------------------

void cmd_daws(Context& cx) {
    const std::string s = arg(cx.args, 0);
    char* end = nullptr;
    const long n = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') throw ParseError("daws: expected an integer order n, got \"" + s + "\"");
    const DawsReport d = daws_counterexample(n);
    auto& r = cx.report.add("row module dimension through amplification", d.consistent);
    r.details["row_dim"] = d.row_dim;
    r.details["amplified_dim"] = d.amplified_dim;
    auto& c = cx.report.add("adjointables differ between row and column structures", d.claim_fails);
    c.details["L_Mn(C^n)"] = d.row_dim;
    c.details["L_C(C^n)"] = d.column_dim;
}

using Handler = std::function<void(Context&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"validate", cmd_validate},         {"compacts", cmd_compacts},
        {"adjointables", cmd_adjointables}, {"represent", cmd_represent},
        {"bimodule-check", cmd_bimodule_check}, {"ideal-check", cmd_ideal_check},
        {"tensor", cmd_tensor},             {"daws", cmd_daws},
    };
    return table;
}

std::optional<double> env_rank() {
    const char* v = std::getenv("MODKIT_TOL_RANK");
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    const double d = std::strtod(v, &end);
    if (*end != '\0') throw ParseError(std::string("MODKIT_TOL_RANK: not a number: ") + v);
    return d;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"validate", "compacts", "adjointables", "represent",
                                                "bimodule-check", "ideal-check", "tensor", "daws"};
    return names;
}

Tolerances resolve_tolerances(const TolerancePatch& file, const TolerancePatch& flags) {
    Tolerances t;
    if (auto r = env_rank()) t.rank = *r;
    file.apply(t);
    flags.apply(t);
    try {
        t.validate();
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("tolerances: ") + e.what());
    }
    return t;
}

Report run_command(const std::string& command, const std::vector<std::string>& args,
                   const Options& opts) {
    Report report;
    report.command = command;
    const auto& table = handlers();
    auto it = table.find(command);
    if (it == table.end()) {
        report.error = "unknown command \"" + command + "\"";
        return report;
    }
    try {
        if (command == "daws") {
            report.instance = "n=" + arg(args, 0);
            const Workspace ws(Instance{}, resolve_tolerances({}, opts.flags));
            Context cx{ws, args, opts, report};
            it->second(cx);
            return report;
        }
        if (args.empty()) throw ParseError("an instance file is required");
        report.instance = std::filesystem::path(args[0]).filename().string();
        Instance inst = load_instance(args[0]);
        const TolerancePatch file_tol = inst.tolerances;
        const Workspace ws(std::move(inst), resolve_tolerances(file_tol, opts.flags));
        Context cx{ws, args, opts, report};
        it->second(cx);
    } catch (const ParseError& e) {
        report.error = e.what();
    } catch (const ShapeError& e) {
        report.error = std::string("shape mismatch: ") + e.what();
    } catch (const ClosureError& e) {
        report.add("axiom: " + e.axiom(), false).details["message"] = e.what();
    } catch (const PreconditionError& e) {
        report.add("precondition", false).details["message"] = e.what();
    } catch (const NumericalError& e) {
        report.add("numerical consistency", false).details["message"] = e.what();
    } catch (const std::exception& e) {
        report.error = e.what();
    }
    return report;
}

}  // namespace modkit::cli
