#pragma once

// Subcommand dispatch over a parsed document. Each command produces a Report
// with a fixed key order, rendered as text or JSON.

#include "cdga/cohomology.hpp"
#include "cdga/dsl.hpp"
#include "cdga/presented.hpp"
#include "cdga/relative.hpp"
#include "cdga/toomer.hpp"
#include "cdga/untwist.hpp"

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cdga {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kParseError = 2, kInconclusive = 3 };

struct CommandOptions {
    std::optional<std::string> item;
    std::optional<int> max_degree;
    std::optional<int> formal_dim;
    std::optional<std::string> a;
    std::optional<std::string> omega;
    bool nilpotent = false;
};

// Raised for bad invocations (unknown command, wrong item kind, missing flag).
class UsageError : public Error {
public:
    using Error::Error;
};

struct Report {
    using json = nlohmann::ordered_json;

    std::string command;
    std::string item;
    json inputs = json::object();
    json results = json::object();
    std::vector<std::string> warnings;
    std::vector<std::string> text;
    int exit_code = kOk;

    json to_json() const {
        json j;
        j["command"] = command;
        j["item"] = item;
        j["inputs"] = inputs;
        j["results"] = results;
        j["warnings"] = warnings;
        j["exit_code"] = exit_code;
        return j;
    }

    std::string render(const std::string& format) const {
        if (format == "json")
            return to_json().dump(2) + "\n";
        std::string out;
        for (const auto& line : text)
            out += line + "\n";
        for (const auto& w : warnings)
            out += "warning: " + w + "\n";
        return out;
    }
};

namespace commands {

using json = nlohmann::ordered_json;

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? sep : "") + parts[i];
    return out;
}

inline std::string str(const Rational& q) { return q.get_str(); }

inline json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(str(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline std::string matrix_text(const Matrix& m) {
    std::vector<std::string> rows;
    for (int i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(str(m.at(i, j)));
        rows.push_back("[" + join(row, " ") + "]");
    }
    return rows.empty() ? "[]" : join(rows, " ");
}

inline json ints(const std::vector<int>& v) { return json(v); }

inline std::string ints_text(const std::vector<int>& v) {
    std::vector<std::string> s;
    for (int x : v)
        s.push_back(std::to_string(x));
    return join(s, " ");
}

// Images of generators; zero images are omitted.
inline json map_json(const FreeAlgebra& source, const FreeAlgebra& target, const std::vector<Polynomial>& images) {
    json j = json::object();
    for (std::size_t g = 0; g < images.size(); ++g)
        if (!images[g].is_zero())
            j[source.generator(static_cast<int>(g)).name] = target.format(images[g]);
    return j;
}

inline std::string map_text(const json& j) {
    std::vector<std::string> parts;
    for (const auto& [k, v] : j.items())
        parts.push_back(k + " -> " + v.get<std::string>());
    return parts.empty() ? "0" : join(parts, ", ");
}

class Context {
public:
    Context(const SpecDocument& doc, const CommandOptions& opt) : doc_(doc), opt_(opt) {}

    const Item& item() const {
        if (opt_.item) {
            const Item* it = doc_.find(*opt_.item);
            if (!it)
                throw UsageError("no item named '" + *opt_.item + "'");
            return *it;
        }
        if (doc_.items.empty())
            throw UsageError("document has no items");
        return doc_.items.back();
    }

    const SpecDocument& doc() const { return doc_; }
    const CommandOptions& options() const { return opt_; }

    // Formal dimension declared for a named item, if any.
    std::optional<int> declared_dim(const std::string& name) const {
        const Item* it = doc_.find(name);
        if (!it)
            return std::nullopt;
        if (auto a = std::get_if<AlgebraItem>(it))
            return a->formal_dim;
        if (auto l = std::get_if<LieItem>(it))
            return l->lie.dim();
        if (auto f = std::get_if<FibrationItem>(it)) {
            auto b = declared_dim(f->base), fi = declared_dim(f->fiber);
            if (b && fi)
                return *b + *fi;
        }
        if (auto r = std::get_if<RingItem>(it))
            return r->ring.top();
        return std::nullopt;
    }

    std::optional<int> formal_dim(const Item& it) const {
        return opt_.formal_dim ? opt_.formal_dim : declared_dim(item_name(it));
    }

    // Formal dimension of the fiber of a fibration; --formal-dim overrides.
    int fiber_dim(const FibrationItem& f) const {
        auto d = opt_.formal_dim ? opt_.formal_dim : declared_dim(f.fiber);
        if (!d)
            throw UsageError("fiber '" + f.fiber + "' has no formal dimension; pass --formal-dim");
        return *d;
    }

    int base_dim(const FibrationItem& f) const {
        auto d = declared_dim(f.base);
        if (!d)
            throw UsageError("base '" + f.base + "' has no formal dimension");
        return *d;
    }

private:
    const SpecDocument& doc_;
    const CommandOptions& opt_;
};

inline Cdga model_of(const Item& it) {
    if (auto a = std::get_if<AlgebraItem>(&it))
        return a->model;
    if (auto l = std::get_if<LieItem>(&it))
        return chevalley_eilenberg(l->lie);
    if (auto f = std::get_if<FibrationItem>(&it))
        return f->model.total();
    throw UsageError(std::string("'") + item_name(it) + "' is a ring; this command needs a model");
}

inline const FibrationItem& fibration_of(const Item& it, const std::string& command) {
    auto f = std::get_if<FibrationItem>(&it);
    if (!f)
        throw UsageError(command + " needs a fibration item, '" + item_name(it) + "' is a " + item_kind(it));
    return *f;
}

inline bool require_d_squared(const Cdga& c, Report& r) {
    if (c.d_squared_zero())
        return true;
    r.results["d_squared_zero"] = false;
    r.text.push_back("d^2 != 0; run 'check' for witnesses");
    r.exit_code = kValidationFailure;
    return false;
}

inline bool require_relative(const FibrationItem& f, Report& r) {
    const auto v = validate_relative_model(f.model);
    if (v.valid())
        return true;
    json issues = json::array();
    for (const auto& is : v.issues) {
        issues.push_back({{"generator", is.generator},
                          {"problem", is.problem},
                          {"value", f.model.total().algebra().format(is.value)}});
        r.text.push_back("invalid: " + (is.generator.empty() ? "" : is.generator + ": ") + is.problem +
                         (is.value.is_zero() ? "" : " (" + f.model.total().algebra().format(is.value) + ")"));
    }
    r.results["valid"] = false;
    r.results["issues"] = issues;
    r.exit_code = kValidationFailure;
    return false;
}

inline void check_algebra(const AlgebraItem& a, Report& r) {
    const auto& alg = a.model.algebra();
    const int max_degree = std::max(alg.max_generator_degree() + 1, r.inputs.value("max_degree", 0));
    const auto v = validate_cdga(a.model, max_degree);
    json failures = json::array();
    for (const auto& f : v.failures)
        failures.push_back({{"generator", alg.generator(f.generator).name}, {"d_squared", alg.format(f.d_squared)}});
    std::vector<std::string> order, non_minimal;
    for (int g : v.generator_order)
        order.push_back(alg.generator(g).name);
    for (int g : v.non_minimal_generators)
        non_minimal.push_back(alg.generator(g).name);
    r.results["d_squared_zero"] = v.d_squared_zero;
    r.results["is_sullivan"] = v.is_sullivan;
    r.results["is_minimal"] = v.is_minimal;
    r.results["generator_order"] = order;
    r.results["failures"] = failures;
    r.results["non_minimal_generators"] = non_minimal;
    r.text.push_back(std::string("d^2 = 0: ") + (v.d_squared_zero ? "yes" : "no"));
    for (const auto& f : v.failures)
        r.text.push_back("  d^2(" + alg.generator(f.generator).name + ") = " + alg.format(f.d_squared));
    r.text.push_back(std::string("Sullivan: ") + (v.is_sullivan ? "yes" : "no") + " (order " + join(order, " ") + ")");
    r.text.push_back(std::string("minimal: ") + (v.is_minimal ? "yes" : "no"));
    if (!non_minimal.empty())
        r.warnings.push_back("non-minimal: linear terms in d(" + join(non_minimal, ", ") + ")");
    if (!v.valid())
        r.exit_code = kValidationFailure;
}

inline void check_lie(const LieItem& l, Report& r) {
    const auto v = validate_lie(l.lie);
    r.results["jacobi"] = v.jacobi_ok;
    if (v.witness) {
        const auto& w = *v.witness;
        std::vector<std::string> value;
        for (const auto& q : w.value)
            value.push_back(str(q));
        r.results["jacobi_witness"] = {{"i", w.i + 1}, {"j", w.j + 1}, {"k", w.k + 1}, {"value", value}};
    }
    r.results["nilpotent"] = v.nilpotent;
    r.results["nilpotency_class"] = v.nilpotency_class;
    r.results["b1"] = v.b1;
    r.results["lower_central_series"] = ints(v.series.dimensions());
    r.text.push_back(std::string("Jacobi: ") + (v.jacobi_ok ? "yes" : "no"));
    if (v.witness)
        r.text.push_back("  fails on (X" + std::to_string(v.witness->i + 1) + ", X" + std::to_string(v.witness->j + 1) +
                         ", X" + std::to_string(v.witness->k + 1) + ")");
    r.text.push_back(std::string("nilpotent: ") + (v.nilpotent ? "yes" : "no") +
                     (v.nilpotent ? " (class " + std::to_string(v.nilpotency_class) + ")" : ""));
    r.text.push_back("lower central series dims: " + ints_text(v.series.dimensions()));
    r.text.push_back("b1 = " + std::to_string(v.b1));
    if (!v.jacobi_ok || !v.nilpotent)
        r.exit_code = kValidationFailure;
}

inline void check_fibration(const FibrationItem& f, Report& r) {
    const auto v = validate_relative_model(f.model);
    r.results["valid"] = v.valid();
    r.results["d_squared_zero"] = v.d_squared_zero;
    r.results["restricts_to_fiber"] = v.restricts_to_fiber;
    r.results["relative_sullivan"] = v.relative_sullivan;
    r.results["relative_minimal"] = v.relative_minimal;
    r.results["base_in_degree_one"] = v.base_in_degree_one;
    r.results["fiber_simply_connected"] = v.fiber_simply_connected;
    json issues = json::array();
    for (const auto& is : v.issues)
        issues.push_back({{"generator", is.generator},
                          {"problem", is.problem},
                          {"value", f.model.total().algebra().format(is.value)}});
    r.results["issues"] = issues;
    r.text.push_back(std::string("relative model: ") + (v.valid() ? "valid" : "invalid"));
    for (const auto& is : v.issues)
        r.text.push_back("  " + (is.generator.empty() ? "" : is.generator + ": ") + is.problem +
                         (is.value.is_zero() ? "" : ": " + f.model.total().algebra().format(is.value)));
    if (!v.relative_minimal)
        r.warnings.push_back("relative model is not minimal");
    if (!v.base_in_degree_one)
        r.warnings.push_back("base has generators above degree 1");
    if (!v.fiber_simply_connected)
        r.warnings.push_back("fiber has generators of degree 1");
    if (!v.valid())
        r.exit_code = kValidationFailure;
}

inline void check_ring(const RingItem& ri, Report& r) {
    const auto pd = ring_poincare_duality(ri.ring);
    std::vector<int> dims;
    for (int k = 0; k <= ri.ring.top(); ++k)
        dims.push_back(ri.ring.dimension(k));
    r.results["dimensions"] = ints(dims);
    r.results["poincare_duality"] = pd.holds;
    if (!pd.holds)
        r.results["reason"] = pd.reason;
    r.text.push_back("dimensions: " + ints_text(dims));
    r.text.push_back(std::string("Poincare duality: ") + (pd.holds ? "yes" : "no (" + pd.reason + ")"));
    if (!pd.holds)
        r.exit_code = kValidationFailure;
}

inline void cmd_check(const Context& ctx, Report& r) {
    const Item& it = ctx.item();
    if (ctx.options().max_degree)
        r.inputs["max_degree"] = *ctx.options().max_degree;
    if (auto a = std::get_if<AlgebraItem>(&it))
        check_algebra(*a, r);
    else if (auto l = std::get_if<LieItem>(&it))
        check_lie(*l, r);
    else if (auto f = std::get_if<FibrationItem>(&it))
        check_fibration(*f, r);
    else
        check_ring(std::get<RingItem>(it), r);
}

inline void cmd_cohomology(const Context& ctx, Report& r) {
    const Item& it = ctx.item();
    if (auto ri = std::get_if<RingItem>(&it)) {
        std::vector<int> dims;
        json bases = json::array();
        for (int k = 0; k <= ri->ring.top(); ++k) {
            dims.push_back(ri->ring.dimension(k));
            std::vector<std::string> b;
            for (const auto& m : ri->ring.quotient_basis(k))
                b.push_back(ri->ring.algebra().format(m));
            bases.push_back(b);
            r.text.push_back("H^" + std::to_string(k) + ": " + std::to_string(dims.back()) +
                             (b.empty() ? "" : "  " + join(b, ", ")));
        }
        r.results["betti"] = ints(dims);
        r.results["basis"] = bases;
        return;
    }
    auto max = ctx.options().max_degree ? ctx.options().max_degree : ctx.formal_dim(it);
    if (!max)
        throw UsageError("cohomology needs --max-degree");
    r.inputs["max_degree"] = *max;
    const Cdga c = model_of(it);
    if (!require_d_squared(c, r))
        return;
    const CohomologyRing h(c, *max);
    json reps = json::array();
    for (int k = 0; k <= *max; ++k) {
        std::vector<std::string> rs;
        for (const auto& z : h.representatives(k))
            rs.push_back(c.algebra().format(z));
        reps.push_back(rs);
        r.text.push_back("H^" + std::to_string(k) + ": " + std::to_string(h.betti(k)) +
                         (rs.empty() ? "" : "  " + join(rs, ", ")));
    }
    r.results["betti"] = ints(h.betti_numbers());
    r.results["total_rank"] = h.total_rank();
    r.results["representatives"] = reps;
    r.text.push_back("total rank " + std::to_string(h.total_rank()));
}

inline void cmd_e0(const Context& ctx, Report& r) {
    const Item& it = ctx.item();
    const Cdga c = model_of(it);
    if (!require_d_squared(c, r))
        return;
    const auto fd = ctx.formal_dim(it);
    const auto& alg = c.algebra();
    if (!fd) {
        if (!ctx.options().max_degree)
            throw UsageError("e0 needs --formal-dim or --max-degree");
        const int max = *ctx.options().max_degree;
        r.inputs["max_degree"] = max;
        const auto scan = e0_of_space(c, max, false);
        r.results["e0"] = scan.e0;
        r.results["method"] = to_string(scan.method);
        r.results["certified"] = false;
        r.text.push_back("e0 >= " + std::to_string(scan.e0) + " (classes through degree " + std::to_string(max) + ")");
        r.warnings.push_back("uncertified e0 bound: no formal dimension given");
        r.exit_code = kInconclusive;
        return;
    }
    r.inputs["formal_dim"] = *fd;
    const auto scan = e0_of_space(c, *fd, true);
    const CohomologyRing h(c, *fd);
    const auto pd = poincare_structure(h, *fd);
    r.results["e0"] = scan.e0;
    r.results["poincare_duality"] = pd.holds();
    if (!pd.holds()) {
        r.results["method"] = to_string(scan.method);
        r.results["certified"] = false;
        r.results["witness"] = alg.format(scan.witness);
        r.results["witness_degree"] = scan.witness_degree;
        r.text.push_back("e0 >= " + std::to_string(scan.e0) + " (classes through degree " + std::to_string(*fd) + ")");
        r.warnings.push_back("uncertified e0 bound: not a Poincare duality model in dimension " + std::to_string(*fd) +
                             " (" + pd.reason + ")");
        r.exit_code = kInconclusive;
        return;
    }
    const auto top = e0_top_class(c, *pd.structure);
    if (top.e0 != scan.e0)
        throw Error("internal inconsistency: injectivity scan gives " + std::to_string(scan.e0) +
                    ", top class gives " + std::to_string(top.e0));
    r.results["method"] = to_string(top.method);
    r.results["certified"] = true;
    r.results["witness"] = alg.format(top.witness);
    r.results["witness_degree"] = *fd;
    r.results["scan_agrees"] = true;
    r.text.push_back("e0 = " + std::to_string(top.e0));
    r.text.push_back("witness: " + alg.format(top.witness));
    r.text.push_back(std::to_string(top.e0) + " ≤ cat ≤ " + std::to_string(*fd) + " = dim");
    if (scan.presentation_dependent)
        r.warnings.push_back("model is not minimal; word length depends on the presentation");
}

inline void cmd_cuplength(const Context& ctx, Report& r) {
    const Item& it = ctx.item();
    const Cdga c = model_of(it);
    if (!require_d_squared(c, r))
        return;
    auto max = ctx.options().max_degree ? ctx.options().max_degree : ctx.formal_dim(it);
    if (!max)
        throw UsageError("cuplength needs --formal-dim or --max-degree");
    r.inputs["max_degree"] = *max;
    const CohomologyRing h(c, *max);
    const int cl = cup_length(h, *max);
    r.results["cup_length"] = cl;
    r.text.push_back("cup length = " + std::to_string(cl));
}

inline void cmd_ce(const Context& ctx, Report& r) {
    const Item& it = ctx.item();
    auto l = std::get_if<LieItem>(&it);
    if (!l)
        throw UsageError("ce needs a lie item, '" + item_name(it) + "' is a " + item_kind(it));
    try {
        const auto m = chevalley_eilenberg_model(l->lie);
        const std::string dsl = print_algebra(l->name + "_ce", m.model, l->lie.dim());
        r.results["reordered"] = m.reordered;
        r.results["basis_changed"] = m.basis_changed;
        json d = json::object();
        for (int g = 0; g < m.model.size(); ++g)
            d[m.model.algebra().generator(g).name] = m.model.algebra().format(m.model.d(g));
        r.results["differentials"] = d;
        r.results["dsl"] = dsl;
        std::istringstream lines(dsl);
        for (std::string line; std::getline(lines, line);)
            r.text.push_back(line);
        if (m.basis_changed)
            r.warnings.push_back("generators z1..zn are dual to an adapted basis, not to X1..Xn");
        else if (m.reordered)
            r.warnings.push_back("generators reordered to make the differential triangular");
    } catch (const JacobiError& e) {
        r.results["error"] = e.what();
        r.text.push_back(e.what());
        r.exit_code = kValidationFailure;
    } catch (const NotNilpotentError& e) {
        r.results["error"] = e.what();
        r.text.push_back(e.what());
        r.exit_code = kValidationFailure;
    }
}

inline void cmd_signature(const Context& ctx, Report& r) {
    const Item& it = ctx.item();
    const Cdga c = model_of(it);
    if (!require_d_squared(c, r))
        return;
    const auto fd = ctx.formal_dim(it);
    if (!fd)
        throw UsageError("signature needs --formal-dim");
    r.inputs["formal_dim"] = *fd;
    const CohomologyRing h(c, *fd);
    const auto pd = poincare_structure(h, *fd);
    r.results["poincare_duality"] = pd.holds();
    if (!pd.holds()) {
        r.results["reason"] = pd.reason;
        r.text.push_back("not a Poincare duality algebra: " + pd.reason);
        r.exit_code = kValidationFailure;
        return;
    }
    const int s = signature(*pd.structure);
    r.results["signature"] = s;
    r.results["orientation"] = c.algebra().format(pd.structure->top);
    if (*fd % 4 == 0)
        r.results["form"] = matrix_json(pd.structure->pairings[static_cast<std::size_t>(*fd / 2)]);
    r.text.push_back("signature = " + std::to_string(s));
    r.text.push_back("orientation: " + c.algebra().format(pd.structure->top));
    if (*fd % 4 != 0)
        r.warnings.push_back("formal dimension is not divisible by 4; signature is 0 by convention");
}

inline void cmd_action(const Context& ctx, Report& r) {
    const auto& f = fibration_of(ctx.item(), "action");
    if (!require_relative(f, r))
        return;
    const auto& m = f.model;
    const int fdim = ctx.fiber_dim(f);
    r.inputs["fiber_formal_dim"] = fdim;
    const auto fds = extract_fiber_derivations(m);
    const CohomologyRing hf(m.fiber(), fdim);
    const auto pd = poincare_structure(hf, fdim);
    const auto rep = action_report(m, fds, hf, pd.holds() ? std::optional<int>(fdim) : std::nullopt);
    const auto& falg = m.fiber().algebra();
    json thetas = json::object();
    for (int i = 0; i < m.base_size(); ++i) {
        const auto& name = m.base().algebra().generator(i).name;
        thetas[name] = map_json(falg, falg, fds.theta[static_cast<std::size_t>(i)]);
        r.text.push_back("theta_" + name + ": " + map_text(thetas[name]));
    }
    r.results["theta"] = thetas;
    const json chi2 = map_json(falg, m.total().algebra(), fds.chi2);
    r.results["higher_terms"] = chi2;
    r.results["commutes_with_d"] = fds.commutes;
    json blocks = json::array();
    for (const auto& b : rep.blocks) {
        if (b.matrix.rows() == 0)
            continue;
        const auto& name = m.base().algebra().generator(b.base_generator).name;
        blocks.push_back({{"base_generator", name},
                          {"degree", b.degree},
                          {"matrix", matrix_json(b.matrix)},
                          {"trivial", b.trivial},
                          {"nilpotent", b.nilpotent},
                          {"nilpotency_index", b.nilpotency_index}});
        if (!b.trivial)
            r.text.push_back("  " + name + " on H^" + std::to_string(b.degree) + ": " + matrix_text(b.matrix) +
                             (b.nilpotent ? ", nilpotent of index " + std::to_string(b.nilpotency_index)
                                          : ", not nilpotent"));
    }
    r.results["blocks"] = blocks;
    r.results["verdict"] = to_string(rep.verdict);
    r.text.push_back(std::string("action: ") + to_string(rep.verdict));
    if (!chi2.empty())
        r.text.push_back("terms of base word length >= 2: " + map_text(chi2));
    if (!fds.commutes)
        r.exit_code = kValidationFailure;
    if (!pd.holds())
        r.warnings.push_back("fiber is not Poincare duality in dimension " + std::to_string(fdim));
}

inline void cmd_probe(const Context& ctx, Report& r) {
    const auto& f = fibration_of(ctx.item(), "probe");
    if (!ctx.options().a || !ctx.options().omega)
        throw UsageError("probe needs --a and --omega");
    if (!require_relative(f, r))
        return;
    const auto& m = f.model;
    const Polynomial a = parse_polynomial(m.base().algebra(), *ctx.options().a);
    const Polynomial omega = parse_polynomial(m.fiber().algebra(), *ctx.options().omega);
    const auto k = m.fiber().algebra().degree_of(omega);
    if (!k)
        throw UsageError("--omega must be a nonzero homogeneous class");
    r.inputs["a"] = m.base().algebra().format(a);
    r.inputs["omega"] = m.fiber().algebra().format(omega);
    const auto p = action_probe(m, a, *k, omega);
    const auto& talg = m.total().algebra();
    r.results["a_nonzero"] = p.a_nonzero;
    r.results["omega_nonzero"] = p.omega_nonzero;
    r.results["lift_found"] = p.lift_found;
    if (p.lift_found) {
        r.results["lift"] = talg.format(p.lift);
        r.results["product"] = talg.format(p.product);
    }
    r.results["product_zero"] = p.product_zero;
    if (p.preimage)
        r.results["preimage"] = talg.format(*p.preimage);
    r.results["detects_nontrivial_action"] = p.detects_nontrivial_action;
    r.text.push_back(std::string("a nonzero: ") + (p.a_nonzero ? "yes" : "no"));
    r.text.push_back(std::string("omega nonzero: ") + (p.omega_nonzero ? "yes" : "no"));
    if (p.lift_found)
        r.text.push_back("lift: " + talg.format(p.lift) + ", p*a . lift = " + talg.format(p.product) +
                         (p.preimage ? " = D(" + talg.format(*p.preimage) + ")" : ""));
    else
        r.text.push_back("no cocycle restricts to omega");
    r.text.push_back(std::string("nontrivial action detected: ") + (p.detects_nontrivial_action ? "yes" : "no"));
    if (!p.detects_nontrivial_action)
        r.exit_code = kInconclusive;
}

inline void cmd_tncz(const Context& ctx, Report& r) {
    const auto& f = fibration_of(ctx.item(), "tncz");
    if (!require_relative(f, r))
        return;
    const int bdim = ctx.base_dim(f), fdim = ctx.fiber_dim(f);
    r.inputs["base_formal_dim"] = bdim;
    r.inputs["fiber_formal_dim"] = fdim;
    const auto t = tncz_check(f.model, bdim, fdim);
    r.results["fiber_betti"] = ints(t.fiber_betti);
    r.results["image_rank"] = ints(t.image_rank);
    r.results["tncz"] = t.tncz;
    r.results["total_rank"] = t.total_rank;
    r.results["base_rank"] = t.base_rank;
    r.results["fiber_rank"] = t.fiber_rank;
    r.results["dimension_identity"] = t.dimension_identity;
    r.text.push_back("fiber betti:     " + ints_text(t.fiber_betti));
    r.text.push_back("restricted rank: " + ints_text(t.image_rank));
    r.text.push_back(std::string("TNCZ: ") + (t.tncz ? "yes" : "no"));
    r.text.push_back("sum of betti numbers: total " + std::to_string(t.total_rank) + ", base x fiber " +
                     std::to_string(t.base_rank) + " x " + std::to_string(t.fiber_rank));
}

inline void cmd_e0bound(const Context& ctx, Report& r) {
    const auto& f = fibration_of(ctx.item(), "e0bound");
    if (!require_relative(f, r))
        return;
    const auto& m = f.model;
    const int fdim = ctx.fiber_dim(f);
    r.inputs["fiber_formal_dim"] = fdim;
    const CohomologyRing hf(m.fiber(), fdim);
    const auto pd = poincare_structure(hf, fdim);
    if (!pd.holds())
        throw Error("e0bound: fiber is not Poincare duality in dimension " + std::to_string(fdim) + " (" + pd.reason +
                    ")");
    const auto c = e0_lower_bound_certificate(m, *pd.structure);
    const auto& talg = m.total().algebra();
    r.results["fiber_e0"] = c.fiber_e0;
    r.results["base_dim"] = c.base_dim;
    r.results["bound"] = c.bound;
    r.results["fiber_top"] = m.fiber().algebra().format(c.fiber_top);
    r.results["cocycle"] = talg.format(c.cocycle);
    r.results["closed"] = c.closed;
    r.results["not_exact"] = c.not_exact;
    r.results["certified"] = c.certified;
    r.text.push_back("e0(fiber) = " + std::to_string(c.fiber_e0) + ", dim(base) = " + std::to_string(c.base_dim));
    r.text.push_back("cocycle: " + talg.format(c.cocycle) + (c.closed ? ", closed" : ", not closed") +
                     (c.not_exact ? ", not exact" : ""));
    r.text.push_back("e₀(E) ≥ " + std::to_string(c.bound));
    r.text.push_back("cat(M) ≥ e₀(F)+dim(N) = " + std::to_string(c.fiber_e0) + "+" + std::to_string(c.base_dim) +
                     " = " + std::to_string(c.bound));
    if (!c.certified)
        r.exit_code = kInconclusive;
}

inline void cmd_untwist(const Context& ctx, Report& r) {
    const auto& f = fibration_of(ctx.item(), "untwist");
    const auto& m = f.model;
    const auto u = untwist_over_circle(m);
    const auto& talg = m.total().algebra();
    const auto& falg = m.fiber().algebra();
    r.results["identity"] = u.identity;
    if (u.obstruction) {
        const auto& o = *u.obstruction;
        r.results["obstruction"] = {{"stage", o.stage},
                                    {"generator", falg.generator(o.generator).name},
                                    {"value", falg.format(o.value)}};
        r.text.push_back("obstruction at stage " + std::to_string(o.stage) + ": theta(" +
                         falg.generator(o.generator).name + ") = " + falg.format(o.value) + " is not exact");
        r.results["isomorphism"] = false;
        r.exit_code = kInconclusive;
        return;
    }
    r.results["eta"] = map_json(falg, falg, u.eta);
    r.results["zeta"] = map_json(falg, falg, u.zeta);
    r.results["isomorphism_images"] = map_json(talg, talg, u.images);
    r.results["conjugated_differential"] = map_json(talg, talg, u.final_differential);
    r.results["equals_product"] = u.equals_product;
    r.results["chain_map"] = u.chain_map;
    r.results["unipotent"] = u.unipotent;
    r.results["isomorphism"] = u.isomorphism();
    if (u.identity)
        r.text.push_back("already a product: theta = 0");
    r.text.push_back("eta: " + map_text(r.results["eta"]));
    r.text.push_back("zeta: " + map_text(r.results["zeta"]));
    std::vector<std::string> moved;
    for (std::size_t g = 0; g < u.images.size(); ++g)
        if (!(u.images[g] == Polynomial::generator(static_cast<int>(g))))
            moved.push_back(talg.generator(static_cast<int>(g)).name + " -> " + talg.format(u.images[g]));
    r.text.push_back("isomorphism: " + (moved.empty() ? std::string("identity") : join(moved, ", ")));
    r.text.push_back("conjugated differential: " + map_text(r.results["conjugated_differential"]));
    r.text.push_back(std::string("equals product differential: ") + (u.equals_product ? "yes" : "no"));
    if (!u.isomorphism())
        r.exit_code = kValidationFailure;
}

inline void cmd_derivations(const Context& ctx, Report& r) {
    const Item& it = ctx.item();
    auto ri = std::get_if<RingItem>(&it);
    if (!ri)
        throw UsageError("derivations needs a ring item, '" + item_name(it) + "' is a " + item_kind(it));
    const auto& ring = ri->ring;
    const auto& alg = ring.algebra();
    auto print = [&](const RingDerivation& d) { return map_json(alg, alg, d.images); };
    r.inputs["nilpotent"] = ctx.options().nilpotent;
    if (!ctx.options().nilpotent) {
        const auto basis = derivation_space(ring, 0);
        json b = json::array();
        r.text.push_back("degree-zero derivations: dimension " + std::to_string(basis.size()));
        for (const auto& d : basis) {
            b.push_back(print(d));
            r.text.push_back("  " + map_text(b.back()));
        }
        r.results["dimension"] = basis.size();
        r.results["basis"] = b;
        return;
    }
    const auto d = nilpotent_derivation_decision(ring);
    json b = json::array(), w = json::array();
    for (const auto& x : d.basis)
        b.push_back(print(x));
    for (const auto& x : d.witnesses)
        w.push_back(print(x));
    r.results["verdict"] = to_string(d.verdict);
    r.results["shape_rule"] = d.shape_rule;
    r.results["shape_reason"] = d.shape_reason;
    r.results["basis"] = b;
    r.results["witnesses"] = w;
    r.results["random_samples"] = d.random_samples;
    r.text.push_back(std::string("nilpotent degree-zero derivations: ") + to_string(d.verdict));
    r.text.push_back("  " + d.shape_reason);
    for (const auto& x : w)
        r.text.push_back("  witness: " + map_text(x));
    if (d.verdict == NilpotentVerdict::UnknownWithBasis) {
        r.text.push_back("  derivation space has dimension " + std::to_string(d.basis.size()));
        r.exit_code = kInconclusive;
    }
}

}  // namespace commands

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"check", "cohomology", "e0",     "cuplength", "ce",      "signature",
                                                "action", "probe",     "tncz",   "e0bound",   "untwist", "derivations"};
    return names;
}

// Runs one subcommand. Engine errors (failed preconditions) become exit code 1;
// UsageError propagates to the caller.
inline Report run_command(const SpecDocument& doc, const std::string& command, const CommandOptions& opt = {}) {
    using namespace commands;
    const Context ctx(doc, opt);
    Report r;
    r.command = command;
    r.item = item_name(ctx.item());
    try {
        if (command == "check")
            cmd_check(ctx, r);
        else if (command == "cohomology")
            cmd_cohomology(ctx, r);
        else if (command == "e0")
            cmd_e0(ctx, r);
        else if (command == "cuplength")
            cmd_cuplength(ctx, r);
        else if (command == "ce")
            cmd_ce(ctx, r);
        else if (command == "signature")
            cmd_signature(ctx, r);
        else if (command == "action")
            cmd_action(ctx, r);
        else if (command == "probe")
            cmd_probe(ctx, r);
        else if (command == "tncz")
            cmd_tncz(ctx, r);
        else if (command == "e0bound")
            cmd_e0bound(ctx, r);
        else if (command == "untwist")
            cmd_untwist(ctx, r);
        else if (command == "derivations")
            cmd_derivations(ctx, r);
        else
            throw UsageError("unknown command '" + command + "'");
    } catch (const UsageError&) {
        throw;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        r.results["error"] = e.what();
        r.text.push_back(std::string("error: ") + e.what());
        r.exit_code = kValidationFailure;
    }
    return r;
}

}  // namespace cdga
