// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "cdga/commands.hpp"
#include "support.hpp"

#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace cdga;
using cdga::testing::corpus_files;
using cdga::testing::get;
using cdga::testing::load;
using cdga::testing::random_element;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream note;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            note << " [failed: " << what << "]";
        }
    }
};

struct Named {
    std::string label;
    Cdga model;
    int dim = 0;
};

int formal_dim_of(const SpecDocument& doc, const std::string& name) {
    const CommandOptions opt;
    const commands::Context ctx(doc, opt);
    const auto d = ctx.declared_dim(name);
    if (!d)
        throw Error("no formal dimension for " + name);
    return *d;
}

Named named(const std::string& file, const std::string& name) {
    const auto doc = load(file);
    const Item* it = doc.find(name);
    if (!it)
        throw Error("no item " + name);
    return {file + ":" + name, commands::model_of(*it), formal_dim_of(doc, name)};
}

std::vector<Named> pd_models() {
    std::vector<Named> out;
    for (const auto& n : {"abelian1", "abelian2", "abelian3", "abelian4", "heis3", "heis3_q", "filiform5", "nil6"})
        out.push_back(named("nilpotent.cdga", n));
    for (const auto& n : {"T2", "T3", "T4", "heis3_model"})
        out.push_back(named("nilpotent.cdga", n));
    for (const auto& n : {"S2", "S4", "CP2", "CP3", "S2xS2", "S2xS4"})
        out.push_back(named("spheres.cdga", n));
    out.push_back(named("bundle_s2_over_kt.cdga", "KT"));
    out.push_back(named("bundle_s2_over_kt.cdga", "X"));
    out.push_back(named("circle_action.cdga", "F"));
    out.push_back(named("circle_action.cdga", "M"));
    out.push_back(named("circle_action_deg5.cdga", "F"));
    out.push_back(named("untwist.cdga", "G"));
    for (const auto& n : {"S1xS2", "T2xS2", "S1xS2xS2", "heis3xCP2"})
        out.push_back(named("products.cdga", n));
    return out;
}

PoincareStructure pd(const Cdga& c, int dim) {
    const auto p = poincare_structure(CohomologyRing(c, dim), dim);
    if (!p.holds())
        throw Error("not a Poincare duality model: " + p.reason);
    return *p.structure;
}

int e0_space(const Cdga& c, int dim) { return e0_of_space(c, dim, true).e0; }

void nilpotent_lie_e0(Check& c) {
    const auto doc = load("nilpotent.cdga");
    int count = 0;
    for (const auto& it : doc.items)
        if (const auto* l = std::get_if<LieItem>(&it)) {
            const int n = l->lie.dim();
            const int e0 = e0_space(chevalley_eilenberg(l->lie), n);
            c.note << " " << l->name << "=" << e0 << "/" << n;
            c.expect(e0 == n, l->name);
            ++count;
        }
    c.expect(count == 8, "eight Lie algebras");
}

void bundle_over_kt(Check& c) {
    const auto doc = load("bundle_s2_over_kt.cdga");
    const auto& f = get<FibrationItem>(doc, "X");
    const auto& m = f.model;
    const Cdga& x = m.total();
    const auto scan = e0_of_space(x, 6, true);
    const auto top = e0_top_class(x, pd(x, 6));
    const int kt = e0_space(m.base(), 4);
    const int s2 = e0_space(m.fiber(), 2);
    c.note << " scan=" << scan.e0 << " top=" << top.e0 << " KT=" << kt << " S2=" << s2;
    c.expect(scan.e0 == 5 && top.e0 == 5, "e0(X) = 5");
    c.expect(kt == 4 && s2 == 1, "e0(KT) = 4, e0(S2) = 1");
    const auto cert = e0_lower_bound_certificate(m, pd(m.fiber(), 2));
    const auto& alg = x.algebra();
    const Polynomial expected = alg.multiply(
        alg.multiply(alg.multiply(alg.multiply(alg.gen("u1"), alg.gen("u2")), alg.gen("u3")), alg.gen("u4")),
        m.include_fiber(cert.fiber_top));
    c.note << " cocycle=" << alg.format(cert.cocycle);
    c.expect(cert.bound == 5 && cert.certified, "certificate bound 5");
    c.expect(cert.cocycle == expected, "cocycle is u1u2u3u4 times the fiber top class");
    c.expect(x.apply_d(cert.cocycle).is_zero(), "closed");
    c.expect(!solve_coboundary(x, 6, cert.cocycle).has_value(), "not exact");
}

void lower_bound_on_relative_models(Check& c) {
    const std::vector<std::pair<std::string, std::string>> models = {
        {"bundle_s2_over_kt.cdga", "X"}, {"circle_action.cdga", "M"}, {"circle_action_deg5.cdga", "M"},
        {"products.cdga", "S1xS2"},      {"products.cdga", "T2xS2"},  {"products.cdga", "S1xS2xS2"},
        {"products.cdga", "heis3xCP2"}};
    for (const auto& [file, name] : models) {
        const auto doc = load(file);
        const auto& f = get<FibrationItem>(doc, name);
        const int fd = formal_dim_of(doc, f.fiber), bd = formal_dim_of(doc, f.base);
        const auto cert = e0_lower_bound_certificate(f.model, pd(f.model.fiber(), fd));
        const int fe0 = e0_space(f.model.fiber(), fd);
        const int te0 = e0_space(f.model.total(), fd + bd);
        c.note << " " << name << ":" << te0 << ">=" << fe0 << "+" << bd;
        c.expect(cert.certified && cert.bound == fe0 + bd, name + " certificate");
        c.expect(te0 >= fe0 + bd, name + " bound");
    }
}

void top_class_agreement(Check& c) {
    int count = 0;
    for (const auto& n : pd_models()) {
        const auto ps = pd(n.model, n.dim);
        const int scan = e0_space(n.model, n.dim);
        const int cls = e0_of_class(n.model, n.dim, ps.top).e0;
        const int top = e0_top_class(n.model, ps).e0;
        c.expect(scan == cls && cls == top, n.label);
        ++count;
    }
    c.note << " " << count << " models";
    c.expect(count >= 8, "at least eight models");
}

LieAlgebraSpec perturb(const LieAlgebraSpec& l, std::mt19937& rng) {
    LieAlgebraSpec p = l;
    const int n = l.dim();
    std::uniform_int_distribution<int> idx(0, n - 1), coeff(-2, 2), edits(1, 2);
    for (int e = edits(rng); e > 0; --e) {
        int i = idx(rng), j = idx(rng);
        if (i == j)
            continue;
        if (i > j)
            std::swap(i, j);
        Vector v = p.bracket(p.unit(i), p.unit(j));
        v[static_cast<std::size_t>(idx(rng))] += coeff(rng);
        p.set_bracket(i, j, v);
    }
    return p;
}

void jacobi_duality(Check& c) {
    const auto doc = load("nilpotent.cdga");
    std::mt19937 rng(7);
    int violations = 0, valid = 0;
    for (const auto& name : {"heis3", "filiform5"}) {
        const auto& base = get<LieItem>(doc, name).lie;
        for (int s = 0; s < 200; ++s) {
            const auto l = perturb(base, rng);
            const bool jacobi = !jacobi_failure(l).has_value();
            const auto v = validate_cdga(ce_differential(l), 3);
            if (jacobi) {
                ++valid;
                c.expect(v.d_squared_zero, std::string(name) + " Jacobi sample validates");
            } else {
                ++violations;
                c.expect(!v.d_squared_zero && !v.failures.empty() && !v.failures.front().d_squared.is_zero(),
                         std::string(name) + " violation has a d^2 witness");
            }
        }
    }
    c.note << " samples=400 jacobi=" << valid << " violations=" << violations;
    c.expect(valid > 0 && violations > 0, "both outcomes sampled");
}

void bundle_chain(Check& c) {
    const auto m = get<FibrationItem>(load("bundle_s2_over_kt.cdga"), "X").model;
    const auto act = action_report(m, extract_fiber_derivations(m), CohomologyRing(m.fiber(), 2), 2);
    const auto inj = pstar_injectivity(m, 3);
    const auto t = tncz_check(m, 4, 2);
    c.note << " action=" << to_string(act.verdict) << " p*3=" << (inj.injective ? "injective" : "not injective")
           << " tncz=" << t.tncz << " " << t.total_rank << "=" << t.base_rank << "*" << t.fiber_rank;
    c.expect(act.verdict == ActionVerdict::Trivial, "theta* = 0");
    c.expect(inj.injective, "p* injective in degree 3");
    c.expect(t.tncz, "TNCZ");
    c.expect(t.total_rank == t.base_rank * t.fiber_rank && t.total_rank == 24, "rank identity");
}

void circle_action_probe(Check& c) {
    const auto m = get<FibrationItem>(load("circle_action.cdga"), "M").model;
    const auto p = action_probe(m, m.base().algebra().gen("x"), 2, m.fiber().algebra().gen("v1"));
    const auto act = action_report(m, extract_fiber_derivations(m), CohomologyRing(m.fiber(), 7), 7);
    const auto* h2 = act.block(0, 2);
    c.note << " probe=" << p.detects_nontrivial_action << " verdict=" << to_string(act.verdict)
           << " index=" << (h2 ? h2->nilpotency_index : -1);
    c.expect(p.detects_nontrivial_action, "probe detects the action");
    c.expect(act.verdict == ActionVerdict::NilpotentNontrivial, "nilpotent-nontrivial");
    c.expect(h2 && h2->nilpotency_index == 2, "index 2 on H^2");

    const auto bad = get<FibrationItem>(load("invalid/circle_action_verbatim.cdga"), "M").model;
    const auto v = validate_relative_model(bad);
    const auto& talg = bad.total().algebra();
    const Polynomial expected = parse_polynomial(talg, "2*x*v1*v2 - 2*x*v2^2");
    bool witnessed = false;
    for (const auto& issue : v.issues)
        witnessed = witnessed || issue.value == expected;
    c.note << " verbatim d^2=0: " << v.d_squared_zero;
    c.expect(!v.d_squared_zero && witnessed, "verbatim differential has the d^2 witness");
}

void derivations_and_untwisting(Check& c) {
    const auto rings = load("rings.cdga");
    for (const auto& name : {"trunc3", "trunc4", "S2xS4", "S2xS2"}) {
        const auto d = nilpotent_derivation_decision(get<RingItem>(rings, name).ring);
        c.expect(d.verdict == NilpotentVerdict::NoneCertified, std::string(name) + " none");
    }
    const auto& r = get<RingItem>(rings, "S2S2_sum").ring;
    const auto& alg = r.algebra();
    const auto d = nilpotent_derivation_decision(r);
    RingDerivation theta;
    theta.images = {-alg.gen("al"), Polynomial(), Polynomial(), alg.gen("b")};
    bool found = false;
    for (const auto& w : d.witnesses) {
        bool same = true;
        for (std::size_t g = 0; g < theta.images.size(); ++g)
            same = same && r.normal_form(w.images[g]) == r.normal_form(theta.images[g]);
        found = found || same;
    }
    const bool kills = r.is_zero(theta.apply(r, alg.multiply(alg.gen("a"), alg.gen("be"))));
    c.note << " sum=" << to_string(d.verdict) << " witnesses=" << d.witnesses.size();
    c.expect(d.verdict == NilpotentVerdict::ExistsWithWitness && found, "connected-sum witness");
    c.expect(is_derivation(r, theta) && is_nilpotent(r, theta) && kills, "theta(a beta) = 0");

    const auto tw = load("untwist.cdga");
    for (const auto& name : {"CP2_trivial", "G_twisted"}) {
        const auto& m = get<FibrationItem>(tw, name).model;
        const auto u = untwist_over_circle(m);
        c.expect(u.isomorphism(), std::string(name) + " isomorphism");
        c.expect(u.final_differential == product_model(m.base(), m.fiber()).total().differentials(),
                 std::string(name) + " product differential");
    }
    c.note << " untwist=isomorphism";
}

int signature_of(const Cdga& c, int dim, const std::optional<Polynomial>& orientation = std::nullopt) {
    const auto p = poincare_structure(CohomologyRing(c, dim), dim, orientation);
    if (!p.holds())
        throw Error("not a Poincare duality model: " + p.reason);
    return signature(*p.structure);
}

void signatures(Check& c) {
    const auto cp2 = named("spheres.cdga", "CP2");
    const auto kt = named("bundle_s2_over_kt.cdga", "KT");
    const int s_cp2 = signature_of(cp2.model, 4), s_kt = signature_of(kt.model, 4);
    c.note << " CP2=" << s_cp2 << " KT=" << s_kt;
    c.expect(s_cp2 == 1, "sigma(CP2) = 1");
    c.expect(s_kt == 0, "sigma(KT) = 0");
    const std::vector<std::pair<Named, Named>> pairs = {
        {cp2, cp2}, {cp2, named("spheres.cdga", "S2xS2")}, {kt, cp2}, {named("spheres.cdga", "S2"), named("spheres.cdga", "S2")}};
    for (const auto& [a, b] : pairs) {
        const Cdga prod = tensor_product(a.model, rename_generators(b.model, "'"));
        const auto pa = pd(a.model, a.dim), pb = pd(b.model, b.dim);
        const Polynomial top = prod.algebra().multiply(pa.top, shift_generators(pb.top, a.model.size()));
        const int sa = signature(pa), sb = signature(pb);
        const int sp = signature_of(prod, a.dim + b.dim, top);
        c.note << " " << sp << "=" << sa << "*" << sb;
        c.expect(sp == sa * sb, a.label + " x " + b.label);
    }
}

void property_suites(Check& c) {
    std::mt19937 rng(20240611);
    int samples = 0;
    for (const auto& [file, name, max_deg] : std::vector<std::tuple<std::string, std::string, int>>{
             {"bundle_s2_over_kt.cdga", "X", 4}, {"untwist.cdga", "G", 5}, {"circle_action.cdga", "M", 4}}) {
        const Cdga model = named(file, name).model;
        const auto& alg = model.algebra();
        std::uniform_int_distribution<int> deg(0, max_deg);
        for (int s = 0; s < 1200; ++s) {
            const int da = deg(rng), db = deg(rng), dc = deg(rng);
            const auto a = random_element(alg, da, rng), b = random_element(alg, db, rng),
                       e = random_element(alg, dc, rng);
            const Rational sign = (da * db) % 2 ? Rational(-1) : Rational(1);
            c.expect(alg.multiply(a, b) == alg.multiply(b, a) * sign, "graded commutativity");
            c.expect(alg.multiply(alg.multiply(a, b), e) == alg.multiply(a, alg.multiply(b, e)), "associativity");
            const Rational leib = da % 2 ? Rational(-1) : Rational(1);
            c.expect(model.apply_d(alg.multiply(a, b)) ==
                         alg.multiply(model.apply_d(a), b) + alg.multiply(a, model.apply_d(b)) * leib,
                     "Leibniz");
            samples += 3;
        }
    }
    c.note << " law samples=" << samples;
    c.expect(samples >= 10000, "at least 10^4 samples");

    int models = 0;
    for (const auto& file : corpus_files()) {
        const auto doc = load(file);
        for (const auto& it : doc.items) {
            if (std::holds_alternative<RingItem>(it))
                continue;
            const Cdga m = commands::model_of(it);
            c.expect(validate_cdga(m, m.algebra().max_generator_degree() + 1).d_squared_zero,
                     file + ":" + item_name(it) + " d^2 = 0");
            ++models;
        }
    }
    c.note << " d^2 models=" << models;

    bool strict_heis = false;
    for (const auto& n : pd_models()) {
        const auto rep = e0_of_space(n.model, n.dim, true);
        bool seen = false;
        for (bool inj : rep.injective_at) {
            c.expect(!seen || inj, n.label + " injectivity monotone");
            seen = seen || inj;
        }
        const int cl = cup_length(CohomologyRing(n.model, n.dim), n.dim);
        c.expect(cl <= rep.e0, n.label + " cup length <= e0");
        if (n.label == "nilpotent.cdga:heis3")
            strict_heis = cl == 2 && rep.e0 == 3;
    }
    c.expect(strict_heis, "heis3 cup length 2 < e0 3");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
        {"e0 of nilmanifold models equals dimension", nilpotent_lie_e0},
        {"bundle over KT: e0 = 5 with certified cocycle", bundle_over_kt},
        {"e0(E) >= e0(F) + dim(N) on relative models", lower_bound_on_relative_models},
        {"scan, class and top-class e0 agree", top_class_agreement},
        {"Jacobi identity <=> d^2 = 0 on perturbations", jacobi_duality},
        {"trivial action, injectivity and TNCZ on the KT bundle", bundle_chain},
        {"circle action probe and nilpotent action", circle_action_probe},
        {"nilpotent derivations and untwisting", derivations_and_untwisting},
        {"signatures and product formula", signatures},
        {"property suites", property_suites},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.note << " [exception: " << e.what() << "]";
        }
        failed += c.ok ? 0 : 1;
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " --"
                  << c.note.str() << "\n";
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
