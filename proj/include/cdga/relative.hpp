#pragma once

// Relative models (Lambda V (x) Lambda W, D) of fibrations over nilmanifolds:
// twisting derivations, action detection, TNCZ, injectivity of p^* and the
// top-class certificate for e0 of the total space.

#include "cdga/cdga.hpp"
#include "cdga/cohomology.hpp"
#include "cdga/toomer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdga {

// Total algebra has the base generators first (ids 0..n-1), then the fiber
// generators (ids n..n+r-1).
class RelativeModel {
public:
    RelativeModel() = default;

    // fiber_d[j] is D of fiber generator j, written over the total alphabet.
    RelativeModel(Cdga base, Cdga fiber, std::vector<Polynomial> fiber_d)
        : base_(std::move(base)), fiber_(std::move(fiber)) {
        if (static_cast<int>(fiber_d.size()) != fiber_.size())
            throw Error("relative model needs one total differential per fiber generator");
        std::vector<Generator> gens = base_.algebra().generators();
        for (const auto& g : fiber_.algebra().generators())
            gens.push_back(g);
        std::vector<Polynomial> d = base_.differentials();
        for (auto& p : fiber_d)
            d.push_back(std::move(p));
        total_ = Cdga(FreeAlgebra(std::move(gens), std::max(base_.algebra().cap(), fiber_.algebra().cap())),
                      std::move(d));
    }

    const Cdga& base() const { return base_; }
    const Cdga& fiber() const { return fiber_; }
    const Cdga& total() const { return total_; }
    int base_size() const { return base_.size(); }

    int fiber_id(int j) const { return base_.size() + j; }
    const Polynomial& D(int fiber_gen) const { return total_.d(fiber_id(fiber_gen)); }

    Polynomial include_base(const Polynomial& p) const { return p; }
    Polynomial include_fiber(const Polynomial& p) const { return shift_generators(p, base_.size()); }

    // rho: quotient by the ideal generated by the base generators.
    Polynomial restrict_to_fiber(const Polynomial& p) const {
        Polynomial out;
        for (const auto& [m, c] : p.terms())
            if (base_length(m) == 0)
                out.add_term(m, c);
        return shift_generators(out, -base_.size());
    }

    int base_length(const Monomial& m) const {
        int n = 0;
        for (const auto& f : m.factors())
            if (f.gen < base_.size())
                n += f.exp;
        return n;
    }

    bool operator==(const RelativeModel& o) const {
        return base_ == o.base_ && fiber_ == o.fiber_ && total_ == o.total_;
    }

private:
    Cdga base_;
    Cdga fiber_;
    Cdga total_;
};

// D(w) = d_W(w) on every fiber generator.
inline RelativeModel product_model(const Cdga& base, const Cdga& fiber) {
    std::vector<Polynomial> d;
    for (const auto& p : fiber.differentials())
        d.push_back(shift_generators(p, base.size()));
    return RelativeModel(base, fiber, std::move(d));
}

struct RelativeIssue {
    std::string generator;
    std::string problem;
    Polynomial value;  // over the total alphabet
};

struct RelativeReport {
    bool d_squared_zero = true;
    bool restricts_to_fiber = true;  // rho(D w) = d_W(w)
    bool relative_minimal = true;    // the Lambda W part of D(w) has word length >= 2
    bool relative_sullivan = true;
    bool base_in_degree_one = true;
    bool fiber_simply_connected = true;
    bool base_valid = true;
    bool fiber_valid = true;
    std::vector<RelativeIssue> issues;

    bool valid() const { return d_squared_zero && restricts_to_fiber && relative_sullivan && base_valid && fiber_valid; }
};

inline RelativeReport validate_relative_model(const RelativeModel& m) {
    RelativeReport r;
    const auto& total = m.total();
    const auto& alg = total.algebra();
    r.base_valid = m.base().d_squared_zero();
    r.fiber_valid = m.fiber().d_squared_zero();
    for (const auto& g : m.base().algebra().generators())
        if (g.degree != 1)
            r.base_in_degree_one = false;
    for (const auto& g : m.fiber().algebra().generators())
        if (g.degree < 2)
            r.fiber_simply_connected = false;
    for (int g = 0; g < total.size(); ++g) {
        Polynomial dd = total.apply_d(total.d(g));
        if (!dd.is_zero()) {
            r.d_squared_zero = false;
            r.issues.push_back({alg.generator(g).name, "D^2 != 0", std::move(dd)});
        }
    }
    for (int j = 0; j < m.fiber().size(); ++j) {
        const auto& name = m.fiber().algebra().generator(j).name;
        const Polynomial fiber_part = m.restrict_to_fiber(m.D(j));
        if (!(fiber_part == m.fiber().d(j))) {
            r.restricts_to_fiber = false;
            r.issues.push_back({name, "D(w) - d_W(w) is not in the ideal of the base",
                                m.D(j) - m.include_fiber(m.fiber().d(j))});
        }
        if (!fiber_part.is_zero() && fiber_part.min_word_length() < 2) {
            r.relative_minimal = false;
            r.issues.push_back({name, "linear term in the fiber part of D(w)", m.include_fiber(fiber_part)});
        }
    }
    r.relative_sullivan = static_cast<int>(sullivan_order(total).size()) == total.size();
    if (!r.relative_sullivan)
        r.issues.push_back({"", "no triangular generator order exists", Polynomial()});
    return r;
}

struct FiberDerivationSet {
    // theta[i][j]: theta_i of fiber generator j, over the fiber alphabet.
    std::vector<std::vector<Polynomial>> theta;
    // chi2[j]: part of D(w_j) of base word length >= 2, over the total alphabet.
    std::vector<Polynomial> chi2;
    bool commutes = true;
    std::vector<std::pair<int, int>> non_commuting;  // (i, fiber generator)

    Polynomial apply(const Cdga& fiber, int i, const Polynomial& p) const {
        return fiber.algebra().apply_derivation(theta[static_cast<std::size_t>(i)], 0, p);
    }

    bool all_zero() const {
        for (const auto& t : theta)
            for (const auto& p : t)
                if (!p.is_zero())
                    return false;
        return true;
    }
};

// Splits D(w) = d_W(w) + sum v_i theta_i(w) + chi_2(w) by base word length.
inline FiberDerivationSet extract_fiber_derivations(const RelativeModel& m) {
    const int n = m.base_size();
    const int r = m.fiber().size();
    FiberDerivationSet out;
    out.theta.assign(static_cast<std::size_t>(n), std::vector<Polynomial>(static_cast<std::size_t>(r)));
    out.chi2.resize(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j) {
        Polynomial length0;
        for (const auto& [mono, c] : m.D(j).terms()) {
            const int bl = m.base_length(mono);
            if (bl == 0) {
                length0.add_term(mono, c);
            } else if (bl == 1) {
                // The base factor has the smallest id, so it already stands first.
                const auto& fs = mono.factors();
                std::vector<Factor> rest(fs.begin() + 1, fs.end());
                for (auto& f : rest)
                    f.gen -= n;
                out.theta[static_cast<std::size_t>(fs.front().gen)][static_cast<std::size_t>(j)].add_term(
                    Monomial(std::move(rest)), c);
            } else {
                out.chi2[static_cast<std::size_t>(j)].add_term(mono, c);
            }
        }
        if (!(m.restrict_to_fiber(length0) == m.fiber().d(j)))
            throw Error("fiber part of D(" + m.fiber().algebra().generator(j).name + ") differs from d_W");
    }
    const auto& fiber = m.fiber();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) {
            const Polynomial lhs = out.apply(fiber, i, fiber.d(j));
            const Polynomial rhs = fiber.apply_d(out.theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            if (!(lhs == rhs)) {
                out.commutes = false;
                out.non_commuting.emplace_back(i, j);
            }
        }
    return out;
}

// d_W(w) + sum v_i theta_i(w) + chi_2(w), over the total alphabet.
inline Polynomial reassemble(const RelativeModel& m, const FiberDerivationSet& fds, int j) {
    Polynomial out = m.include_fiber(m.fiber().d(j));
    for (int i = 0; i < m.base_size(); ++i)
        out += m.total().algebra().multiply(Polynomial::generator(i),
                                            m.include_fiber(fds.theta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    out += fds.chi2[static_cast<std::size_t>(j)];
    return out;
}

enum class ActionVerdict { Trivial, NilpotentNontrivial, NonNilpotent };

inline const char* to_string(ActionVerdict v) {
    switch (v) {
    case ActionVerdict::Trivial:
        return "trivial";
    case ActionVerdict::NilpotentNontrivial:
        return "nilpotent-nontrivial";
    default:
        return "non-nilpotent";
    }
}

struct DegreeAction {
    int base_generator = 0;
    int degree = 0;
    Matrix matrix;  // columns: theta_i^* of the stored class basis
    bool trivial = true;
    bool nilpotent = true;
    int nilpotency_index = 0;  // smallest N with matrix^N = 0; 0 for an empty block
};

struct ActionReport {
    std::vector<DegreeAction> blocks;
    ActionVerdict verdict = ActionVerdict::Trivial;
    bool top_class_killed = true;  // theta_i^*[mu] = 0 for all i, when PD and nilpotent

    const DegreeAction* block(int base_generator, int degree) const {
        for (const auto& b : blocks)
            if (b.base_generator == base_generator && b.degree == degree)
                return &b;
        return nullptr;
    }
};

inline ActionReport action_report(const RelativeModel& m, const FiberDerivationSet& fds, const CohomologyRing& fiber_h,
                                  std::optional<int> formal_dim = std::nullopt) {
    ActionReport r;
    bool trivial = true, nilpotent = true;
    for (int i = 0; i < m.base_size(); ++i)
        for (int k = 0; k <= fiber_h.max_degree(); ++k) {
            const int b = fiber_h.betti(k);
            DegreeAction blk;
            blk.base_generator = i;
            blk.degree = k;
            blk.matrix = Matrix(b, b);
            for (int c = 0; c < b; ++c) {
                const Vector col = fiber_h.reduce_to_class(
                    k, fds.apply(m.fiber(), i, fiber_h.representatives(k)[static_cast<std::size_t>(c)]));
                for (int row = 0; row < b; ++row)
                    blk.matrix.at(row, c) = col[static_cast<std::size_t>(row)];
            }
            blk.trivial = blk.matrix.is_zero();
            blk.nilpotent = false;
            Matrix power = Matrix::identity(b);
            for (int e = 0; e <= b; ++e) {
                if (power.is_zero()) {
                    blk.nilpotent = true;
                    blk.nilpotency_index = e;
                    break;
                }
                power = power * blk.matrix;
            }
            trivial = trivial && blk.trivial;
            nilpotent = nilpotent && blk.nilpotent;
            if (formal_dim && k == *formal_dim && blk.nilpotent && !blk.trivial)
                r.top_class_killed = false;
            r.blocks.push_back(std::move(blk));
        }
    r.verdict = trivial ? ActionVerdict::Trivial
                        : (nilpotent ? ActionVerdict::NilpotentNontrivial : ActionVerdict::NonNilpotent);
    if (formal_dim && nilpotent && !r.top_class_killed)
        throw Error("internal inconsistency: nilpotent action moves the top class");
    return r;
}

struct ProbeResult {
    bool a_nonzero = false;
    bool omega_nonzero = false;
    bool lift_found = false;
    bool product_zero = false;
    bool detects_nontrivial_action = false;
    Polynomial lift;                     // D-cocycle in the total model with rho(lift) = [omega]
    Polynomial product;                  // p^*a . lift
    std::optional<Polynomial> preimage;  // D(preimage) = product, when exact
};

// Lifts omega in H^k(fiber) to a D-cocycle and tests whether p^*a . lift is exact.
inline ProbeResult action_probe(const RelativeModel& m, const Polynomial& a, int k, const Polynomial& omega) {
    for (const auto& g : m.fiber().algebra().generators())
        if (g.degree < k)
            throw Error("probe: fiber generator '" + g.name + "' lies below degree " + std::to_string(k));
    const auto& base = m.base();
    const auto& fiber = m.fiber();
    const auto& total = m.total();
    if (!base.algebra().is_homogeneous(a, 1) || !base.apply_d(a).is_zero())
        throw Error("probe: a must be a degree-1 cocycle of the base");
    if (!fiber.algebra().is_homogeneous(omega, k) || !fiber.apply_d(omega).is_zero())
        throw Error("probe: omega must be a degree-" + std::to_string(k) + " cocycle of the fiber");
    ProbeResult r;
    r.a_nonzero = !solve_coboundary(base, 1, a).has_value();
    r.omega_nonzero = !solve_coboundary(fiber, k, omega).has_value();

    // Unknowns: lift in total degree k, tau in fiber degree k-1.
    // Equations: D(lift) = 0 and rho(lift) - d_W(tau) = omega.
    const GradedBasis tk(total.algebra().basis(k));
    const GradedBasis tk1(total.algebra().basis(k + 1));
    const GradedBasis fk(fiber.algebra().basis(k));
    const GradedBasis fkm(fiber.algebra().basis(k - 1));
    const Matrix dtot = differential_matrix(total, tk, tk1);
    const Matrix dfib = k >= 1 ? differential_matrix(fiber, fkm, fk) : Matrix(fk.size(), 0);
    Matrix sys(tk1.size() + fk.size(), tk.size() + fkm.size());
    for (int i = 0; i < tk1.size(); ++i)
        for (int j = 0; j < tk.size(); ++j)
            sys.at(i, j) = dtot.at(i, j);
    for (int j = 0; j < tk.size(); ++j) {
        const Polynomial rho = m.restrict_to_fiber(Polynomial(tk.monomials()[static_cast<std::size_t>(j)]));
        for (const auto& [mono, c] : rho.terms())
            sys.at(tk1.size() + *fk.index_of(mono), j) = c;
    }
    for (int i = 0; i < fk.size(); ++i)
        for (int j = 0; j < fkm.size(); ++j)
            sys.at(tk1.size() + i, tk.size() + j) = -dfib.at(i, j);
    Vector rhs(static_cast<std::size_t>(sys.rows()));
    const Vector w = fk.coords(omega);
    for (int i = 0; i < fk.size(); ++i)
        rhs[static_cast<std::size_t>(tk1.size() + i)] = w[static_cast<std::size_t>(i)];
    auto x = solve(sys, rhs);
    if (!x)
        return r;
    x->resize(static_cast<std::size_t>(tk.size()));
    r.lift_found = true;
    r.lift = tk.polynomial(*x);
    r.product = total.algebra().multiply(m.include_base(a), r.lift);
    r.preimage = solve_coboundary(total, k + 1, r.product);
    r.product_zero = r.preimage.has_value();
    r.detects_nontrivial_action = r.product_zero && r.a_nonzero && r.omega_nonzero;
    return r;
}

struct TnczReport {
    std::vector<int> fiber_betti;
    std::vector<int> image_rank;  // rank of H^k(total) -> H^k(fiber)
    std::vector<bool> surjective;
    bool tncz = true;
    int total_rank = 0, base_rank = 0, fiber_rank = 0;
    bool dimension_identity = false;
};

// Restriction to the fiber in degrees <= fiber_dim; total cohomology through
// base_dim + fiber_dim.
inline TnczReport tncz_check(const RelativeModel& m, int base_dim, int fiber_dim) {
    TnczReport r;
    const CohomologyRing hb(m.base(), base_dim);
    const CohomologyRing hf(m.fiber(), fiber_dim);
    const CohomologyRing ht(m.total(), base_dim + fiber_dim);
    for (int k = 0; k <= fiber_dim; ++k) {
        std::vector<Vector> images;
        for (const auto& z : ht.representatives(k))
            images.push_back(hf.reduce_to_class(k, m.restrict_to_fiber(z)));
        const int rk = images.empty() ? 0 : rank(Matrix::from_columns(hf.betti(k), images));
        r.fiber_betti.push_back(hf.betti(k));
        r.image_rank.push_back(rk);
        r.surjective.push_back(rk == hf.betti(k));
        r.tncz = r.tncz && rk == hf.betti(k);
    }
    r.total_rank = ht.total_rank();
    r.base_rank = hb.total_rank();
    r.fiber_rank = hf.total_rank();
    r.dimension_identity = r.total_rank == r.base_rank * r.fiber_rank;
    return r;
}

struct InjectivityReport {
    bool injective = true;
    int base_betti = 0;
    int image_rank = 0;
    std::optional<Polynomial> kernel_witness;  // base cocycle that becomes exact in the total model
};

inline InjectivityReport pstar_injectivity(const RelativeModel& m, int k) {
    InjectivityReport r;
    const CohomologyRing hb(m.base(), k);
    const auto& total = m.total();
    r.base_betti = hb.betti(k);
    if (r.base_betti == 0)
        return r;
    const GradedBasis tk(total.algebra().basis(k));
    std::vector<Vector> cols;
    for (const auto& z : hb.representatives(k))
        cols.push_back(tk.coords(m.include_base(z)));
    const std::size_t nreps = cols.size();
    if (k > 0) {
        const Matrix d = differential_matrix(total, GradedBasis(total.algebra().basis(k - 1)), tk);
        for (int j = 0; j < d.cols(); ++j)
            cols.push_back(d.column(j));
    }
    const Matrix mat = Matrix::from_columns(tk.size(), cols);
    const auto e = row_reduce(mat);
    int rank_image = 0;
    for (int p : e.pivots)
        if (p < static_cast<int>(nreps))
            ++rank_image;
    r.image_rank = rank_image;
    r.injective = rank_image == r.base_betti;
    if (!r.injective)
        for (auto v : kernel_basis(e)) {
            v.resize(nreps);
            if (!is_zero(v)) {
                r.kernel_witness = hb.class_polynomial(k, v);
                break;
            }
        }
    return r;
}

struct E0Certificate {
    int fiber_e0 = 0;
    int base_dim = 0;
    int bound = 0;
    Polynomial fiber_top;  // mu in Lambda^{>= fiber_e0} W
    Polynomial cocycle;    // v_1...v_n mu in the total model
    bool closed = false;
    bool not_exact = false;
    int total_top_rank = -1;  // dim H^{n+m}(total)
    bool certified = false;
};

// v_1...v_n . mu is a nonzero class of word length >= n + e0(F).
inline E0Certificate e0_lower_bound_certificate(const RelativeModel& m, const PoincareStructure& fiber_ps) {
    for (const auto& g : m.base().algebra().generators())
        if (g.degree != 1)
            throw Error("e0bound: base generator '" + g.name + "' is not of degree 1");
    E0Certificate c;
    const auto top = e0_top_class(m.fiber(), fiber_ps);
    c.fiber_e0 = top.e0;
    c.fiber_top = top.witness;
    c.base_dim = m.base_size();
    c.bound = c.fiber_e0 + c.base_dim;
    const auto& total = m.total();
    Polynomial vol = Polynomial::constant(1);
    for (int i = 0; i < m.base_size(); ++i)
        vol = total.algebra().multiply(vol, Polynomial::generator(i));
    c.cocycle = total.algebra().multiply(vol, m.include_fiber(c.fiber_top));
    c.closed = total.apply_d(c.cocycle).is_zero();
    const int deg = c.base_dim + fiber_ps.dimension;
    c.not_exact = c.closed && !solve_coboundary(total, deg, c.cocycle).has_value();
    if (c.closed && !c.not_exact)
        throw Error("e0bound: v_1...v_n mu is exact, which contradicts the fiber top class (inconsistent model)");
    c.total_top_rank = local_betti(total, deg);
    c.certified = c.closed && c.not_exact;
    return c;
}

}  // namespace cdga
