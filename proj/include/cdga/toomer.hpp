#pragma once

// Word-length truncations rho_s : Lambda W -> Lambda W / Lambda^{>s} W and
// the Toomer invariant e0, by the injectivity scan and by top-class search.

#include "cdga/cdga.hpp"
#include "cdga/cohomology.hpp"
#include "cdga/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdga {

class TruncatedModel {
public:
    TruncatedModel(Cdga source, int cutoff) : source_(std::move(source)), cutoff_(cutoff) {
        if (cutoff < 0)
            throw Error("truncation cutoff must be non-negative");
    }

    const Cdga& source() const { return source_; }
    int cutoff() const { return cutoff_; }

    GradedBasis basis(int degree) const { return GradedBasis(source_.algebra().basis(degree, cutoff_)); }

    Polynomial project(const Polynomial& p) const { return p.word_length_window(0, cutoff_); }

    // d-bar on the quotient; p is read through the projection first.
    Polynomial differential(const Polynomial& p) const { return project(source_.apply_d(project(p))); }

    // Matrix of d-bar from degree k to degree k+1.
    Matrix differential_matrix(int k) const {
        const GradedBasis from = basis(k), to = basis(k + 1);
        Matrix m(to.size(), from.size());
        for (int j = 0; j < from.size(); ++j) {
            const Polynomial image = differential(Polynomial(from.monomials()[static_cast<std::size_t>(j)]));
            for (const auto& [mono, c] : image.terms())
                m.at(*to.index_of(mono), j) = c;
        }
        return m;
    }

    // sigma with d-bar(sigma) = rho_s(p) in degree k, or nullopt.
    std::optional<Polynomial> coboundary_preimage(int k, const Polynomial& p) const {
        if (k == 0)
            return project(p).is_zero() ? std::optional<Polynomial>(Polynomial()) : std::nullopt;
        auto x = solve(differential_matrix(k - 1), basis(k).coords(project(p)));
        if (!x)
            return std::nullopt;
        return basis(k - 1).polynomial(*x);
    }

    CohomologyRing cohomology(int max_degree) const { return CohomologyRing(source_, max_degree, cutoff_); }

private:
    Cdga source_;
    int cutoff_ = 0;
};

inline TruncatedModel truncate_model(const Cdga& c, int s) { return TruncatedModel(c, s); }

struct ClassToomer {
    int e0 = 0;
    // rho_{e0-1}(rep) = d-bar(preimage); absent when e0 = 0.
    std::optional<Polynomial> preimage;
};

// Smallest s with rho_s^*[rep] != 0. rep must be a cocycle of degree k
// representing a nonzero class.
inline ClassToomer e0_of_class(const Cdga& c, int k, const Polynomial& rep) {
    if (k < 0)
        throw Error("e0_of_class: negative degree");
    if (!c.algebra().is_homogeneous(rep, k))
        throw Error("e0_of_class: representative is not homogeneous of degree " + std::to_string(k));
    if (!c.apply_d(rep).is_zero())
        throw Error("e0_of_class: representative is not a cocycle");
    ClassToomer out;
    std::optional<Polynomial> last;
    for (int s = 0; s <= k; ++s) {
        auto pre = TruncatedModel(c, s).coboundary_preimage(k, rep);
        if (!pre) {
            out.e0 = s;
            out.preimage = last;
            return out;
        }
        last = std::move(pre);
    }
    throw Error("e0_of_class: the class is zero");
}

enum class ToomerMethod { InjectivityScan, TopClass };

inline const char* to_string(ToomerMethod m) {
    return m == ToomerMethod::InjectivityScan ? "injectivity-scan" : "top-class-representative";
}

struct ToomerReport {
    int e0 = 0;
    ToomerMethod method = ToomerMethod::InjectivityScan;
    // Injectivity scan: a class of degree witness_degree killed by rho_{e0-1},
    // with d-bar(witness_preimage) = rho_{e0-1}(witness). Top class: the
    // representative of maximal word length.
    Polynomial witness;
    int witness_degree = 0;
    std::optional<Polynomial> witness_preimage;
    bool certified = false;
    bool presentation_dependent = false;
    std::vector<bool> injective_at;  // index s
};

namespace detail {

// Kernel of H^k(rho_s) as combinations of the stored representatives.
inline std::vector<Vector> truncation_kernel(const CohomologyRing& h, const TruncatedModel& t, int k) {
    const auto& reps = h.representatives(k);
    if (reps.empty())
        return {};
    const GradedBasis target = t.basis(k);
    std::vector<Vector> cols;
    for (const auto& z : reps)
        cols.push_back(target.coords(t.project(z)));
    const std::size_t nreps = cols.size();
    if (k > 0) {
        const Matrix dm = t.differential_matrix(k - 1);
        for (int j = 0; j < dm.cols(); ++j)
            cols.push_back(dm.column(j));
    }
    std::vector<Vector> out;
    for (auto& v : kernel_basis(Matrix::from_columns(target.size(), cols))) {
        v.resize(nreps);
        if (!is_zero(v))
            out.push_back(std::move(v));
    }
    if (out.empty())
        return out;
    return independent_subset(static_cast<int>(nreps), out);
}

}  // namespace detail

// Smallest s such that rho_s is injective on H^k for all k <= max_degree.
// `exhausted` asserts that max_degree bounds all nonzero cohomology.
inline ToomerReport e0_of_space(const Cdga& c, int max_degree, bool exhausted) {
    const CohomologyRing h(c, max_degree);
    ToomerReport r;
    r.method = ToomerMethod::InjectivityScan;
    r.certified = exhausted;
    const auto v = validate_cdga(c, std::max(max_degree, c.algebra().max_generator_degree() + 1));
    r.presentation_dependent = !v.is_minimal;
    int top_s = 0;
    for (int k = 1; k <= max_degree; ++k)
        if (h.betti(k) > 0)
            top_s = k;
    r.injective_at.assign(static_cast<std::size_t>(top_s) + 1, true);
    std::vector<std::optional<std::pair<int, Vector>>> kernel_witness(static_cast<std::size_t>(top_s) + 1);
    for (int k = 1; k <= max_degree; ++k) {
        if (h.betti(k) == 0)
            continue;
        for (int s = 0; s < k; ++s) {
            const auto ker = detail::truncation_kernel(h, TruncatedModel(c, s), k);
            if (ker.empty())
                continue;
            r.injective_at[static_cast<std::size_t>(s)] = false;
            if (!kernel_witness[static_cast<std::size_t>(s)])
                kernel_witness[static_cast<std::size_t>(s)] = std::pair{k, ker.front()};
        }
    }
    bool seen_injective = false;
    for (std::size_t s = 0; s < r.injective_at.size(); ++s) {
        if (seen_injective && !r.injective_at[s])
            throw Error("internal inconsistency: truncation injectivity is not monotone");
        if (r.injective_at[s] && !seen_injective) {
            seen_injective = true;
            r.e0 = static_cast<int>(s);
        }
    }
    if (r.e0 > 0) {
        const auto& [k, coords] = *kernel_witness[static_cast<std::size_t>(r.e0) - 1];
        r.witness_degree = k;
        r.witness = h.class_polynomial(k, coords);
        r.witness_preimage = TruncatedModel(c, r.e0 - 1).coboundary_preimage(k, r.witness);
    }
    return r;
}

// Largest k such that top + d(sigma) lies in Lambda^{>=k} for some sigma.
inline ToomerReport e0_top_class(const Cdga& c, const PoincareStructure& ps) {
    const int m = ps.dimension;
    const GradedBasis target(c.algebra().basis(m));
    const GradedBasis source(c.algebra().basis(m - 1));
    const Matrix dm = differential_matrix(c, source, target);
    const Vector mu = target.coords(ps.top);
    ToomerReport r;
    r.method = ToomerMethod::TopClass;
    r.certified = true;
    r.witness_degree = m;
    r.witness = ps.top;
    r.presentation_dependent = !validate_cdga(c, std::max(m, c.algebra().max_generator_degree() + 1)).is_minimal;
    r.e0 = ps.top.min_word_length();
    int max_wl = 0;
    for (const auto& mono : target.monomials())
        max_wl = std::max(max_wl, mono.word_length());
    for (int k = r.e0 + 1; k <= max_wl; ++k) {
        std::vector<int> low;
        for (int i = 0; i < target.size(); ++i)
            if (target.monomials()[static_cast<std::size_t>(i)].word_length() < k)
                low.push_back(i);
        Matrix sys(static_cast<int>(low.size()), source.size());
        Vector rhs(low.size());
        for (std::size_t i = 0; i < low.size(); ++i) {
            for (int j = 0; j < source.size(); ++j)
                sys.at(static_cast<int>(i), j) = dm.at(low[i], j);
            rhs[i] = -mu[static_cast<std::size_t>(low[i])];
        }
        auto sigma = solve(sys, rhs);
        if (!sigma)
            break;
        r.e0 = k;
        r.witness = ps.top + c.apply_d(source.polynomial(*sigma));
        r.witness_preimage = source.polynomial(*sigma);
    }
    return r;
}

}  // namespace cdga
