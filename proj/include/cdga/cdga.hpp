#pragma once

// Free commutative differential graded algebras (Lambda V, d) with their
// structural checks.

#include "cdga/graded.hpp"
#include "cdga/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace cdga {

// Monomial coordinates for one graded piece.
class GradedBasis {
public:
    GradedBasis() = default;
    explicit GradedBasis(std::vector<Monomial> monomials) : monomials_(std::move(monomials)) {
        for (std::size_t i = 0; i < monomials_.size(); ++i)
            index_.emplace(monomials_[i], static_cast<int>(i));
    }

    int size() const { return static_cast<int>(monomials_.size()); }
    const std::vector<Monomial>& monomials() const { return monomials_; }

    std::optional<int> index_of(const Monomial& m) const {
        auto it = index_.find(m);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    Vector coords(const Polynomial& p) const {
        Vector v(monomials_.size());
        for (const auto& [m, c] : p.terms()) {
            auto i = index_of(m);
            if (!i)
                throw Error("polynomial has a term outside the graded basis");
            v[static_cast<std::size_t>(*i)] = c;
        }
        return v;
    }

    Polynomial polynomial(std::span<const Rational> v) const {
        Polynomial p;
        for (std::size_t i = 0; i < monomials_.size(); ++i)
            p.add_term(monomials_[i], v[i]);
        return p;
    }

private:
    std::vector<Monomial> monomials_;
    std::map<Monomial, int, MonomialLess> index_;
};

// Relabels generator ids by a constant offset (order is preserved).
inline Polynomial shift_generators(const Polynomial& p, int offset) {
    Polynomial out;
    for (const auto& [m, c] : p.terms()) {
        std::vector<Factor> fs = m.factors();
        for (auto& f : fs)
            f.gen += offset;
        out.add_term(Monomial(std::move(fs)), c);
    }
    return out;
}

class Cdga {
public:
    Cdga() = default;

    // `differential[g]` is d of generator g; missing trailing entries are zero.
    Cdga(FreeAlgebra algebra, std::vector<Polynomial> differential)
        : algebra_(std::move(algebra)), d_(std::move(differential)) {
        if (static_cast<int>(d_.size()) > algebra_.size())
            throw Error("more differentials than generators");
        d_.resize(static_cast<std::size_t>(algebra_.size()));
        for (int g = 0; g < algebra_.size(); ++g) {
            const auto& img = d_[static_cast<std::size_t>(g)];
            for (const auto& [m, c] : img.terms())
                for (const auto& f : m.factors())
                    if (f.gen < 0 || f.gen >= algebra_.size())
                        throw Error("differential refers to an unknown generator");
            if (!algebra_.is_homogeneous(img, algebra_.generator(g).degree + 1))
                throw Error("differential of '" + algebra_.generator(g).name + "' is not homogeneous of degree " +
                            std::to_string(algebra_.generator(g).degree + 1));
        }
        d_squared_zero_ = true;
        for (int g = 0; g < algebra_.size() && d_squared_zero_; ++g)
            d_squared_zero_ = apply_d(d_[static_cast<std::size_t>(g)]).is_zero();
    }

    explicit Cdga(FreeAlgebra algebra) : Cdga(std::move(algebra), {}) {}

    const FreeAlgebra& algebra() const { return algebra_; }
    int size() const { return algebra_.size(); }
    const std::vector<Polynomial>& differentials() const { return d_; }
    const Polynomial& d(int gen) const { return d_.at(static_cast<std::size_t>(gen)); }

    Polynomial apply_d(const Polynomial& p) const { return algebra_.apply_derivation(d_, 1, p); }

    bool d_squared_zero() const { return d_squared_zero_; }

    bool operator==(const Cdga& o) const {
        return algebra_.generators() == o.algebra_.generators() && d_ == o.d_;
    }

private:
    FreeAlgebra algebra_;
    std::vector<Polynomial> d_;
    bool d_squared_zero_ = true;
};

inline Polynomial apply_d(const Cdga& c, const Polynomial& p) { return c.apply_d(p); }

// Matrix of d between two graded pieces; d must map `from` into `to`.
inline Matrix differential_matrix(const Cdga& c, const GradedBasis& from, const GradedBasis& to) {
    Matrix m(to.size(), from.size());
    for (int j = 0; j < from.size(); ++j) {
        const Polynomial image = c.apply_d(Polynomial(from.monomials()[static_cast<std::size_t>(j)]));
        for (const auto& [mono, coeff] : image.terms()) {
            auto i = to.index_of(mono);
            if (!i)
                throw Error("differential leaves the graded basis");
            m.at(*i, j) = coeff;
        }
    }
    return m;
}

inline Matrix differential_matrix(const Cdga& c, int k) {
    return differential_matrix(c, GradedBasis(c.algebra().basis(k)), GradedBasis(c.algebra().basis(k + 1)));
}

struct SquareFailure {
    int generator = 0;
    Polynomial d_squared;
};

struct ValidationReport {
    bool d_squared_zero = true;
    bool is_sullivan = false;
    bool is_minimal = false;
    std::vector<int> generator_order;  // triangular order when Sullivan, else the peeled prefix
    std::vector<SquareFailure> failures;
    std::vector<int> non_minimal_generators;

    bool valid() const { return d_squared_zero; }
};

// Stagewise peeling: each stage takes, in declaration order, the remaining
// generators whose differential lies in the subalgebra of earlier stages.
inline std::vector<int> sullivan_order(const Cdga& c) {
    const int n = c.size();
    std::vector<bool> peeled(static_cast<std::size_t>(n), false);
    std::vector<int> order;
    while (static_cast<int>(order.size()) < n) {
        std::vector<int> stage;
        for (int g = 0; g < n; ++g) {
            if (peeled[static_cast<std::size_t>(g)])
                continue;
            bool inside = true;
            for (const auto& [m, coeff] : c.d(g).terms())
                for (const auto& f : m.factors())
                    if (!peeled[static_cast<std::size_t>(f.gen)])
                        inside = false;
            if (inside)
                stage.push_back(g);
        }
        if (stage.empty())
            break;
        for (int g : stage) {
            peeled[static_cast<std::size_t>(g)] = true;
            order.push_back(g);
        }
    }
    return order;
}

inline ValidationReport validate_cdga(const Cdga& c, int max_degree) {
    if (max_degree < c.algebra().max_generator_degree() + 1)
        throw Error("validate_cdga: max_degree must be at least the top generator degree + 1");
    ValidationReport r;
    for (int g = 0; g < c.size(); ++g) {
        Polynomial dd = c.apply_d(c.d(g));
        if (!dd.is_zero()) {
            r.d_squared_zero = false;
            r.failures.push_back(SquareFailure{g, std::move(dd)});
        }
    }
    r.generator_order = sullivan_order(c);
    r.is_sullivan = static_cast<int>(r.generator_order.size()) == c.size();
    for (int g = 0; g < c.size(); ++g)
        if (!c.d(g).is_zero() && c.d(g).min_word_length() < 2)
            r.non_minimal_generators.push_back(g);
    r.is_minimal = r.is_sullivan && r.non_minimal_generators.empty();
    return r;
}

struct F0Shape {
    bool holds = false;
    std::vector<int> even;
    std::vector<int> odd;
    std::string reason;
};

inline F0Shape f0_shape_check(const Cdga& c) {
    F0Shape s;
    const auto& alg = c.algebra();
    for (int g = 0; g < c.size(); ++g)
        (alg.is_odd(g) ? s.odd : s.even).push_back(g);
    for (int g : s.even)
        if (!c.d(g).is_zero()) {
            s.reason = "even generator '" + alg.generator(g).name + "' is not closed";
            return s;
        }
    for (int g : s.odd) {
        const auto& dg = c.d(g);
        if (!dg.is_zero() && dg.min_word_length() < 2) {
            s.reason = "differential of '" + alg.generator(g).name + "' has a linear term";
            return s;
        }
        for (const auto& [m, coeff] : dg.terms())
            for (const auto& f : m.factors())
                if (alg.is_odd(f.gen)) {
                    s.reason = "differential of '" + alg.generator(g).name + "' involves an odd generator";
                    return s;
                }
    }
    if (s.even.size() != s.odd.size()) {
        s.reason = std::to_string(s.even.size()) + " even vs " + std::to_string(s.odd.size()) + " odd generators";
        return s;
    }
    s.holds = true;
    return s;
}

// Lambda(V (+) W) with d = d_A (x) 1 + 1 (x) d_B; generators of `a` first.
inline Cdga tensor_product(const Cdga& a, const Cdga& b) {
    std::vector<Generator> gens = a.algebra().generators();
    for (const auto& g : b.algebra().generators())
        gens.push_back(g);
    std::vector<Polynomial> d = a.differentials();
    for (const auto& img : b.differentials())
        d.push_back(shift_generators(img, a.size()));
    return Cdga(FreeAlgebra(std::move(gens), std::max(a.algebra().cap(), b.algebra().cap())), std::move(d));
}

// Same model with every generator name suffixed.
inline Cdga rename_generators(const Cdga& c, const std::string& suffix) {
    std::vector<Generator> gens = c.algebra().generators();
    for (auto& g : gens)
        g.name += suffix;
    return Cdga(FreeAlgebra(std::move(gens), c.algebra().cap()), c.differentials());
}

}  // namespace cdga
