#pragma once

// Finite-dimensional Lie algebras over Q given by structure constants, and
// their Chevalley-Eilenberg models.

#include "cdga/cdga.hpp"
#include "cdga/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cdga {

// Basis X1..Xn (0-based ids internally); brackets stored for i < j only.
class LieAlgebraSpec {
public:
    LieAlgebraSpec() = default;
    explicit LieAlgebraSpec(int dim) : dim_(dim) {
        if (dim < 0)
            throw Error("Lie algebra dimension must be non-negative");
    }

    int dim() const { return dim_; }
    const std::map<std::pair<int, int>, Vector>& brackets() const { return brackets_; }

    void set_bracket(int i, int j, Vector value) {
        if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
            throw Error("bracket index out of range");
        if (i >= j)
            throw Error("brackets must be given as [Xi,Xj] with i < j");
        if (static_cast<int>(value.size()) != dim_)
            throw Error("bracket value has the wrong length");
        if (is_zero(value))
            brackets_.erase({i, j});
        else
            brackets_[{i, j}] = std::move(value);
    }

    // c_ij^k for any i, j (antisymmetric extension).
    Rational constant(int i, int j, int k) const {
        if (i == j)
            return 0;
        const bool flip = i > j;
        auto it = brackets_.find(flip ? std::pair{j, i} : std::pair{i, j});
        if (it == brackets_.end())
            return 0;
        return flip ? Rational(-it->second[static_cast<std::size_t>(k)]) : it->second[static_cast<std::size_t>(k)];
    }

    Vector bracket(std::span<const Rational> x, std::span<const Rational> y) const {
        Vector out(static_cast<std::size_t>(dim_));
        for (const auto& [ij, c] : brackets_) {
            const auto [i, j] = ij;
            const Rational w = x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] -
                               x[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i)];
            if (w == 0)
                continue;
            for (int k = 0; k < dim_; ++k)
                out[static_cast<std::size_t>(k)] += w * c[static_cast<std::size_t>(k)];
        }
        return out;
    }

    Vector unit(int i) const {
        Vector e(static_cast<std::size_t>(dim_));
        e[static_cast<std::size_t>(i)] = 1;
        return e;
    }

    bool operator==(const LieAlgebraSpec&) const = default;

private:
    int dim_ = 0;
    std::map<std::pair<int, int>, Vector> brackets_;
};

inline LieAlgebraSpec direct_sum(const LieAlgebraSpec& a, const LieAlgebraSpec& b) {
    LieAlgebraSpec out(a.dim() + b.dim());
    for (const auto& [ij, c] : a.brackets()) {
        Vector v(static_cast<std::size_t>(out.dim()));
        std::copy(c.begin(), c.end(), v.begin());
        out.set_bracket(ij.first, ij.second, std::move(v));
    }
    for (const auto& [ij, c] : b.brackets()) {
        Vector v(static_cast<std::size_t>(out.dim()));
        std::copy(c.begin(), c.end(), v.begin() + a.dim());
        out.set_bracket(ij.first + a.dim(), ij.second + a.dim(), std::move(v));
    }
    return out;
}

struct LowerCentralSeries {
    std::vector<std::vector<Vector>> terms;  // bases of g_1 = g, g_2 = [g,g], ...; last term is the stable one
    bool nilpotent = false;
    int nilpotency_class = 0;  // c with g_{c+1} = 0, when nilpotent

    std::vector<int> dimensions() const {
        std::vector<int> d;
        for (const auto& t : terms)
            d.push_back(static_cast<int>(t.size()));
        return d;
    }
};

inline LowerCentralSeries lower_central_series(const LieAlgebraSpec& l) {
    const int n = l.dim();
    LowerCentralSeries s;
    std::vector<Vector> current;
    for (int i = 0; i < n; ++i)
        current.push_back(l.unit(i));
    s.terms.push_back(current);
    while (!current.empty()) {
        std::vector<Vector> products;
        for (int i = 0; i < n; ++i)
            for (const auto& y : current) {
                Vector b = l.bracket(l.unit(i), y);
                if (!is_zero(b))
                    products.push_back(std::move(b));
            }
        auto next = independent_subset(n, products);
        if (next.size() == current.size())
            return s;
        s.terms.push_back(next);
        current = std::move(next);
    }
    s.nilpotent = true;
    s.nilpotency_class = static_cast<int>(s.terms.size()) - 1;
    return s;
}

struct JacobiFailure {
    int i = 0, j = 0, k = 0;
    Vector value;  // [Xi,[Xj,Xk]] + [Xj,[Xk,Xi]] + [Xk,[Xi,Xj]]
};

struct LieReport {
    bool jacobi_ok = true;
    std::optional<JacobiFailure> witness;
    bool nilpotent = false;
    int nilpotency_class = 0;
    int b1 = 0;
    LowerCentralSeries series;
};

inline std::optional<JacobiFailure> jacobi_failure(const LieAlgebraSpec& l) {
    const int n = l.dim();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const Vector xi = l.unit(i), xj = l.unit(j), xk = l.unit(k);
                Vector sum = l.bracket(xi, l.bracket(xj, xk));
                const Vector b = l.bracket(xj, l.bracket(xk, xi));
                const Vector c = l.bracket(xk, l.bracket(xi, xj));
                for (int t = 0; t < n; ++t)
                    sum[static_cast<std::size_t>(t)] += b[static_cast<std::size_t>(t)] + c[static_cast<std::size_t>(t)];
                if (!is_zero(sum))
                    return JacobiFailure{i, j, k, std::move(sum)};
            }
    return std::nullopt;
}

inline LieReport validate_lie(const LieAlgebraSpec& l) {
    LieReport r;
    r.witness = jacobi_failure(l);
    r.jacobi_ok = !r.witness.has_value();
    r.series = lower_central_series(l);
    r.nilpotent = r.series.nilpotent;
    r.nilpotency_class = r.series.nilpotency_class;
    const int derived = r.series.terms.size() > 1 ? static_cast<int>(r.series.terms[1].size())
                                                  : static_cast<int>(r.series.terms[0].size());
    r.b1 = l.dim() - derived;
    return r;
}

inline FreeAlgebra ce_algebra(int n, const std::string& prefix = "v") {
    std::vector<Generator> gens;
    for (int i = 0; i < n; ++i)
        gens.push_back(Generator{i, prefix + std::to_string(i + 1), 1});
    return FreeAlgebra(std::move(gens));
}

// dv_k = -sum_{i<j} c_ij^k v_i v_j, with no checks and no reordering.
inline Cdga ce_differential(const LieAlgebraSpec& l, const std::string& prefix = "v") {
    std::vector<Polynomial> d(static_cast<std::size_t>(l.dim()));
    for (const auto& [ij, c] : l.brackets())
        for (int k = 0; k < l.dim(); ++k)
            if (c[static_cast<std::size_t>(k)] != 0)
                d[static_cast<std::size_t>(k)].add_term(Monomial({Factor{ij.first, 1}, Factor{ij.second, 1}}),
                                                        -c[static_cast<std::size_t>(k)]);
    return Cdga(ce_algebra(l.dim(), prefix), std::move(d));
}

class NotNilpotentError : public Error {
public:
    using Error::Error;
};

class JacobiError : public Error {
public:
    using Error::Error;
};

struct CeModel {
    Cdga model;
    bool reordered = false;      // generators permuted into a triangular order
    bool basis_changed = false;  // dual of a basis adapted to the lower central series
    Matrix basis;                // columns: Lie basis vectors dual to the model generators, in old coordinates
};

namespace detail {

inline bool declaration_order_triangular(const Cdga& c) {
    for (int g = 0; g < c.size(); ++g)
        for (const auto& [m, coeff] : c.d(g).terms())
            for (const auto& f : m.factors())
                if (f.gen >= g)
                    return false;
    return true;
}

inline Cdga permute_generators(const Cdga& c, const std::vector<int>& order) {
    std::vector<int> position(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    std::vector<Generator> gens;
    std::vector<Polynomial> images;
    for (int g : order)
        gens.push_back(c.algebra().generator(g));
    FreeAlgebra alg(gens, c.algebra().cap());
    for (int g = 0; g < c.size(); ++g)
        images.push_back(Polynomial::generator(position[static_cast<std::size_t>(g)]));
    std::vector<Polynomial> d;
    for (int g : order)
        d.push_back(c.algebra().substitute(images, alg, c.d(g)));
    return Cdga(std::move(alg), std::move(d));
}

// Basis built stage by stage: a complement of g_2 in g, then of g_3 in g_2, ...
inline Matrix adapted_basis(const LieAlgebraSpec& l, const LowerCentralSeries& s) {
    const int n = l.dim();
    std::vector<std::vector<Vector>> complements(s.terms.size());
    std::vector<Vector> chosen;
    for (std::size_t t = s.terms.size(); t-- > 0;) {
        std::vector<Vector> cols = chosen;
        cols.insert(cols.end(), s.terms[t].begin(), s.terms[t].end());
        const auto e = row_reduce(Matrix::from_columns(n, cols));
        for (int p : e.pivots)
            if (p >= static_cast<int>(chosen.size()))
                complements[t].push_back(cols[static_cast<std::size_t>(p)]);
        chosen.insert(chosen.end(), complements[t].begin(), complements[t].end());
    }
    std::vector<Vector> ordered;
    for (const auto& c : complements)
        ordered.insert(ordered.end(), c.begin(), c.end());
    return Matrix::from_columns(n, ordered);
}

// Structure constants in the basis given by the columns of b.
inline LieAlgebraSpec change_basis(const LieAlgebraSpec& l, const Matrix& b) {
    const int n = l.dim();
    const auto e = row_reduce(b, true);
    LieAlgebraSpec out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Vector br = l.bracket(b.column(i), b.column(j));
            if (is_zero(br))
                continue;
            auto coords = solve(e, br);
            out.set_bracket(i, j, std::move(*coords));
        }
    return out;
}

}  // namespace detail

// Minimal model of the nilmanifold with Lie algebra l. Keeps v1..vn when the
// declaration order (or a reordering) is triangular, otherwise passes to the
// dual of a basis adapted to the lower central series, named z1..zn.
inline CeModel chevalley_eilenberg_model(const LieAlgebraSpec& l) {
    const auto report = validate_lie(l);
    if (!report.jacobi_ok) {
        const auto& w = *report.witness;
        throw JacobiError("Jacobi identity fails on (X" + std::to_string(w.i + 1) + ", X" + std::to_string(w.j + 1) +
                          ", X" + std::to_string(w.k + 1) + ")");
    }
    if (!report.nilpotent)
        throw NotNilpotentError("Lie algebra is not nilpotent; the lower central series stabilizes at dimension " +
                                std::to_string(report.series.terms.back().size()));
    CeModel out;
    Cdga raw = ce_differential(l);
    if (!raw.d_squared_zero())
        throw Error("internal inconsistency: Jacobi holds but d^2 != 0");
    if (detail::declaration_order_triangular(raw)) {
        out.model = std::move(raw);
        out.basis = Matrix::identity(l.dim());
        return out;
    }
    const auto order = sullivan_order(raw);
    if (static_cast<int>(order.size()) == l.dim()) {
        out.reordered = true;
        out.basis = Matrix(l.dim(), l.dim());
        for (int i = 0; i < l.dim(); ++i)
            out.basis.at(order[static_cast<std::size_t>(i)], i) = 1;
        out.model = detail::permute_generators(raw, order);
        return out;
    }
    out.basis_changed = true;
    out.basis = detail::adapted_basis(l, report.series);
    out.model = ce_differential(detail::change_basis(l, out.basis), "z");
    if (!detail::declaration_order_triangular(out.model) || !out.model.d_squared_zero())
        throw Error("internal inconsistency: adapted basis does not give a Sullivan model");
    return out;
}

inline Cdga chevalley_eilenberg(const LieAlgebraSpec& l) { return chevalley_eilenberg_model(l).model; }

struct TorusTest {
    bool is_torus = false;
    bool b1_equals_dim = false;
    bool brackets_vanish = false;
    bool differential_zero = false;
};

inline TorusTest torus_test(const LieAlgebraSpec& l) {
    TorusTest t;
    t.b1_equals_dim = validate_lie(l).b1 == l.dim();
    t.brackets_vanish = l.brackets().empty();
    const Cdga ce = ce_differential(l);
    t.differential_zero = true;
    for (const auto& p : ce.differentials())
        t.differential_zero = t.differential_zero && p.is_zero();
    if (t.b1_equals_dim != t.brackets_vanish || t.brackets_vanish != t.differential_zero)
        throw Error("internal inconsistency in torus recognition");
    t.is_torus = t.b1_equals_dim;
    return t;
}

}  // namespace cdga
