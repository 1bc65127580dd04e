#pragma once

// Exact cohomology of a CDGA (or of its word-length truncation) with cocycle
// representatives, class reduction, coboundary preimages and cup products.

#include "cdga/cdga.hpp"
#include "cdga/linalg.hpp"

#include <optional>
#include <vector>

namespace cdga {

class CohomologyRing {
public:
    // Computes H^k for 0 <= k <= max_degree. With `truncation` = s the
    // complex is Lambda V / Lambda^{>s} V with the induced differential.
    CohomologyRing(Cdga model, int max_degree, std::optional<int> truncation = std::nullopt)
        : model_(std::move(model)), max_degree_(max_degree), truncation_(truncation) {
        if (max_degree < 0)
            throw Error("cohomology: max_degree must be non-negative");
        std::vector<GradedBasis> bases;
        for (int k = 0; k <= max_degree + 1; ++k)
            bases.emplace_back(model_.algebra().basis(k, truncation_));
        std::vector<Matrix> d;
        for (int k = 0; k <= max_degree; ++k)
            d.push_back(differential_matrix(bases[static_cast<std::size_t>(k)],
                                            bases[static_cast<std::size_t>(k) + 1]));
        for (int k = 0; k <= max_degree; ++k) {
            Piece piece;
            piece.basis = bases[static_cast<std::size_t>(k)];
            piece.d_out = d[static_cast<std::size_t>(k)];
            const Matrix image = k == 0 ? Matrix(piece.basis.size(), 0) : d[static_cast<std::size_t>(k) - 1];
            const auto cycles = kernel_basis(piece.d_out);
            std::vector<Vector> columns;
            for (int c = 0; c < image.cols(); ++c)
                columns.push_back(image.column(c));
            const int image_cols = static_cast<int>(columns.size());
            for (const auto& z : cycles)
                columns.push_back(z);
            const auto e = row_reduce(Matrix::from_columns(piece.basis.size(), columns));
            std::vector<Vector> reps;
            for (int p : e.pivots)
                if (p >= image_cols)
                    reps.push_back(columns[static_cast<std::size_t>(p)]);
            for (const auto& v : reps)
                piece.representatives.push_back(piece.basis.polynomial(v));
            std::vector<Vector> class_columns = reps;
            for (int c = 0; c < image_cols; ++c)
                class_columns.push_back(columns[static_cast<std::size_t>(c)]);
            piece.class_solver = row_reduce(Matrix::from_columns(piece.basis.size(), class_columns), true);
            piece.image_solver = row_reduce(image, true);
            piece.source_basis = k == 0 ? GradedBasis() : bases[static_cast<std::size_t>(k) - 1];
            pieces_.push_back(std::move(piece));
        }
    }

    const Cdga& model() const { return model_; }
    const FreeAlgebra& algebra() const { return model_.algebra(); }
    int max_degree() const { return max_degree_; }
    std::optional<int> truncation() const { return truncation_; }

    int betti(int k) const { return k < 0 || k > max_degree_ ? 0 : static_cast<int>(piece(k).representatives.size()); }

    std::vector<int> betti_numbers() const {
        std::vector<int> b;
        for (int k = 0; k <= max_degree_; ++k)
            b.push_back(betti(k));
        return b;
    }

    int total_rank() const {
        int s = 0;
        for (int k = 0; k <= max_degree_; ++k)
            s += betti(k);
        return s;
    }

    const std::vector<Polynomial>& representatives(int k) const { return piece(k).representatives; }
    const GradedBasis& basis(int k) const { return piece(k).basis; }

    Polynomial project(const Polynomial& p) const {
        return truncation_ ? p.word_length_window(0, *truncation_) : p;
    }

    Polynomial differential(const Polynomial& p) const { return project(model_.apply_d(p)); }

    Polynomial multiply(const Polynomial& a, const Polynomial& b) const {
        return project(model_.algebra().multiply(a, b));
    }

    bool is_cocycle(int k, const Polynomial& p) const {
        check_degree(k, p);
        return is_zero(piece(k).d_out.apply(piece(k).basis.coords(p)));
    }

    // Coordinates of [p] in the stored class basis of H^k.
    Vector reduce_to_class(int k, const Polynomial& p) const {
        check_degree(k, p);
        const auto& pc = piece(k);
        const Vector v = pc.basis.coords(p);
        if (!is_zero(pc.d_out.apply(v)))
            throw Error("reduce_to_class: polynomial is not a cocycle");
        auto x = solve(pc.class_solver, v);
        if (!x)
            throw Error("reduce_to_class: internal inconsistency, cocycle outside span");
        x->resize(pc.representatives.size());
        return *x;
    }

    bool is_zero_class(int k, const Polynomial& p) const { return is_zero(reduce_to_class(k, p)); }

    // sigma with d(sigma) = p, or nullopt when p is not a coboundary.
    std::optional<Polynomial> coboundary_preimage(int k, const Polynomial& p) const {
        check_degree(k, p);
        const auto& pc = piece(k);
        auto x = solve(pc.image_solver, pc.basis.coords(p));
        if (!x)
            return std::nullopt;
        return pc.source_basis.polynomial(*x);
    }

    bool is_coboundary(int k, const Polynomial& p) const { return coboundary_preimage(k, p).has_value(); }

    Polynomial class_polynomial(int k, std::span<const Rational> coords) const {
        Polynomial p;
        const auto& reps = representatives(k);
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (coords[i] != 0)
                p += reps[i] * coords[i];
        return p;
    }

    // Coordinates of the product class in degree k1 + k2, which must be in range.
    Vector product(int k1, std::span<const Rational> a, int k2, std::span<const Rational> b) const {
        return reduce_to_class(k1 + k2, multiply(class_polynomial(k1, a), class_polynomial(k2, b)));
    }

private:
    struct Piece {
        GradedBasis basis;
        GradedBasis source_basis;
        Matrix d_out;
        std::vector<Polynomial> representatives;
        RowEchelon class_solver;
        RowEchelon image_solver;
    };

    const Piece& piece(int k) const {
        if (k < 0 || k > max_degree_)
            throw Error("degree " + std::to_string(k) + " outside the computed range 0.." +
                        std::to_string(max_degree_));
        return pieces_[static_cast<std::size_t>(k)];
    }

    void check_degree(int k, const Polynomial& p) const {
        piece(k);
        if (!model_.algebra().is_homogeneous(p, k))
            throw Error("polynomial is not homogeneous of degree " + std::to_string(k));
    }

    Matrix differential_matrix(const GradedBasis& from, const GradedBasis& to) const {
        Matrix m(to.size(), from.size());
        for (int j = 0; j < from.size(); ++j) {
            const Polynomial img = differential(Polynomial(from.monomials()[static_cast<std::size_t>(j)]));
            for (const auto& [mono, c] : img.terms()) {
                auto i = to.index_of(mono);
                if (!i)
                    throw Error("differential leaves the graded basis");
                m.at(*i, j) = c;
            }
        }
        return m;
    }

    Cdga model_;
    int max_degree_ = 0;
    std::optional<int> truncation_;
    std::vector<Piece> pieces_;
};

inline CohomologyRing compute_cohomology(const Cdga& c, int max_degree) { return CohomologyRing(c, max_degree); }

// sigma in degree k-1 with d(sigma) = target, built from the two graded
// pieces involved only.
inline std::optional<Polynomial> solve_coboundary(const Cdga& c, int k, const Polynomial& target) {
    if (k <= 0)
        return target.is_zero() ? std::optional<Polynomial>(Polynomial()) : std::nullopt;
    const GradedBasis from(c.algebra().basis(k - 1));
    const GradedBasis to(c.algebra().basis(k));
    auto x = solve(differential_matrix(c, from, to), to.coords(target));
    if (!x)
        return std::nullopt;
    return from.polynomial(*x);
}

// dim H^k computed from the two adjacent differentials only.
inline int local_betti(const Cdga& c, int k) {
    if (k < 0)
        return 0;
    const GradedBasis here(c.algebra().basis(k));
    const int cycles = here.size() - rank(differential_matrix(c, here, GradedBasis(c.algebra().basis(k + 1))));
    const int boundaries = k == 0 ? 0 : rank(differential_matrix(c, GradedBasis(c.algebra().basis(k - 1)), here));
    return cycles - boundaries;
}

// Largest k with a nonzero k-fold product of positive-degree classes, via
// S_1 = H^+, S_{k+1} = S_k . H^+ inside degrees <= formal_bound.
inline int cup_length(const CohomologyRing& h, int formal_bound) {
    const int bound = std::min(formal_bound, h.max_degree());
    using Span = std::vector<std::vector<Vector>>;  // per degree, spanning class vectors
    auto independent = [&](int k, const std::vector<Vector>& vs) {
        if (vs.empty())
            return vs;
        const int n = h.betti(k);
        const auto e = row_reduce(Matrix::from_columns(n, vs));
        std::vector<Vector> out;
        for (int p : e.pivots)
            out.push_back(vs[static_cast<std::size_t>(p)]);
        return out;
    };
    Span current(static_cast<std::size_t>(bound) + 1);
    bool any = false;
    for (int k = 1; k <= bound; ++k)
        for (int i = 0; i < h.betti(k); ++i) {
            Vector e(static_cast<std::size_t>(h.betti(k)));
            e[static_cast<std::size_t>(i)] = 1;
            current[static_cast<std::size_t>(k)].push_back(std::move(e));
            any = true;
        }
    if (!any)
        return 0;
    int length = 1;
    while (true) {
        Span next(static_cast<std::size_t>(bound) + 1);
        bool nonzero = false;
        for (int k = 1; k <= bound; ++k)
            for (const auto& s : current[static_cast<std::size_t>(k)])
                for (int j = 1; k + j <= bound; ++j)
                    for (int i = 0; i < h.betti(j); ++i) {
                        Vector e(static_cast<std::size_t>(h.betti(j)));
                        e[static_cast<std::size_t>(i)] = 1;
                        Vector prod = h.product(k, s, j, e);
                        if (!is_zero(prod)) {
                            next[static_cast<std::size_t>(k + j)].push_back(std::move(prod));
                            nonzero = true;
                        }
                    }
        if (!nonzero)
            return length;
        for (int k = 0; k <= bound; ++k)
            next[static_cast<std::size_t>(k)] = independent(k, next[static_cast<std::size_t>(k)]);
        current = std::move(next);
        ++length;
    }
}

struct PoincareStructure {
    int dimension = 0;
    Polynomial top;                // cocycle representing the orientation class
    std::vector<Matrix> pairings;  // pairings[k]: betti(k) x betti(m-k), <a_i b_j / top>
};

struct PoincareCheck {
    std::optional<PoincareStructure> structure;
    int failing_degree = -1;
    std::string reason;

    bool holds() const { return structure.has_value(); }
};

// Verifies Poincare duality of formal dimension m. `orientation` optionally
// fixes the top class representative (defaults to the stored basis class).
inline PoincareCheck poincare_structure(const CohomologyRing& h, int m,
                                        const std::optional<Polynomial>& orientation = std::nullopt) {
    PoincareCheck out;
    if (m < 0 || m > h.max_degree())
        throw Error("poincare_structure: cohomology must be computed through the formal dimension");
    if (h.betti(m) != 1) {
        out.failing_degree = m;
        out.reason = "top degree has rank " + std::to_string(h.betti(m)) + ", expected 1";
        return out;
    }
    for (int k = m + 1; k <= h.max_degree(); ++k)
        if (h.betti(k) != 0) {
            out.failing_degree = k;
            out.reason = "nonzero cohomology above the formal dimension";
            return out;
        }
    PoincareStructure ps;
    ps.dimension = m;
    Rational scale = 1;
    if (orientation) {
        const Vector c = h.reduce_to_class(m, *orientation);
        if (c[0] == 0) {
            out.failing_degree = m;
            out.reason = "orientation representative is a coboundary";
            return out;
        }
        scale = c[0];
        ps.top = *orientation;
    } else {
        ps.top = h.representatives(m)[0];
    }
    for (int k = 0; k <= m; ++k) {
        const int rows = h.betti(k);
        const int cols = h.betti(m - k);
        Matrix pm(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const Vector c = h.reduce_to_class(
                    m, h.multiply(h.representatives(k)[static_cast<std::size_t>(i)],
                                  h.representatives(m - k)[static_cast<std::size_t>(j)]));
                pm.at(i, j) = c[0] / scale;
            }
        if (rows != cols || rank(pm) != rows) {
            out.failing_degree = k;
            out.reason = "pairing H^" + std::to_string(k) + " x H^" + std::to_string(m - k) + " is degenerate";
            return out;
        }
        ps.pairings.push_back(std::move(pm));
    }
    out.structure = std::move(ps);
    return out;
}

// Number of positive minus negative entries after congruence diagonalization
// (simultaneous row and column operations).
inline int symmetric_signature(Matrix a) {
    const int n = a.rows();
    if (a.cols() != n)
        throw Error("signature: matrix is not square");
    int positive = 0, negative = 0;
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (a.at(i, i) != 0) {
                p = i;
                break;
            }
        if (p < 0) {
            // All remaining diagonal entries vanish: add a row/column with a
            // nonzero off-diagonal entry to create a pivot (a_kk' = 2 a_kj).
            int r = -1, s = -1;
            for (int i = k; i < n && r < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (a.at(i, j) != 0) {
                        r = i;
                        s = j;
                        break;
                    }
            if (r < 0)
                throw Error("signature: form is degenerate");
            for (int c = 0; c < n; ++c)
                a.at(r, c) += a.at(s, c);
            for (int c = 0; c < n; ++c)
                a.at(c, r) += a.at(c, s);
            p = r;
        }
        if (p != k) {
            for (int c = 0; c < n; ++c)
                std::swap(a.at(p, c), a.at(k, c));
            for (int c = 0; c < n; ++c)
                std::swap(a.at(c, p), a.at(c, k));
        }
        const Rational pivot = a.at(k, k);
        (pivot > 0 ? positive : negative)++;
        for (int i = k + 1; i < n; ++i) {
            if (a.at(i, k) == 0)
                continue;
            const Rational f = a.at(i, k) / pivot;
            for (int c = k; c < n; ++c)
                a.at(i, c) -= f * a.at(k, c);
            for (int c = k; c < n; ++c)
                a.at(c, i) -= f * a.at(c, k);
        }
    }
    return positive - negative;
}

inline int signature(const PoincareStructure& ps) {
    if (ps.dimension % 4 != 0)
        return 0;
    return symmetric_signature(ps.pairings[static_cast<std::size_t>(ps.dimension / 2)]);
}

}  // namespace cdga
