#pragma once

// Dense exact linear algebra over Q: reduced row echelon form with a
// recorded transform, kernels, particular solutions and ranks.

#include "cdga/graded.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cdga {

using Vector = std::vector<Rational>;

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            m.at(i, i) = 1;
        return m;
    }

    // Columns given as vectors of equal length `rows`.
    static Matrix from_columns(int rows, const std::vector<Vector>& columns) {
        Matrix m(rows, static_cast<int>(columns.size()));
        for (int c = 0; c < m.cols(); ++c)
            for (int r = 0; r < rows; ++r)
                m.at(r, c) = columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Rational& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    Vector column(int c) const {
        Vector v(static_cast<std::size_t>(rows_));
        for (int r = 0; r < rows_; ++r)
            v[static_cast<std::size_t>(r)] = at(r, c);
        return v;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0)
                return false;
        return true;
    }

    Vector apply(std::span<const Rational> v) const {
        Vector out(static_cast<std::size_t>(rows_));
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                if (at(r, c) != 0 && v[static_cast<std::size_t>(c)] != 0)
                    out[static_cast<std::size_t>(r)] += at(r, c) * v[static_cast<std::size_t>(c)];
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix out(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Rational& x = a.at(i, k);
                if (x == 0)
                    continue;
                for (int j = 0; j < b.cols_; ++j)
                    if (b.at(k, j) != 0)
                        out.at(i, j) += x * b.at(k, j);
            }
        return out;
    }

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

struct RowEchelon {
    Matrix reduced;           // transform * original
    Matrix transform;         // invertible, rows x rows (identity-sized 0x0 when not tracked)
    std::vector<int> pivots;  // pivot column of each nonzero row, increasing

    int rank() const { return static_cast<int>(pivots.size()); }
};

// Gauss-Jordan elimination; the pivot is the first nonzero entry in column
// order, which keeps every downstream choice deterministic.
inline RowEchelon row_reduce(Matrix a, bool track_transform = false) {
    const int rows = a.rows();
    const int cols = a.cols();
    Matrix t = track_transform ? Matrix::identity(rows) : Matrix();
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a.at(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        auto swap_rows = [](Matrix& m, int i, int j) {
            for (int k = 0; k < m.cols(); ++k)
                std::swap(m.at(i, k), m.at(j, k));
        };
        if (p != r) {
            swap_rows(a, p, r);
            if (track_transform)
                swap_rows(t, p, r);
        }
        const Rational inv = 1 / a.at(r, c);
        for (int k = c; k < cols; ++k)
            a.at(r, k) *= inv;
        if (track_transform)
            for (int k = 0; k < rows; ++k)
                t.at(r, k) *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a.at(i, c) == 0)
                continue;
            const Rational f = a.at(i, c);
            for (int k = c; k < cols; ++k)
                if (a.at(r, k) != 0)
                    a.at(i, k) -= f * a.at(r, k);
            if (track_transform)
                for (int k = 0; k < rows; ++k)
                    if (t.at(r, k) != 0)
                        t.at(i, k) -= f * t.at(r, k);
        }
        pivots.push_back(c);
        ++r;
    }
    return RowEchelon{std::move(a), std::move(t), std::move(pivots)};
}

inline int rank(const Matrix& a) { return row_reduce(a).rank(); }

// Kernel basis read off the reduced echelon form: one vector per free
// column, with that free variable set to 1.
inline std::vector<Vector> kernel_basis(const RowEchelon& e) {
    const int cols = e.reduced.cols();
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int p : e.pivots)
        is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Vector> out;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)])
            continue;
        Vector v(static_cast<std::size_t>(cols));
        v[static_cast<std::size_t>(f)] = 1;
        for (int r = 0; r < e.rank(); ++r)
            v[static_cast<std::size_t>(e.pivots[static_cast<std::size_t>(r)])] = -e.reduced.at(r, f);
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<Vector> kernel_basis(const Matrix& a) { return kernel_basis(row_reduce(a)); }

// Solution of A x = b with every free variable zero, or nullopt. `e` must
// have been computed with track_transform.
inline std::optional<Vector> solve(const RowEchelon& e, std::span<const Rational> b) {
    const Vector tb = e.transform.apply(b);
    for (std::size_t r = static_cast<std::size_t>(e.rank()); r < tb.size(); ++r)
        if (tb[r] != 0)
            return std::nullopt;
    Vector x(static_cast<std::size_t>(e.reduced.cols()));
    for (int r = 0; r < e.rank(); ++r)
        x[static_cast<std::size_t>(e.pivots[static_cast<std::size_t>(r)])] = tb[static_cast<std::size_t>(r)];
    return x;
}

inline std::optional<Vector> solve(const Matrix& a, std::span<const Rational> b) {
    return solve(row_reduce(a, true), b);
}

// The greedy pivot subset of `vs` (vectors of length `dim`) spanning the same space.
inline std::vector<Vector> independent_subset(int dim, const std::vector<Vector>& vs) {
    if (vs.empty())
        return {};
    const auto e = row_reduce(Matrix::from_columns(dim, vs));
    std::vector<Vector> out;
    for (int p : e.pivots)
        out.push_back(vs[static_cast<std::size_t>(p)]);
    return out;
}

inline bool is_zero(std::span<const Rational> v) {
    for (const auto& x : v)
        if (x != 0)
            return false;
    return true;
}

}  // namespace cdga
