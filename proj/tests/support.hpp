#pragma once

#include "cdga/dsl.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cdga::testing {

inline std::string read_corpus(const std::string& file) {
    std::ifstream in(std::string(CDGA_CORPUS_DIR) + "/" + file);
    if (!in)
        throw Error("missing corpus file " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SpecDocument load(const std::string& file) { return parse_spec(read_corpus(file)); }

template <class T>
const T& get(const SpecDocument& doc, const std::string& name) {
    const Item* it = doc.find(name);
    if (!it)
        throw Error("no item " + name);
    return std::get<T>(*it);
}

// Files under corpus/ whose models are all valid.
inline const std::vector<std::string>& corpus_files() {
    static const std::vector<std::string> files{"nilpotent.cdga",     "spheres.cdga",  "bundle_s2_over_kt.cdga",
                                                "circle_action.cdga", "circle_action_deg5.cdga",
                                                "products.cdga",      "untwist.cdga",  "rings.cdga"};
    return files;
}

// Models kept to document a failing differential.
inline const std::vector<std::string>& invalid_corpus_files() {
    static const std::vector<std::string> files{"invalid/circle_action_verbatim.cdga"};
    return files;
}

// Random element of degree `deg` with up to `max_terms` terms and small integer coefficients.
inline Polynomial random_element(const FreeAlgebra& alg, int deg, std::mt19937& rng, int max_terms = 3) {
    const auto basis = alg.basis(deg);
    Polynomial p;
    if (basis.empty())
        return p;
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> count(1, max_terms);
    for (int t = count(rng); t > 0; --t)
        p.add_term(basis[pick(rng)], coeff(rng));
    return p;
}

// Rank over Q by plain row elimination; kept separate from the library's solver.
inline int oracle_rank(std::vector<std::vector<Rational>> rows) {
    int rank = 0;
    const std::size_t ncols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < ncols && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t p = static_cast<std::size_t>(rank);
        while (p < rows.size() && rows[p][c] == 0)
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[p], rows[static_cast<std::size_t>(rank)]);
        const auto& piv = rows[static_cast<std::size_t>(rank)];
        for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0)
                continue;
            const Rational f = rows[r][c] / piv[c];
            for (std::size_t k = c; k < ncols; ++k)
                rows[r][k] -= f * piv[k];
        }
        ++rank;
    }
    return rank;
}

// All monomials of degree `deg` by exhaustive exponent search.
inline std::vector<std::vector<int>> oracle_exponents(const FreeAlgebra& alg, int deg) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<std::size_t>(alg.size()), 0);
    auto rec = [&](auto&& self, int g, int left) -> void {
        if (g == alg.size()) {
            if (left == 0)
                out.push_back(e);
            return;
        }
        const int d = alg.generator(g).degree;
        const int bound = alg.is_odd(g) ? 1 : left / d;
        for (int k = 0; k <= bound && k * d <= left; ++k) {
            e[static_cast<std::size_t>(g)] = k;
            self(self, g + 1, left - k * d);
        }
        e[static_cast<std::size_t>(g)] = 0;
    };
    rec(rec, 0, deg);
    return out;
}

// b_k = dim C^k - rank d_k - rank d_{k-1}, from matrices built on the oracle basis.
inline int oracle_betti(const Cdga& c, int k) {
    const auto& alg = c.algebra();
    auto monomial = [&](const std::vector<int>& e) {
        std::vector<Factor> f;
        for (std::size_t g = 0; g < e.size(); ++g)
            if (e[g] > 0)
                f.push_back(Factor{static_cast<int>(g), e[g]});
        return Monomial(std::move(f));
    };
    auto d_rank = [&](int from) {
        if (from < 0)
            return 0;
        const auto src = oracle_exponents(alg, from);
        const auto dst = oracle_exponents(alg, from + 1);
        std::vector<std::vector<Rational>> rows;
        for (const auto& s : src) {
            const Polynomial img = c.apply_d(Polynomial(monomial(s)));
            std::vector<Rational> row;
            for (const auto& t : dst)
                row.push_back(img.coefficient(monomial(t)));
            rows.push_back(std::move(row));
        }
        return oracle_rank(std::move(rows));
    };
    return static_cast<int>(oracle_exponents(alg, k).size()) - d_rank(k) - d_rank(k - 1);
}

}  // namespace cdga::testing
