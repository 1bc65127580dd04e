#pragma once

// Free graded-commutative algebras over Q: generators, monomials in normal
// form, sparse polynomials, Koszul-signed products and graded derivations.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cdga {

using Rational = mpq_class;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultCap = 64;

struct Generator {
    int id = 0;
    std::string name;
    int degree = 1;

    bool odd() const { return degree % 2 != 0; }
    bool operator==(const Generator&) const = default;
};

struct Factor {
    int gen = 0;
    int exp = 1;
    bool operator==(const Factor&) const = default;
};

// Product of generator powers with strictly increasing generator ids.
class Monomial {
public:
    Monomial() = default;

    // Caller guarantees strictly increasing ids and positive exponents.
    explicit Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
        for (const auto& f : factors_)
            word_length_ += f.exp;
    }

    static Monomial generator(int id) { return Monomial({Factor{id, 1}}); }

    const std::vector<Factor>& factors() const { return factors_; }
    int word_length() const { return word_length_; }
    bool is_unit() const { return factors_.empty(); }

    int exponent(int gen) const {
        for (const auto& f : factors_)
            if (f.gen == gen)
                return f.exp;
        return 0;
    }

    bool operator==(const Monomial& o) const { return factors_ == o.factors_; }

private:
    std::vector<Factor> factors_;
    int word_length_ = 0;
};

// Canonical order: word length first, then exponent vectors in descending
// lexicographic order (so v1v2 < v1v3 < v2v3 and x^2 < xy < y^2).
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.word_length() != b.word_length())
            return a.word_length() < b.word_length();
        const auto& fa = a.factors();
        const auto& fb = b.factors();
        const std::size_t n = std::min(fa.size(), fb.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (fa[i].gen != fb[i].gen)
                return fa[i].gen < fb[i].gen;
            if (fa[i].exp != fb[i].exp)
                return fa[i].exp > fb[i].exp;
        }
        return fa.size() > fb.size();
    }
};

class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, MonomialLess>;

    Polynomial() = default;
    Polynomial(const Monomial& m, const Rational& c = 1) { add_term(m, c); }

    static Polynomial constant(const Rational& c) { return Polynomial(Monomial(), c); }
    static Polynomial generator(int id) { return Polynomial(Monomial::generator(id)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_)
            c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    int min_word_length() const { return terms_.empty() ? 0 : terms_.begin()->first.word_length(); }
    int max_word_length() const { return terms_.empty() ? 0 : terms_.rbegin()->first.word_length(); }

    // Terms with word length in [lo, hi].
    Polynomial word_length_window(int lo, int hi) const {
        Polynomial out;
        for (const auto& [m, c] : terms_)
            if (m.word_length() >= lo && m.word_length() <= hi)
                out.terms_.emplace(m, c);
        return out;
    }

private:
    Terms terms_;
};

struct SignedMonomial {
    int sign = 1;  // +1, -1, or 0 when an odd generator is squared
    Monomial monomial;
};

class FreeAlgebra {
public:
    FreeAlgebra() = default;

    explicit FreeAlgebra(std::vector<Generator> gens, int cap = kDefaultCap) : gens_(std::move(gens)), cap_(cap) {
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            auto& g = gens_[i];
            g.id = static_cast<int>(i);
            if (g.degree < 1)
                throw Error("generator '" + g.name + "' has degree " + std::to_string(g.degree) +
                            "; generators must have degree >= 1");
            if (g.degree > cap_)
                throw Error("generator '" + g.name + "' exceeds the degree cap " + std::to_string(cap_));
            if (!by_name_.emplace(g.name, g.id).second)
                throw Error("duplicate generator name '" + g.name + "'");
        }
    }

    static FreeAlgebra from_degrees(const std::vector<std::pair<std::string, int>>& named, int cap = kDefaultCap) {
        std::vector<Generator> gens;
        for (const auto& [n, d] : named)
            gens.push_back(Generator{0, n, d});
        return FreeAlgebra(std::move(gens), cap);
    }

    int size() const { return static_cast<int>(gens_.size()); }
    int cap() const { return cap_; }
    const std::vector<Generator>& generators() const { return gens_; }
    const Generator& generator(int id) const { return gens_.at(static_cast<std::size_t>(id)); }
    bool is_odd(int id) const { return generator(id).odd(); }

    std::optional<int> find(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end())
            return std::nullopt;
        return it->second;
    }

    Polynomial gen(const std::string& name) const {
        auto id = find(name);
        if (!id)
            throw Error("unknown generator '" + name + "'");
        return Polynomial::generator(*id);
    }

    int max_generator_degree() const {
        int m = 0;
        for (const auto& g : gens_)
            m = std::max(m, g.degree);
        return m;
    }

    int degree(const Monomial& m) const {
        int d = 0;
        for (const auto& f : m.factors())
            d += f.exp * generator(f.gen).degree;
        return d;
    }

    bool monomial_is_odd(const Monomial& m) const {
        int parity = 0;
        for (const auto& f : m.factors())
            if (is_odd(f.gen))
                parity ^= (f.exp & 1);
        return parity != 0;
    }

    // Zero counts as homogeneous of every degree.
    bool is_homogeneous(const Polynomial& p, int deg) const {
        for (const auto& [m, c] : p.terms())
            if (degree(m) != deg)
                return false;
        return true;
    }

    bool is_homogeneous(const Polynomial& p) const {
        if (p.is_zero())
            return true;
        return is_homogeneous(p, degree(p.terms().begin()->first));
    }

    // Degree of a nonzero homogeneous polynomial.
    std::optional<int> degree_of(const Polynomial& p) const {
        if (p.is_zero() || !is_homogeneous(p))
            return std::nullopt;
        return degree(p.terms().begin()->first);
    }

    // Stable-sorts the factors by generator id, counting odd-odd transpositions.
    SignedMonomial normalize_product(std::span<const Factor> factors) const {
        for (const auto& f : factors) {
            if (f.gen < 0 || f.gen >= size())
                throw Error("unknown generator id " + std::to_string(f.gen));
            if (f.exp < 1)
                throw Error("factor exponent must be positive");
        }
        long long inversions = 0;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (!is_odd(factors[i].gen))
                continue;
            for (std::size_t j = i + 1; j < factors.size(); ++j)
                if (is_odd(factors[j].gen) && factors[j].gen < factors[i].gen)
                    inversions += static_cast<long long>(factors[i].exp) * factors[j].exp;
        }
        std::vector<Factor> sorted(factors.begin(), factors.end());
        std::stable_sort(sorted.begin(), sorted.end(), [](const Factor& a, const Factor& b) { return a.gen < b.gen; });
        std::vector<Factor> merged;
        for (const auto& f : sorted) {
            if (!merged.empty() && merged.back().gen == f.gen)
                merged.back().exp += f.exp;
            else
                merged.push_back(f);
        }
        int deg = 0;
        for (const auto& f : merged) {
            if (is_odd(f.gen) && f.exp >= 2)
                return {0, Monomial()};
            check_cap(f.exp, "exponent");
            deg += f.exp * generator(f.gen).degree;
        }
        check_cap(deg, "degree");
        return {(inversions % 2) ? -1 : 1, Monomial(std::move(merged))};
    }

    SignedMonomial multiply(const Monomial& a, const Monomial& b) const {
        if (a.is_unit())
            return {1, b};
        if (b.is_unit())
            return {1, a};
        int parity = 0;
        for (const auto& fb : b.factors()) {
            if (!is_odd(fb.gen))
                continue;
            for (const auto& fa : a.factors()) {
                if (!is_odd(fa.gen))
                    continue;
                if (fa.gen == fb.gen)
                    return {0, Monomial()};
                if (fa.gen > fb.gen)
                    parity ^= 1;
            }
        }
        std::vector<Factor> out;
        out.reserve(a.factors().size() + b.factors().size());
        const auto& fa = a.factors();
        const auto& fb = b.factors();
        std::size_t i = 0, j = 0;
        int deg = 0;
        while (i < fa.size() || j < fb.size()) {
            Factor f;
            if (j == fb.size() || (i < fa.size() && fa[i].gen < fb[j].gen))
                f = fa[i++];
            else if (i == fa.size() || fb[j].gen < fa[i].gen)
                f = fb[j++];
            else {
                f = Factor{fa[i].gen, fa[i].exp + fb[j].exp};
                ++i;
                ++j;
                check_cap(f.exp, "exponent");
            }
            deg += f.exp * generator(f.gen).degree;
            out.push_back(f);
        }
        check_cap(deg, "degree");
        return {parity ? -1 : 1, Monomial(std::move(out))};
    }

    Polynomial multiply(const Polynomial& p, const Polynomial& q) const {
        Polynomial out;
        for (const auto& [ma, ca] : p.terms())
            for (const auto& [mb, cb] : q.terms()) {
                auto [sign, m] = multiply(ma, mb);
                if (sign != 0)
                    out.add_term(m, sign > 0 ? ca * cb : Rational(-(ca * cb)));
            }
        return out;
    }

    Polynomial power(const Polynomial& p, int e) const {
        Polynomial out = Polynomial::constant(1);
        for (int i = 0; i < e; ++i)
            out = multiply(out, p);
        return out;
    }

    // All monomials of the given degree within the word-length window, in
    // canonical order.
    std::vector<Monomial> basis(int deg, std::optional<int> max_word_length = std::nullopt,
                                std::optional<int> min_word_length = std::nullopt) const {
        std::vector<Monomial> out;
        if (deg < 0)
            return out;
        const int max_wl = max_word_length.value_or(deg);
        const int min_wl = min_word_length.value_or(0);
        std::vector<Factor> current;
        enumerate(0, deg, 0, max_wl, min_wl, current, out);
        std::sort(out.begin(), out.end(), MonomialLess{});
        return out;
    }

    // Extension of generator images to a derivation of degree `shift`:
    // theta(ab) = theta(a) b + (-1)^(shift |a|) a theta(b).
    Polynomial extend_derivation(const std::vector<Polynomial>& images, int shift, const Polynomial& p) const {
        check_derivation_images(images, shift);
        return apply_derivation(images, shift, p);
    }

    void check_derivation_images(const std::vector<Polynomial>& images, int shift) const {
        if (static_cast<int>(images.size()) != size())
            throw Error("derivation needs one image per generator");
        for (int g = 0; g < size(); ++g)
            if (!is_homogeneous(images[static_cast<std::size_t>(g)], generator(g).degree + shift))
                throw Error("derivation image of '" + generator(g).name + "' is not homogeneous of degree " +
                            std::to_string(generator(g).degree + shift));
    }

    // Unchecked variant; images must already satisfy check_derivation_images.
    Polynomial apply_derivation(const std::vector<Polynomial>& images, int shift, const Polynomial& p) const {
        Polynomial out;
        for (const auto& [m, c] : p.terms())
            out += apply_derivation(images, shift, m) * c;
        return out;
    }

    Polynomial apply_derivation(const std::vector<Polynomial>& images, int shift, const Monomial& m) const {
        Polynomial out;
        const auto& fs = m.factors();
        int prefix_degree = 0;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const auto& img = images[static_cast<std::size_t>(fs[i].gen)];
            if (!img.is_zero()) {
                std::vector<Factor> prefix(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(i));
                std::vector<Factor> rest;
                if (fs[i].exp > 1)
                    rest.push_back(Factor{fs[i].gen, fs[i].exp - 1});
                rest.insert(rest.end(), fs.begin() + static_cast<std::ptrdiff_t>(i) + 1, fs.end());
                Rational coeff = fs[i].exp;
                if ((shift % 2 != 0) && (prefix_degree % 2 != 0))
                    coeff = -coeff;
                Polynomial term = multiply(multiply(Polynomial(Monomial(std::move(prefix))), img),
                                           Polynomial(Monomial(std::move(rest))));
                out += term * coeff;
            }
            prefix_degree += fs[i].exp * generator(fs[i].gen).degree;
        }
        return out;
    }

    // Algebra morphism into `target` determined by generator images, which
    // must preserve degree parity.
    Polynomial substitute(const std::vector<Polynomial>& images, const FreeAlgebra& target,
                          const Polynomial& p) const {
        Polynomial out;
        for (const auto& [m, c] : p.terms()) {
            Polynomial term = Polynomial::constant(c);
            for (const auto& f : m.factors())
                for (int e = 0; e < f.exp; ++e)
                    term = target.multiply(term, images[static_cast<std::size_t>(f.gen)]);
            out += term;
        }
        return out;
    }

    std::string format(const Monomial& m) const {
        if (m.is_unit())
            return "1";
        std::string s;
        for (const auto& f : m.factors()) {
            if (!s.empty())
                s += '*';
            s += generator(f.gen).name;
            if (f.exp > 1)
                s += '^' + std::to_string(f.exp);
        }
        return s;
    }

    std::string format(const Polynomial& p) const {
        if (p.is_zero())
            return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : p.terms()) {
            Rational mag = abs(c);
            if (first)
                s += (c < 0) ? "-" : "";
            else
                s += (c < 0) ? " - " : " + ";
            first = false;
            if (m.is_unit())
                s += mag.get_str();
            else if (mag == 1)
                s += format(m);
            else
                s += mag.get_str() + "*" + format(m);
        }
        return s;
    }

private:
    void check_cap(int value, const char* what) const {
        if (value > cap_)
            throw Error(std::string(what) + " " + std::to_string(value) + " exceeds the configured cap " +
                        std::to_string(cap_));
    }

    void enumerate(int gen, int remaining, int wl, int max_wl, int min_wl, std::vector<Factor>& current,
                   std::vector<Monomial>& out) const {
        if (remaining == 0) {
            if (wl >= min_wl)
                out.emplace_back(current);
            return;
        }
        if (gen == size())
            return;
        const int d = generator(gen).degree;
        int max_exp = is_odd(gen) ? 1 : remaining / d;
        max_exp = std::min({max_exp, remaining / d, max_wl - wl});
        for (int e = max_exp; e >= 1; --e) {
            current.push_back(Factor{gen, e});
            enumerate(gen + 1, remaining - e * d, wl + e, max_wl, min_wl, current, out);
            current.pop_back();
        }
        enumerate(gen + 1, remaining, wl, max_wl, min_wl, current, out);
    }

    std::vector<Generator> gens_;
    std::unordered_map<std::string, int> by_name_;
    int cap_ = kDefaultCap;
};

}  // namespace cdga
