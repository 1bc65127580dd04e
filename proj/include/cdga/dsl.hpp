#pragma once

// Text format for models:
//
//   algebra KT { gen u1:1; gen u2:1; gen u3:1; gen u4:1; d u3 = u1*u2; formal_dim 4; }
//   lie heis3 { dim 3; [X1,X2] = X3; }
//   fibration X { base = KT; fiber = S2; d v3 = v2^2 - u1*u2*u3*u4; }
//   ring H { gen x:2; rel x^3; top 4; }
//
// Comments run from '#' or '//' to the end of the line.

#include "cdga/cdga.hpp"
#include "cdga/lie.hpp"
#include "cdga/presented.hpp"
#include "cdga/relative.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace cdga {

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message, std::set<std::string> expected = {})
        : Error(render(line, column, message, expected)),
          line_(line),
          column_(column),
          message_(message),
          expected_(std::move(expected)) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }
    const std::set<std::string>& expected() const { return expected_; }

private:
    static std::string render(int line, int column, const std::string& message, const std::set<std::string>& expected) {
        std::string s = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
        if (!expected.empty()) {
            s += " (expected ";
            bool first = true;
            for (const auto& e : expected) {
                s += (first ? "" : ", ") + e;
                first = false;
            }
            s += ")";
        }
        return s;
    }

    int line_, column_;
    std::string message_;
    std::set<std::string> expected_;
};

namespace dsl {

enum class Tok { Ident, Number, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int column = 1;
};

inline std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End:
        return "end of input";
    case Tok::Number:
        return "number '" + t.text + "'";
    case Tok::Ident:
        return "identifier '" + t.text + "'";
    default:
        return "'" + t.text + "'";
    }
}

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        std::size_t j = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.kind = Tok::Ident;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            t.kind = Tok::Number;
        } else if (std::string_view("{};:=+-*^/()[],").find(c) != std::string_view::npos) {
            j = i + 1;
            t.kind = Tok::Punct;
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(src.substr(i, j - i));
        advance(j - i);
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

// Polynomial syntax tree; identifiers are resolved once the alphabet is known.
struct Expr {
    enum Kind { Number, Ident, Add, Sub, Mul, Neg, Pow } kind = Number;
    Rational value;
    std::string name;
    int exponent = 0;
    int line = 1, column = 1;
    std::unique_ptr<Expr> lhs, rhs;
};

inline Polynomial evaluate(const Expr& e, const FreeAlgebra& alg) {
    switch (e.kind) {
    case Expr::Number:
        return Polynomial::constant(e.value);
    case Expr::Ident: {
        auto id = alg.find(e.name);
        if (!id)
            throw ParseError(e.line, e.column, "unknown identifier '" + e.name + "'");
        return Polynomial::generator(*id);
    }
    case Expr::Add:
        return evaluate(*e.lhs, alg) + evaluate(*e.rhs, alg);
    case Expr::Sub:
        return evaluate(*e.lhs, alg) - evaluate(*e.rhs, alg);
    case Expr::Mul:
        return alg.multiply(evaluate(*e.lhs, alg), evaluate(*e.rhs, alg));
    case Expr::Neg:
        return -evaluate(*e.lhs, alg);
    case Expr::Pow:
        try {
            return alg.power(evaluate(*e.lhs, alg), e.exponent);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            throw ParseError(e.line, e.column, err.what());
        }
    }
    return {};
}

}  // namespace dsl

struct AlgebraItem {
    std::string name;
    Cdga model;
    std::optional<int> formal_dim;
    bool operator==(const AlgebraItem&) const = default;
};

struct LieItem {
    std::string name;
    LieAlgebraSpec lie;
    bool operator==(const LieItem&) const = default;
};

struct FibrationItem {
    std::string name;
    std::string base;
    std::string fiber;
    RelativeModel model;
    bool operator==(const FibrationItem&) const = default;
};

struct RingItem {
    std::string name;
    PresentedRing ring;
    bool operator==(const RingItem& o) const {
        return name == o.name && ring.algebra().generators() == o.ring.algebra().generators() &&
               ring.relations() == o.ring.relations() && ring.top() == o.ring.top();
    }
};

using Item = std::variant<AlgebraItem, LieItem, FibrationItem, RingItem>;

inline const std::string& item_name(const Item& it) {
    return std::visit([](const auto& x) -> const std::string& { return x.name; }, it);
}

inline const char* item_kind(const Item& it) {
    static constexpr const char* kinds[] = {"algebra", "lie", "fibration", "ring"};
    return kinds[it.index()];
}

struct SpecDocument {
    std::vector<Item> items;

    const Item* find(const std::string& name) const {
        for (const auto& it : items)
            if (item_name(it) == name)
                return &it;
        return nullptr;
    }

    bool operator==(const SpecDocument&) const = default;
};

namespace dsl {

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    SpecDocument document() {
        SpecDocument doc;
        while (peek().kind != Tok::End) {
            const Token& kw = peek();
            if (kw.kind != Tok::Ident || !(kw.text == "algebra" || kw.text == "lie" || kw.text == "fibration" ||
                                          kw.text == "ring"))
                fail(kw, "expected an item", {"algebra", "fibration", "lie", "ring"});
            const Token name = next_token_after_keyword();
            if (doc.find(name.text))
                throw ParseError(name.line, name.column, "duplicate item name '" + name.text + "'");
            if (kw.text == "algebra")
                doc.items.emplace_back(algebra(name));
            else if (kw.text == "lie")
                doc.items.emplace_back(lie(name));
            else if (kw.text == "fibration")
                doc.items.emplace_back(fibration(name, doc));
            else
                doc.items.emplace_back(ring(name));
        }
        return doc;
    }

    // A lone polynomial over `alg`, for tests and command-line arguments.
    Polynomial polynomial(const FreeAlgebra& alg) {
        auto e = expr();
        expect_end();
        return evaluate(*e, alg);
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token& t, const std::string& what, std::set<std::string> expected = {}) const {
        throw ParseError(t.line, t.column, what + ", found " + describe(t), std::move(expected));
    }

    bool is_punct(const std::string& p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool is_word(const std::string& w) const { return peek().kind == Tok::Ident && peek().text == w; }

    const Token& expect_punct(const std::string& p) {
        if (!is_punct(p))
            fail(peek(), "syntax error", {"'" + p + "'"});
        return take();
    }

    Token expect_ident(const std::string& what = "identifier") {
        if (peek().kind != Tok::Ident)
            fail(peek(), "syntax error", {what});
        return take();
    }

    Token expect_number() {
        if (peek().kind != Tok::Number)
            fail(peek(), "syntax error", {"integer"});
        return take();
    }

    void expect_end() {
        if (peek().kind != Tok::End)
            fail(peek(), "syntax error", {"end of input"});
    }

    int integer(const Token& t) const {
        if (t.text.size() > 9)
            throw ParseError(t.line, t.column, "integer '" + t.text + "' is too large");
        return std::stoi(t.text);
    }

    Token next_token_after_keyword() {
        take();
        return expect_ident("item name");
    }

    // expr := term (('+'|'-') term)*
    std::unique_ptr<Expr> expr() {
        auto lhs = term();
        while (is_punct("+") || is_punct("-")) {
            const Token op = take();
            auto node = std::make_unique<Expr>();
            node->kind = op.text == "+" ? Expr::Add : Expr::Sub;
            node->line = op.line;
            node->column = op.column;
            node->lhs = std::move(lhs);
            node->rhs = term();
            lhs = std::move(node);
        }
        return lhs;
    }

    // term := unary ('*' unary)*
    std::unique_ptr<Expr> term() {
        auto lhs = unary();
        while (is_punct("*")) {
            const Token op = take();
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Mul;
            node->line = op.line;
            node->column = op.column;
            node->lhs = std::move(lhs);
            node->rhs = unary();
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<Expr> unary() {
        if (is_punct("-")) {
            const Token op = take();
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Neg;
            node->line = op.line;
            node->column = op.column;
            node->lhs = unary();
            return node;
        }
        return power();
    }

    std::unique_ptr<Expr> power() {
        auto base = atom();
        if (is_punct("^")) {
            const Token op = take();
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Pow;
            node->line = op.line;
            node->column = op.column;
            node->exponent = integer(expect_number());
            node->lhs = std::move(base);
            return node;
        }
        return base;
    }

    std::unique_ptr<Expr> atom() {
        const Token& t = peek();
        auto node = std::make_unique<Expr>();
        node->line = t.line;
        node->column = t.column;
        if (t.kind == Tok::Number) {
            const Token num = take();
            node->kind = Expr::Number;
            node->value = Rational(num.text);
            if (is_punct("/")) {
                take();
                const Token den = expect_number();
                if (Rational(den.text) == 0)
                    throw ParseError(den.line, den.column, "zero denominator");
                node->value = Rational(num.text) / Rational(den.text);
            }
            return node;
        }
        if (t.kind == Tok::Ident) {
            node->kind = Expr::Ident;
            node->name = take().text;
            return node;
        }
        if (is_punct("(")) {
            take();
            auto inner = expr();
            expect_punct(")");
            return inner;
        }
        fail(t, "syntax error", {"'('", "'-'", "identifier", "number"});
    }

    struct PendingDifferential {
        Token target;
        std::unique_ptr<Expr> value;
    };

    std::vector<Generator> generator_decl(std::vector<Generator> gens) {
        while (true) {
            const Token name = expect_ident("generator name");
            expect_punct(":");
            const Token deg = expect_number();
            const int degree = integer(deg);
            if (degree < 1)
                throw ParseError(deg.line, deg.column,
                                 "generator '" + name.text + "' has degree " + deg.text + "; degrees must be >= 1");
            for (const auto& g : gens)
                if (g.name == name.text)
                    throw ParseError(name.line, name.column, "duplicate generator '" + name.text + "'");
            gens.push_back(Generator{static_cast<int>(gens.size()), name.text, degree});
            if (is_punct(";"))
                break;
            if (!is_punct(","))
                fail(peek(), "syntax error", {"','", "';'"});
            take();
        }
        take();
        return gens;
    }

    std::vector<Polynomial> resolve_differentials(const FreeAlgebra& alg, std::vector<PendingDifferential>& pending,
                                                  int offset, int count, const std::string& scope) {
        std::vector<Polynomial> d(static_cast<std::size_t>(count));
        std::vector<bool> seen(static_cast<std::size_t>(count), false);
        for (auto& p : pending) {
            auto id = alg.find(p.target.text);
            if (!id)
                throw ParseError(p.target.line, p.target.column, "unknown generator '" + p.target.text + "'");
            const int local = *id - offset;
            if (local < 0 || local >= count)
                throw ParseError(p.target.line, p.target.column,
                                 "'" + p.target.text + "' is not a " + scope + " generator");
            if (seen[static_cast<std::size_t>(local)])
                throw ParseError(p.target.line, p.target.column, "differential of '" + p.target.text + "' given twice");
            seen[static_cast<std::size_t>(local)] = true;
            Polynomial value;
            try {
                value = evaluate(*p.value, alg);
            } catch (const ParseError&) {
                throw;
            } catch (const Error& err) {
                throw ParseError(p.value->line, p.value->column, err.what());
            }
            const int want = alg.generator(*id).degree + 1;
            if (!alg.is_homogeneous(value, want))
                throw ParseError(p.target.line, p.target.column,
                                 "differential of '" + p.target.text + "' is not homogeneous of degree " +
                                     std::to_string(want));
            d[static_cast<std::size_t>(local)] = std::move(value);
        }
        return d;
    }

    AlgebraItem algebra(const Token& name) {
        expect_punct("{");
        std::vector<Generator> gens;
        std::vector<PendingDifferential> pending;
        AlgebraItem item;
        item.name = name.text;
        while (!is_punct("}")) {
            if (is_word("gen")) {
                take();
                gens = generator_decl(std::move(gens));
            } else if (is_word("d")) {
                take();
                PendingDifferential p{expect_ident("generator name"), nullptr};
                expect_punct("=");
                p.value = expr();
                expect_punct(";");
                pending.push_back(std::move(p));
            } else if (is_word("formal_dim")) {
                take();
                item.formal_dim = integer(expect_number());
                expect_punct(";");
            } else {
                fail(peek(), "expected a statement", {"'}'", "d", "formal_dim", "gen"});
            }
        }
        take();
        FreeAlgebra alg(gens);
        auto d = resolve_differentials(alg, pending, 0, alg.size(), "declared");
        item.model = Cdga(std::move(alg), std::move(d));
        return item;
    }

    LieItem lie(const Token& name) {
        expect_punct("{");
        LieItem item;
        item.name = name.text;
        if (!is_word("dim"))
            fail(peek(), "syntax error", {"dim"});
        take();
        const int dim = integer(expect_number());
        expect_punct(";");
        item.lie = LieAlgebraSpec(dim);
        std::vector<Generator> basis;
        for (int i = 0; i < dim; ++i)
            basis.push_back(Generator{i, "X" + std::to_string(i + 1), 2});
        const FreeAlgebra alg(basis);
        std::set<std::pair<int, int>> seen;
        while (!is_punct("}")) {
            if (!is_punct("["))
                fail(peek(), "expected a bracket", {"'['", "'}'"});
            const Token open = take();
            auto index = [&](const Token& t) {
                auto id = alg.find(t.text);
                if (!id)
                    throw ParseError(t.line, t.column, "'" + t.text + "' is not a basis element X1..X" + std::to_string(dim));
                return *id;
            };
            const int i = index(expect_ident("basis element"));
            expect_punct(",");
            const int j = index(expect_ident("basis element"));
            expect_punct("]");
            expect_punct("=");
            auto value = expr();
            expect_punct(";");
            if (i >= j)
                throw ParseError(open.line, open.column, "brackets must be written [Xi,Xj] with i < j");
            if (!seen.insert({i, j}).second)
                throw ParseError(open.line, open.column, "bracket given twice");
            const Polynomial p = evaluate(*value, alg);
            Vector v(static_cast<std::size_t>(dim));
            for (const auto& [m, c] : p.terms()) {
                if (m.word_length() != 1)
                    throw ParseError(value->line, value->column, "bracket value must be a linear combination of X1..Xn");
                v[static_cast<std::size_t>(m.factors()[0].gen)] = c;
            }
            item.lie.set_bracket(i, j, std::move(v));
        }
        take();
        return item;
    }

    FibrationItem fibration(const Token& name, const SpecDocument& doc) {
        expect_punct("{");
        FibrationItem item;
        item.name = name.text;
        std::optional<Token> base_tok, fiber_tok;
        std::vector<PendingDifferential> pending;
        while (!is_punct("}")) {
            if (is_word("base") || is_word("fiber")) {
                const bool is_base = peek().text == "base";
                take();
                expect_punct("=");
                const Token ref = expect_ident("item name");
                expect_punct(";");
                (is_base ? base_tok : fiber_tok) = ref;
            } else if (is_word("d")) {
                take();
                PendingDifferential p{expect_ident("generator name"), nullptr};
                expect_punct("=");
                p.value = expr();
                expect_punct(";");
                pending.push_back(std::move(p));
            } else {
                fail(peek(), "expected a statement", {"'}'", "base", "d", "fiber"});
            }
        }
        const Token close = take();
        if (!base_tok || !fiber_tok)
            throw ParseError(close.line, close.column, "fibration needs both 'base' and 'fiber'");
        const Cdga base = resolve_model(doc, *base_tok, true);
        const Cdga fiber = resolve_model(doc, *fiber_tok, false);
        item.base = base_tok->text;
        item.fiber = fiber_tok->text;
        std::vector<Generator> gens = base.algebra().generators();
        for (const auto& g : fiber.algebra().generators()) {
            for (const auto& b : base.algebra().generators())
                if (b.name == g.name)
                    throw ParseError(fiber_tok->line, fiber_tok->column,
                                     "generator '" + g.name + "' occurs in both base and fiber");
            gens.push_back(g);
        }
        const FreeAlgebra total(gens);
        auto d = resolve_differentials(total, pending, base.size(), fiber.size(), "fiber");
        item.model = RelativeModel(base, fiber, std::move(d));
        return item;
    }

    static Cdga resolve_model(const SpecDocument& doc, const Token& ref, bool allow_lie) {
        const Item* it = doc.find(ref.text);
        if (!it)
            throw ParseError(ref.line, ref.column, "unknown item '" + ref.text + "'");
        if (auto a = std::get_if<AlgebraItem>(it))
            return a->model;
        if (auto l = std::get_if<LieItem>(it); l && allow_lie) {
            try {
                return chevalley_eilenberg(l->lie);
            } catch (const Error& e) {
                throw ParseError(ref.line, ref.column, e.what());
            }
        }
        throw ParseError(ref.line, ref.column, "'" + ref.text + "' is not an algebra");
    }

    RingItem ring(const Token& name) {
        expect_punct("{");
        RingItem item;
        item.name = name.text;
        std::vector<Generator> gens;
        std::vector<std::unique_ptr<Expr>> rels;
        std::optional<int> top;
        while (!is_punct("}")) {
            if (is_word("gen")) {
                take();
                gens = generator_decl(std::move(gens));
            } else if (is_word("rel")) {
                take();
                rels.push_back(expr());
                while (is_punct(",")) {
                    take();
                    rels.push_back(expr());
                }
                expect_punct(";");
            } else if (is_word("top")) {
                take();
                top = integer(expect_number());
                expect_punct(";");
            } else {
                fail(peek(), "expected a statement", {"'}'", "gen", "rel", "top"});
            }
        }
        const Token close = take();
        if (!top)
            throw ParseError(close.line, close.column, "ring needs a 'top' degree");
        FreeAlgebra alg(gens);
        std::vector<Polynomial> relations;
        for (const auto& r : rels) {
            Polynomial p = evaluate(*r, alg);
            if (!alg.is_homogeneous(p))
                throw ParseError(r->line, r->column, "relation is not homogeneous");
            relations.push_back(std::move(p));
        }
        item.ring = PresentedRing(std::move(alg), std::move(relations), *top);
        return item;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace dsl

inline SpecDocument parse_spec(std::string_view text) { return dsl::Parser(text).document(); }

inline Polynomial parse_polynomial(const FreeAlgebra& alg, std::string_view text) {
    return dsl::Parser(text).polynomial(alg);
}

inline std::string print_algebra(const std::string& name, const Cdga& c, std::optional<int> formal_dim = std::nullopt) {
    std::ostringstream os;
    const auto& alg = c.algebra();
    os << "algebra " << name << " {\n";
    for (const auto& g : alg.generators())
        os << "  gen " << g.name << " : " << g.degree << ";\n";
    for (int g = 0; g < c.size(); ++g)
        if (!c.d(g).is_zero())
            os << "  d " << alg.generator(g).name << " = " << alg.format(c.d(g)) << ";\n";
    if (formal_dim)
        os << "  formal_dim " << *formal_dim << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string print_lie(const std::string& name, const LieAlgebraSpec& l) {
    std::ostringstream os;
    os << "lie " << name << " {\n  dim " << l.dim() << ";\n";
    std::vector<Generator> basis;
    for (int i = 0; i < l.dim(); ++i)
        basis.push_back(Generator{i, "X" + std::to_string(i + 1), 2});
    const FreeAlgebra alg(basis);
    for (const auto& [ij, v] : l.brackets()) {
        Polynomial p;
        for (int k = 0; k < l.dim(); ++k)
            p.add_term(Monomial::generator(k), v[static_cast<std::size_t>(k)]);
        os << "  [X" << ij.first + 1 << ",X" << ij.second + 1 << "] = " << alg.format(p) << ";\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string print_item(const Item& it) {
    if (auto a = std::get_if<AlgebraItem>(&it))
        return print_algebra(a->name, a->model, a->formal_dim);
    if (auto l = std::get_if<LieItem>(&it))
        return print_lie(l->name, l->lie);
    std::ostringstream os;
    if (auto f = std::get_if<FibrationItem>(&it)) {
        const auto& m = f->model;
        os << "fibration " << f->name << " {\n  base = " << f->base << ";\n  fiber = " << f->fiber << ";\n";
        for (int j = 0; j < m.fiber().size(); ++j)
            if (!m.D(j).is_zero())
                os << "  d " << m.fiber().algebra().generator(j).name << " = " << m.total().algebra().format(m.D(j))
                   << ";\n";
        os << "}\n";
        return os.str();
    }
    const auto& r = std::get<RingItem>(it);
    const auto& alg = r.ring.algebra();
    os << "ring " << r.name << " {\n";
    for (const auto& g : alg.generators())
        os << "  gen " << g.name << " : " << g.degree << ";\n";
    for (const auto& rel : r.ring.relations())
        os << "  rel " << alg.format(rel) << ";\n";
    os << "  top " << r.ring.top() << ";\n}\n";
    return os.str();
}

inline std::string print_spec(const SpecDocument& doc) {
    std::string out;
    for (std::size_t i = 0; i < doc.items.size(); ++i) {
        if (i)
            out += "\n";
        out += print_item(doc.items[i]);
    }
    return out;
}

}  // namespace cdga
