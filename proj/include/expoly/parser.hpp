#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "expoly/classifier.hpp"
#include "expoly/constant.hpp"
#include "expoly/delayop.hpp"
#include "expoly/errors.hpp"
#include "expoly/expoly.hpp"
#include "expoly/poly.hpp"

namespace expoly {

// ---- tokens --------------------------------------------------------------

namespace lex {

enum class Tok {
    End, Ident, Integer, Plus, Minus, Star, Slash, Caret,
    LParen, RParen, Comma, Equals, Prime
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

inline std::vector<Token> tokenize(const std::string& s, int line, int col0) {
    std::vector<Token> out;
    size_t k = 0;
    auto col = [&] { return col0 + static_cast<int>(k) + 1; };
    while (k < s.size()) {
        char c = s[k];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++k;
            continue;
        }
        if (c == '#') break;
        int here = col();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = k;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Integer, s.substr(k, j - k), line, here});
            k = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = k;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                                    s[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, s.substr(k, j - k), line, here});
            k = j;
            continue;
        }
        Tok t;
        switch (c) {
        case '+': t = Tok::Plus; break;
        case '-': t = Tok::Minus; break;
        case '*': t = Tok::Star; break;
        case '/': t = Tok::Slash; break;
        case '^': t = Tok::Caret; break;
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        case ',': t = Tok::Comma; break;
        case '=': t = Tok::Equals; break;
        case '\'': t = Tok::Prime; break;
        default:
            throw ParseError(line, here, std::string("unexpected character '") + c + "'");
        }
        out.push_back({t, std::string(1, c), line, here});
        ++k;
    }
    out.push_back({Tok::End, "", line, col()});
    return out;
}

}  // namespace lex

// Parsed expression value: a constant, a polynomial in z, or an
// exponential polynomial. Promotion is upward only.
using Value = std::variant<ConstExpr, Poly, ExPoly>;

namespace valdetail {

inline Poly to_poly(const Value& v) {
    if (std::holds_alternative<ConstExpr>(v)) return Poly(std::get<ConstExpr>(v));
    if (std::holds_alternative<Poly>(v)) return std::get<Poly>(v);
    throw DomainError("expected a polynomial, found an exponential term");
}

inline ExPoly to_expoly(const Value& v) {
    if (std::holds_alternative<ExPoly>(v)) return std::get<ExPoly>(v);
    return ExPoly::from_poly(to_poly(v));
}

inline int rank(const Value& v) { return static_cast<int>(v.index()); }

}  // namespace valdetail

// ---- recursive-descent expression parser ----------------------------------

class ExprParser {
public:
    // strict_params: param(x) must already be declared in env
    ExprParser(std::vector<lex::Token> toks, ParamEnv* env, bool strict_params)
        : toks_(std::move(toks)), env_(env), strict_(strict_params) {}

    Value parse_expression() {
        Value v = expr();
        expect_end();
        return v;
    }

    ConstExpr parse_constant_only() {
        Value v = expr();
        expect_end();
        return require_const(v, toks_.front());
    }

    // L = sum of +- terms, each b * f^(r)(z + c) or delta(c) sugar
    DelayDiffOp parse_operator_expr() {
        std::vector<OpTerm> terms;
        int sign = 1;
        if (peek().kind == lex::Tok::Minus) {
            sign = -1;
            next();
        }
        while (true) {
            parse_operator_term(sign, terms);
            if (peek().kind == lex::Tok::End) break;
            if (peek().kind == lex::Tok::Plus) {
                sign = 1;
                next();
            } else if (peek().kind == lex::Tok::Minus) {
                sign = -1;
                next();
            } else {
                fail(peek(), "expected '+', '-' or end of operator expression");
            }
        }
        try {
            return DelayDiffOp(std::move(terms));
        } catch (const DomainError& e) {
            throw ParseError(toks_.front().line, toks_.front().col, e.what());
        }
    }

private:
    std::vector<lex::Token> toks_;
    size_t pos_ = 0;
    ParamEnv* env_;
    bool strict_;

    const lex::Token& peek(size_t ahead = 0) const {
        size_t k = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[k];
    }
    const lex::Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    [[noreturn]] static void fail(const lex::Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg + (t.text.empty() ? "" : " (near '" + t.text + "')"));
    }
    void expect(lex::Tok k, const char* what) {
        if (peek().kind != k) fail(peek(), std::string("expected ") + what);
        next();
    }
    void expect_end() {
        if (peek().kind != lex::Tok::End) fail(peek(), "unexpected trailing input");
    }

    static ConstExpr require_const(const Value& v, const lex::Token& at) {
        if (!std::holds_alternative<ConstExpr>(v))
            fail(at, "expected a constant expression (no z here)");
        return std::get<ConstExpr>(v);
    }

    // --- value algebra with promotion ---

    static Value add(const Value& a, const Value& b, const lex::Token& at, bool sub) {
        try {
            int r = std::max(valdetail::rank(a), valdetail::rank(b));
            if (r == 0) {
                const auto& x = std::get<ConstExpr>(a);
                const auto& y = std::get<ConstExpr>(b);
                return sub ? x - y : x + y;
            }
            if (r == 1) {
                Poly x = valdetail::to_poly(a), y = valdetail::to_poly(b);
                return sub ? x - y : x + y;
            }
            ExPoly x = valdetail::to_expoly(a), y = valdetail::to_expoly(b);
            return sub ? x - y : x + y;
        } catch (const Error& e) {
            fail(at, e.what());
        }
    }

    static Value mul(const Value& a, const Value& b, const lex::Token& at) {
        try {
            int r = std::max(valdetail::rank(a), valdetail::rank(b));
            if (r == 0) return std::get<ConstExpr>(a) * std::get<ConstExpr>(b);
            if (r == 1) return valdetail::to_poly(a) * valdetail::to_poly(b);
            return valdetail::to_expoly(a) * valdetail::to_expoly(b);
        } catch (const Error& e) {
            fail(at, e.what());
        }
    }

    static Value div(const Value& a, const Value& b, const lex::Token& at) {
        if (!std::holds_alternative<ConstExpr>(b))
            fail(at, "division requires a constant divisor");
        try {
            const ConstExpr& d = std::get<ConstExpr>(b);
            if (std::holds_alternative<ConstExpr>(a)) return std::get<ConstExpr>(a) / d;
            ConstExpr inv = ConstExpr::integer(1) / d;
            if (std::holds_alternative<Poly>(a)) return std::get<Poly>(a).scaled(inv);
            return std::get<ExPoly>(a).scaled(inv);
        } catch (const Error& e) {
            fail(at, e.what());
        }
    }

    static Value negate(const Value& a) {
        if (std::holds_alternative<ConstExpr>(a)) return -std::get<ConstExpr>(a);
        if (std::holds_alternative<Poly>(a)) return -std::get<Poly>(a);
        return -std::get<ExPoly>(a);
    }

    static Value pow_value(const Value& a, const Value& b, const lex::Token& at) {
        if (!std::holds_alternative<ConstExpr>(b))
            fail(at, "exponent must be an integer constant");
        auto r = std::get<ConstExpr>(b).as_rational();
        if (!r || r->get_den() != 1 || !r->get_num().fits_slong_p())
            fail(at, "exponent must be an integer constant");
        long k = r->get_num().get_si();
        try {
            if (std::holds_alternative<ConstExpr>(a))
                return std::get<ConstExpr>(a).pow(k);
            if (k < 0) fail(at, "negative powers need a constant base");
            if (std::holds_alternative<Poly>(a)) {
                Poly acc(ConstExpr::integer(1));
                for (long j = 0; j < k; ++j) acc = acc * std::get<Poly>(a);
                return acc;
            }
            return std::get<ExPoly>(a).pow(static_cast<unsigned>(k));
        } catch (const Error& e) {
            fail(at, e.what());
        }
    }

    // --- grammar ---

    Value expr() {
        Value v = term();
        while (peek().kind == lex::Tok::Plus || peek().kind == lex::Tok::Minus) {
            lex::Token op = next();
            Value rhs = term();
            v = add(v, rhs, op, op.kind == lex::Tok::Minus);
        }
        return v;
    }

    Value term() {
        Value v = unary();
        while (peek().kind == lex::Tok::Star || peek().kind == lex::Tok::Slash) {
            lex::Token op = next();
            Value rhs = unary();
            v = op.kind == lex::Tok::Star ? mul(v, rhs, op) : div(v, rhs, op);
        }
        return v;
    }

    Value unary() {
        if (peek().kind == lex::Tok::Minus) {
            next();
            return negate(unary());
        }
        return power();
    }

    Value power() {
        Value v = atom();
        if (peek().kind == lex::Tok::Caret) {
            lex::Token op = next();
            Value e = unary();  // allows 2^-3 and 2^(k)
            v = pow_value(v, e, op);
        }
        return v;
    }

    Value atom() {
        const lex::Token& t = peek();
        switch (t.kind) {
        case lex::Tok::Integer: {
            next();
            return ConstExpr::rational(Rat(t.text));
        }
        case lex::Tok::LParen: {
            next();
            Value v = expr();
            expect(lex::Tok::RParen, "')'");
            return v;
        }
        case lex::Tok::Ident: {
            if (t.text == "z") {
                next();
                return Poly::z();
            }
            if (t.text == "i") {
                next();
                return ConstExpr::i();
            }
            if (t.text == "pi") {
                next();
                return ConstExpr::pi();
            }
            if (t.text == "log") {
                next();
                expect(lex::Tok::LParen, "'(' after log");
                lex::Token at = peek();
                Value v = expr();
                expect(lex::Tok::RParen, "')'");
                auto r = require_const(v, at).as_rational();
                if (!r || *r <= 0)
                    fail(at, "log requires a positive rational argument");
                return ConstExpr::log_rational(*r);
            }
            if (t.text == "exp") {
                next();
                expect(lex::Tok::LParen, "'(' after exp");
                lex::Token at = peek();
                Value v = expr();
                expect(lex::Tok::RParen, "')'");
                if (std::holds_alternative<ConstExpr>(v))
                    return ConstExpr::exp(std::get<ConstExpr>(v));
                if (std::holds_alternative<Poly>(v))
                    return ExPoly::term(Poly(ConstExpr::integer(1)), std::get<Poly>(v));
                fail(at, "exp argument must be a polynomial in z");
            }
            if (t.text == "param") {
                next();
                expect(lex::Tok::LParen, "'(' after param");
                if (peek().kind != lex::Tok::Ident) fail(peek(), "expected parameter name");
                lex::Token nm = next();
                expect(lex::Tok::RParen, "')'");
                if (!env_) fail(nm, "parameters are not allowed here");
                if (strict_ && !env_->is_declared(nm.text))
                    fail(nm, "unknown parameter '" + nm.text + "'");
                if (!strict_) env_->declare(nm.text, false);
                return ConstExpr::param(nm.text, env_->is_nonzero(nm.text));
            }
            fail(t, "unknown identifier '" + t.text + "'");
        }
        default:
            fail(t, "expected an expression");
        }
    }

    // --- operator grammar ---

    void parse_operator_term(int sign, std::vector<OpTerm>& out) {
        ConstExpr coeff = ConstExpr::integer(sign);
        while (true) {
            const lex::Token& t = peek();
            if (t.kind == lex::Tok::Ident && t.text == "f") {
                OpTerm ot = parse_f_atom();
                ot.weight = coeff;
                out.push_back(std::move(ot));
                return;
            }
            if (t.kind == lex::Tok::Ident && t.text == "delta") {
                next();
                expect(lex::Tok::LParen, "'(' after delta");
                lex::Token at = peek();
                Value v = expr();
                expect(lex::Tok::RParen, "')'");
                ConstExpr c = require_const(v, at);
                out.push_back({-coeff, 0, ConstExpr()});
                out.push_back({coeff, 0, c});
                return;
            }
            // constant factor before the f-term
            lex::Token at = t;
            Value v = power();
            if (peek().kind == lex::Tok::Minus) {
                // allow forms like 3*-f(z)? no: reject for clarity
                fail(peek(), "expected '*' before the f-term");
            }
            ConstExpr c = require_const(v, at);
            if (peek().kind == lex::Tok::Star) {
                next();
                coeff = coeff * c;
                continue;
            }
            if (peek().kind == lex::Tok::Slash) {
                next();
                lex::Token dat = peek();
                Value d = power();
                try {
                    coeff = coeff * (c / require_const(d, dat));
                } catch (const Error& e) {
                    fail(dat, e.what());
                }
                expect(lex::Tok::Star, "'*' before the f-term");
                continue;
            }
            fail(peek(), "expected '*' and an f-term in the operator expression");
        }
    }

    OpTerm parse_f_atom() {
        next();  // 'f'
        OpTerm ot;
        ot.weight = ConstExpr::integer(1);
        while (peek().kind == lex::Tok::Prime) {
            ++ot.order;
            next();
        }
        if (ot.order == 0 && peek().kind == lex::Tok::Caret) {
            next();
            expect(lex::Tok::LParen, "'(' after f^");
            if (peek().kind != lex::Tok::Integer)
                fail(peek(), "expected derivative order");
            ot.order = static_cast<unsigned>(std::stoul(next().text));
            expect(lex::Tok::RParen, "')'");
        }
        expect(lex::Tok::LParen, "'(' after f");
        if (!(peek().kind == lex::Tok::Ident && peek().text == "z"))
            fail(peek(), "operator argument must start with z");
        next();
        ot.shift = ConstExpr();
        if (peek().kind == lex::Tok::Plus || peek().kind == lex::Tok::Minus) {
            bool neg = next().kind == lex::Tok::Minus;
            lex::Token at = peek();
            Value v = expr();
            ConstExpr c = require_const(v, at);  // shifts are closed constants
            ot.shift = neg ? -c : c;
        }
        expect(lex::Tok::RParen, "')' after operator argument");
        return ot;
    }
};

// ---- convenience wrappers --------------------------------------------------

inline Value parse_value(const std::string& text, ParamEnv* env = nullptr,
                         int line = 1, int col0 = 0) {
    ExprParser p(lex::tokenize(text, line, col0), env, false);
    return p.parse_expression();
}

inline ConstExpr parse_constant(const std::string& text, ParamEnv* env = nullptr) {
    ExprParser p(lex::tokenize(text, 1, 0), env, false);
    return p.parse_constant_only();
}

inline Poly parse_poly(const std::string& text, ParamEnv* env = nullptr) {
    return valdetail::to_poly(parse_value(text, env));
}

inline ExPoly parse_expoly(const std::string& text, ParamEnv* env = nullptr) {
    return valdetail::to_expoly(parse_value(text, env));
}

inline DelayDiffOp parse_operator(const std::string& text, ParamEnv* env = nullptr) {
    ExprParser p(lex::tokenize(text, 1, 0), env, false);
    return p.parse_operator_expr();
}

inline std::vector<ConstExpr> parse_point_list(const std::string& text,
                                               ParamEnv* env = nullptr) {
    std::vector<ConstExpr> out;
    size_t start = 0;
    int depth = 0;
    for (size_t k = 0; k <= text.size(); ++k) {
        if (k < text.size() && text[k] == '(') ++depth;
        if (k < text.size() && text[k] == ')') --depth;
        if (k == text.size() || (text[k] == ',' && depth == 0)) {
            out.push_back(parse_constant(text.substr(start, k - start), env));
            start = k + 1;
        }
    }
    return out;
}

// ---- case files -------------------------------------------------------------

struct Expectation {
    std::optional<GammaClass> cls;
    std::optional<bool> residual_zero;
    std::optional<unsigned> rho;
    std::optional<unsigned> lambda;
    std::vector<std::pair<std::string, ClauseStatus>> clauses;

    const ClauseStatus* clause(const std::string& name) const {
        for (const auto& [n, s] : clauses)
            if (n == name) return &s;
        return nullptr;
    }
};

// One bundled test case: the function, the equation and what to expect.
struct CaseFile {
    ParamEnv params;
    std::vector<std::pair<std::string, std::pair<bool, std::optional<std::string>>>>
        param_decls;  // (name, (nonzero, test value text)) in declaration order
    ExPoly f;
    Equation eq;
    Expectation expect;
};

namespace casedetail {

inline const std::vector<std::string>& clause_names() {
    static const std::vector<std::string> names = {
        "i",   "ii_fwd", "ii_conv", "iii_fwd", "iii_conv", "iv",
        "v_a", "v_b",    "v_b_I",   "v_b_II",  "v_b_III"};
    return names;
}

struct RawLine {
    int line;
    std::string text;
};

}  // namespace casedetail

inline CaseFile parse_case_file(const std::string& text) {
    using casedetail::RawLine;

    std::map<std::string, std::vector<RawLine>> sections;
    static const std::vector<std::string> known = {"params", "function", "operator",
                                                   "equation", "expect"};
    std::string current;
    int line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        std::string line = text.substr(
            start, nl == std::string::npos ? std::string::npos : nl - start);
        ++line_no;
        start = nl == std::string::npos ? text.size() + 1 : nl + 1;

        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        std::string body = line.substr(b, e - b + 1);

        if (body.front() == '[') {
            if (body.back() != ']')
                throw ParseError(line_no, static_cast<int>(b) + 1,
                                 "unterminated section header");
            std::string name = body.substr(1, body.size() - 2);
            bool ok = false;
            for (const auto& k : known) ok = ok || k == name;
            if (!ok)
                throw ParseError(line_no, static_cast<int>(b) + 1,
                                 "unknown section '" + name + "'");
            current = name;
            sections[name];  // note presence
            continue;
        }
        if (current.empty())
            throw ParseError(line_no, static_cast<int>(b) + 1,
                             "content before the first section header");
        sections[current].push_back({line_no, line});
    }

    ParamEnv env;
    std::vector<std::pair<std::string, std::pair<bool, std::optional<std::string>>>>
        decls;
    if (auto it = sections.find("params"); it != sections.end()) {
        for (const auto& raw : it->second) {
            auto toks = lex::tokenize(raw.text, raw.line, 0);
            size_t k = 0;
            if (toks[k].kind != lex::Tok::Ident)
                throw ParseError(raw.line, toks[k].col, "expected parameter name");
            std::string name = toks[k++].text;
            bool nonzero = false;
            if (toks[k].kind == lex::Tok::Ident && toks[k].text == "nonzero") {
                nonzero = true;
                ++k;
            }
            env.declare(name, nonzero);
            std::optional<std::string> value_text;
            if (toks[k].kind == lex::Tok::Equals) {
                ++k;
                std::vector<lex::Token> rest(toks.begin() + static_cast<long>(k),
                                             toks.end());
                ExprParser vp(rest, nullptr, true);
                ConstExpr v = vp.parse_constant_only();
                env.assign(name, v.rep());
                value_text = v.str();
            } else if (toks[k].kind != lex::Tok::End) {
                throw ParseError(raw.line, toks[k].col,
                                 "expected 'nonzero', '=' or end of line");
            }
            decls.push_back({name, {nonzero, value_text}});
        }
    }

    auto single_assignment = [&](const std::string& section, const std::string& key)
        -> std::pair<std::vector<lex::Token>, int> {
        auto it = sections.find(section);
        if (it == sections.end() || it->second.empty())
            throw ParseError(line_no, 1, "missing [" + section + "] section");
        std::optional<std::pair<std::vector<lex::Token>, int>> found;
        for (const auto& raw : it->second) {
            auto toks = lex::tokenize(raw.text, raw.line, 0);
            if (toks.size() < 2 || toks[0].kind != lex::Tok::Ident)
                throw ParseError(raw.line, toks[0].col, "expected '" + key + " = ...'");
            if (toks[0].text != key)
                throw ParseError(raw.line, toks[0].col,
                                 "unknown key '" + toks[0].text + "' in [" + section + "]");
            if (toks[1].kind != lex::Tok::Equals)
                throw ParseError(raw.line, toks[1].col, "expected '='");
            if (found)
                throw ParseError(raw.line, toks[0].col, "duplicate '" + key + "'");
            found = {std::vector<lex::Token>(toks.begin() + 2, toks.end()), raw.line};
        }
        if (!found)
            throw ParseError(line_no, 1, "missing '" + key + "' in [" + section + "]");
        return *found;
    };

    // function
    auto [ftoks, fline] = single_assignment("function", "f");
    ExPoly f = [&] {
        ExprParser p(ftoks, &env, true);
        return valdetail::to_expoly(p.parse_expression());
    }();

    // operator
    auto [ltoks, lline] = single_assignment("operator", "L");
    DelayDiffOp L = [&] {
        ExprParser p(ltoks, &env, true);
        return p.parse_operator_expr();
    }();

    // equation
    auto eqit = sections.find("equation");
    if (eqit == sections.end())
        throw ParseError(line_no, 1, "missing [equation] section");
    std::map<std::string, std::pair<std::vector<lex::Token>, int>> eqkeys;
    for (const auto& raw : eqit->second) {
        auto toks = lex::tokenize(raw.text, raw.line, 0);
        if (toks.size() < 2 || toks[0].kind != lex::Tok::Ident ||
            toks[1].kind != lex::Tok::Equals)
            throw ParseError(raw.line, toks[0].col, "expected 'key = value'");
        if (eqkeys.count(toks[0].text))
            throw ParseError(raw.line, toks[0].col, "duplicate key '" + toks[0].text + "'");
        eqkeys[toks[0].text] = {std::vector<lex::Token>(toks.begin() + 2, toks.end()),
                                raw.line};
    }
    auto eq_value = [&](const std::string& key) -> std::optional<Value> {
        auto it = eqkeys.find(key);
        if (it == eqkeys.end()) return std::nullopt;
        ExprParser p(it->second.first, &env, true);
        Value v = p.parse_expression();
        eqkeys.erase(it);
        return v;
    };

    auto nval = eq_value("n");
    if (!nval) throw ParseError(line_no, 1, "missing 'n' in [equation]");
    std::optional<Rat> nrat;
    if (std::holds_alternative<ConstExpr>(*nval))
        nrat = std::get<ConstExpr>(*nval).as_rational();
    if (!nrat || nrat->get_den() != 1 || *nrat < 2 || !nrat->get_num().fits_slong_p())
        throw ParseError(line_no, 1, "n must be an integer >= 2");
    unsigned n = static_cast<unsigned>(nrat->get_num().get_si());

    std::vector<ConstExpr> a(n - 1, ConstExpr());
    for (unsigned i = 1; i < n; ++i) {
        if (auto v = eq_value("a" + std::to_string(i))) {
            if (!std::holds_alternative<ConstExpr>(*v))
                throw ParseError(line_no, 1, "a" + std::to_string(i) + " must be constant");
            a[i - 1] = std::get<ConstExpr>(*v);
        }
    }
    auto poly_of = [&](const std::string& key, bool required) -> Poly {
        auto v = eq_value(key);
        if (!v) {
            if (required) throw ParseError(line_no, 1, "missing '" + key + "' in [equation]");
            return {};
        }
        return valdetail::to_poly(*v);
    };
    Poly q = poly_of("q", true);
    Poly Q = poly_of("Q", true);
    Poly P = poly_of("P", false);
    if (!eqkeys.empty()) {
        const auto& [k, v] = *eqkeys.begin();
        throw ParseError(v.second, 1, "unknown key '" + k + "' in [equation]");
    }

    Equation equation = [&] {
        try {
            return Equation(n, std::move(a), std::move(q), std::move(Q), std::move(P),
                            std::move(L));
        } catch (const DomainError& e) {
            throw ParseError(line_no, 1, e.what());
        }
    }();

    // expectations
    Expectation expect;
    if (auto it = sections.find("expect"); it != sections.end()) {
        for (const auto& raw : it->second) {
            auto toks = lex::tokenize(raw.text, raw.line, 0);
            if (toks.size() < 3 || toks[0].kind != lex::Tok::Ident ||
                toks[1].kind != lex::Tok::Equals)
                throw ParseError(raw.line, toks[0].col, "expected 'key = value'");
            const std::string& key = toks[0].text;
            const lex::Token& val = toks[2];
            auto want_end = [&](size_t after) {
                if (toks[after].kind != lex::Tok::End)
                    throw ParseError(raw.line, toks[after].col, "unexpected trailing input");
            };
            if (key == "class") {
                auto g = gamma_from_string(val.text);
                if (!g) throw ParseError(raw.line, val.col, "unknown class tag");
                expect.cls = *g;
                want_end(3);
            } else if (key == "residual") {
                if (val.text == "ZERO")
                    expect.residual_zero = true;
                else if (val.text == "NONZERO")
                    expect.residual_zero = false;
                else
                    throw ParseError(raw.line, val.col, "expected ZERO or NONZERO");
                want_end(3);
            } else if (key == "rho" || key == "lambda") {
                if (val.kind != lex::Tok::Integer)
                    throw ParseError(raw.line, val.col, "expected an integer");
                unsigned x = static_cast<unsigned>(std::stoul(val.text));
                (key == "rho" ? expect.rho : expect.lambda) = x;
                want_end(3);
            } else if (key.rfind("clause_", 0) == 0) {
                std::string cname = key.substr(7);
                bool ok = false;
                for (const auto& nm : casedetail::clause_names()) ok = ok || nm == cname;
                if (!ok)
                    throw ParseError(raw.line, toks[0].col, "unknown clause '" + cname + "'");
                auto st = clause_status_from_string(val.text);
                if (!st) throw ParseError(raw.line, val.col, "unknown clause status");
                expect.clauses.push_back({cname, *st});
                want_end(3);
            } else {
                throw ParseError(raw.line, toks[0].col,
                                 "unknown key '" + key + "' in [expect]");
            }
        }
    }

    return CaseFile{std::move(env), std::move(decls), std::move(f),
                    std::move(equation), std::move(expect)};
}

inline std::string print_case_file(const CaseFile& cf) {
    std::string out;
    if (!cf.param_decls.empty()) {
        out += "[params]\n";
        for (const auto& [name, info] : cf.param_decls) {
            out += name;
            if (info.first) out += " nonzero";
            if (info.second) out += " = " + *info.second;
            out += "\n";
        }
        out += "\n";
    }
    out += "[function]\nf = " + cf.f.str() + "\n\n";
    out += "[operator]\nL = " + cf.eq.L.str() + "\n\n";
    out += "[equation]\n";
    out += "n = " + std::to_string(cf.eq.n) + "\n";
    for (unsigned i = 1; i < cf.eq.n; ++i)
        out += "a" + std::to_string(i) + " = " + cf.eq.a[i - 1].str() + "\n";
    out += "q = " + cf.eq.q.str() + "\n";
    out += "Q = " + cf.eq.Q.str() + "\n";
    out += "P = " + cf.eq.P.str() + "\n";
    bool any = cf.expect.cls || cf.expect.residual_zero || cf.expect.rho ||
               cf.expect.lambda || !cf.expect.clauses.empty();
    if (any) {
        out += "\n[expect]\n";
        if (cf.expect.residual_zero)
            out += std::string("residual = ") +
                   (*cf.expect.residual_zero ? "ZERO" : "NONZERO") + "\n";
        if (cf.expect.cls)
            out += std::string("class = ") + to_string(*cf.expect.cls) + "\n";
        if (cf.expect.rho) out += "rho = " + std::to_string(*cf.expect.rho) + "\n";
        if (cf.expect.lambda)
            out += "lambda = " + std::to_string(*cf.expect.lambda) + "\n";
        for (const auto& [nm, st] : cf.expect.clauses)
            out += "clause_" + nm + " = " + to_string(st) + "\n";
    }
    return out;
}

}  // namespace expoly
