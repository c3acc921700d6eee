#pragma once

#include "krich/series.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace krich {

/// Bivariate polynomial in x, y with exponents >= 0.
class Poly2 {
  public:
    using Exponent = std::pair<int, int>;

    explicit Poly2(FieldSpec field = {}) : field_(field) {}

    static Poly2 constant(const Scalar& c) {
        Poly2 p(c.field());
        if (!c.is_zero())
            p.terms_.emplace(Exponent{0, 0}, c);
        return p;
    }

    static Poly2 variable(FieldSpec field, char name) {
        Poly2 p(field);
        p.terms_.emplace(name == 'x' ? Exponent{1, 0} : Exponent{0, 1}, Scalar::one(field));
        return p;
    }

    const FieldSpec& field() const { return field_; }
    const std::map<Exponent, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::optional<Scalar> as_constant() const {
        if (terms_.empty())
            return Scalar::zero(field_);
        if (terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0})
            return terms_.begin()->second;
        return std::nullopt;
    }

    int degree_y() const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, e.second);
        return d;
    }

    Poly2 derivative_y() const {
        Poly2 p(field_);
        for (const auto& [e, c] : terms_)
            if (e.second > 0)
                p.add_term({e.first, e.second - 1}, c * Scalar(field_, e.second));
        return p;
    }

    friend Poly2 operator+(const Poly2& a, const Poly2& b) {
        Poly2 p = a;
        for (const auto& [e, c] : b.terms_)
            p.add_term(e, c);
        return p;
    }

    friend Poly2 operator-(const Poly2& a, const Poly2& b) {
        Poly2 p = a;
        for (const auto& [e, c] : b.terms_)
            p.add_term(e, -c);
        return p;
    }

    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 p(a.field_);
        for (const auto& [e, c] : a.terms_)
            for (const auto& [f, d] : b.terms_)
                p.add_term({e.first + f.first, e.second + f.second}, c * d);
        return p;
    }

    Poly2 pow(int k) const {
        Poly2 result = constant(Scalar::one(field_));
        for (int i = 0; i < k; ++i)
            result = result * *this;
        return result;
    }

    friend bool operator==(const Poly2&, const Poly2&) = default;

    /// f(x, y) with tracked series arithmetic.
    LaurentSeries1 evaluate(const LaurentSeries1& x, const LaurentSeries1& y) const {
        std::vector<LaurentSeries1> xp{LaurentSeries1::constant(field_, 1)};
        std::vector<LaurentSeries1> yp{LaurentSeries1::constant(field_, 1)};
        LaurentSeries1 sum = LaurentSeries1::zero(field_);
        for (const auto& [e, c] : terms_) {
            while (static_cast<int>(xp.size()) <= e.first)
                xp.push_back(xp.back() * x);
            while (static_cast<int>(yp.size()) <= e.second)
                yp.push_back(yp.back() * y);
            sum += (xp[e.first] * yp[e.second]).scaled(c);
        }
        return sum;
    }

    std::string to_string() const {
        if (terms_.empty())
            return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            const bool negative = field_.is_rationals() && sgn(c.rational()) < 0;
            const Scalar mag = negative ? -c : c;
            out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
            std::string mono;
            auto var = [&mono](char v, int k) {
                if (k == 0)
                    return;
                if (!mono.empty())
                    mono += "*";
                mono += v;
                if (k > 1)
                    mono += "^" + std::to_string(k);
            };
            var('x', e.first);
            var('y', e.second);
            if (mono.empty())
                out += mag.to_string();
            else
                out += (mag.is_one() ? "" : mag.to_string() + "*") + mono;
        }
        return out;
    }

  private:
    void add_term(Exponent e, const Scalar& c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    FieldSpec field_;
    std::map<Exponent, Scalar> terms_;
};

/// Parsed arithmetic expression in x and y: numbers, + - * /, ^ with an
/// integer (possibly negative) exponent, and parentheses.
class Expression {
  public:
    enum class Kind { number, variable, add, sub, mul, div, neg, pow };

    static Expression parse(std::string_view text);

    /// As a polynomial; fails on division by a non-constant or negative powers.
    Poly2 to_polynomial(FieldSpec field) const { return to_poly(*root_, field); }

    /// Value at (x(z), y(z)). Inverses of exact non-monomial series are cut at
    /// `cap`.
    LaurentSeries1 evaluate(const LaurentSeries1& x, const LaurentSeries1& y, Order cap) const {
        return eval(*root_, x, y, cap);
    }

    const std::string& text() const { return text_; }

  private:
    struct Node {
        Kind kind;
        mpq_class number;
        char variable = 0;
        long exponent = 0;
        std::unique_ptr<Node> lhs, rhs;
    };

    class Parser;

    static Poly2 to_poly(const Node& n, FieldSpec field) {
        switch (n.kind) {
        case Kind::number: return Poly2::constant(Scalar::from_rational(field, n.number));
        case Kind::variable: return Poly2::variable(field, n.variable);
        case Kind::add: return to_poly(*n.lhs, field) + to_poly(*n.rhs, field);
        case Kind::sub: return to_poly(*n.lhs, field) - to_poly(*n.rhs, field);
        case Kind::mul: return to_poly(*n.lhs, field) * to_poly(*n.rhs, field);
        case Kind::neg: return Poly2(field) - to_poly(*n.lhs, field);
        case Kind::div: {
            const auto d = to_poly(*n.rhs, field).as_constant();
            if (!d)
                throw Error(ErrorCode::parse, "division by a non-constant in a polynomial");
            if (d->is_zero())
                throw Error(ErrorCode::division_by_zero, "division by zero in a polynomial");
            return to_poly(*n.lhs, field) * Poly2::constant(d->inverse());
        }
        case Kind::pow: {
            if (n.exponent < 0)
                throw Error(ErrorCode::parse, "negative exponent in a polynomial");
            return to_poly(*n.lhs, field).pow(static_cast<int>(n.exponent));
        }
        }
        throw Error(ErrorCode::parse, "malformed expression");
    }

    static LaurentSeries1 inverse_of(const LaurentSeries1& s, Order cap) {
        const LaurentSeries1 unit = s.normalized();
        if (!unit.has_exact_valuation())
            throw Error(ErrorCode::non_unit, "division by a series with no known valuation");
        return invert(unit, cap);
    }

    static LaurentSeries1 eval(const Node& n, const LaurentSeries1& x, const LaurentSeries1& y,
                               Order cap) {
        const FieldSpec field = x.field();
        switch (n.kind) {
        case Kind::number:
            return LaurentSeries1::monomial(Scalar::from_rational(field, n.number), 0);
        case Kind::variable: return n.variable == 'x' ? x : y;
        case Kind::add: return eval(*n.lhs, x, y, cap) + eval(*n.rhs, x, y, cap);
        case Kind::sub: return eval(*n.lhs, x, y, cap) - eval(*n.rhs, x, y, cap);
        case Kind::mul: return eval(*n.lhs, x, y, cap) * eval(*n.rhs, x, y, cap);
        case Kind::neg: return -eval(*n.lhs, x, y, cap);
        case Kind::div:
            return eval(*n.lhs, x, y, cap) * inverse_of(eval(*n.rhs, x, y, cap), cap);
        case Kind::pow: {
            LaurentSeries1 base = eval(*n.lhs, x, y, cap);
            if (n.exponent < 0)
                base = inverse_of(base, cap);
            LaurentSeries1 result = LaurentSeries1::constant(field, 1);
            for (long i = 0; i < std::abs(n.exponent); ++i)
                result *= base;
            return result;
        }
        }
        throw Error(ErrorCode::parse, "malformed expression");
    }

    std::string text_;
    std::shared_ptr<const Node> root_;
};

class Expression::Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::unique_ptr<Node> parse() {
        auto n = sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return n;
    }

  private:
    static std::unique_ptr<Node> binary(Kind k, std::unique_ptr<Node> l, std::unique_ptr<Node> r) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    std::unique_ptr<Node> sum() {
        auto lhs = product();
        for (;;) {
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                const Kind k = text_[pos_++] == '+' ? Kind::add : Kind::sub;
                lhs = binary(k, std::move(lhs), product());
            } else {
                return lhs;
            }
        }
    }

    std::unique_ptr<Node> product() {
        auto lhs = unary();
        for (;;) {
            skip_ws();
            if (peek() == '*' || peek() == '/') {
                const Kind k = text_[pos_++] == '*' ? Kind::mul : Kind::div;
                lhs = binary(k, std::move(lhs), unary());
            } else {
                return lhs;
            }
        }
    }

    std::unique_ptr<Node> unary() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            auto n = std::make_unique<Node>();
            n->kind = Kind::neg;
            n->lhs = unary();
            return n;
        }
        if (peek() == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    std::unique_ptr<Node> power() {
        auto base = atom();
        skip_ws();
        if (peek() != '^')
            return base;
        ++pos_;
        skip_ws();
        bool negative = false;
        if (peek() == '-' || peek() == '+') {
            negative = peek() == '-';
            ++pos_;
        }
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (start == pos_)
            fail("exponent must be an integer");
        auto n = std::make_unique<Node>();
        n->kind = Kind::pow;
        n->exponent = std::stol(std::string(text_.substr(start, pos_ - start)));
        if (negative)
            n->exponent = -n->exponent;
        n->lhs = std::move(base);
        return n;
    }

    std::unique_ptr<Node> atom() {
        skip_ws();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            auto n = sum();
            skip_ws();
            if (peek() != ')')
                fail("missing ')'");
            ++pos_;
            return n;
        }
        if (c == 'x' || c == 'y') {
            ++pos_;
            auto n = std::make_unique<Node>();
            n->kind = Kind::variable;
            n->variable = c;
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
            auto n = std::make_unique<Node>();
            n->kind = Kind::number;
            n->number = mpz_class(std::string(text_.substr(start, pos_ - start)));
            return n;
        }
        fail(c == '\0' ? "unexpected end of input" : std::string("unexpected '") + c + "'");
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::parse, what + " at offset " + std::to_string(pos_) + " in '" +
                                          std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline Expression Expression::parse(std::string_view text) {
    Expression e;
    e.text_ = std::string(text);
    e.root_ = Parser(text).parse();
    return e;
}

inline Poly2 parse_polynomial(FieldSpec field, std::string_view text) {
    return Expression::parse(text).to_polynomial(field);
}

} // namespace krich
