#pragma once

#include "krich/field.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace krich {

using Order = std::int64_t;

/// Precision value meaning "every coefficient is known" (a Laurent polynomial).
inline constexpr Order kExact = std::numeric_limits<Order>::max() / 4;

namespace detail {

inline Order add_orders(Order a, Order b) {
    if (a >= kExact || b >= kExact)
        return kExact;
    return a + b;
}

} // namespace detail

/// Truncated element of k((z)).
///
/// Coefficients of z^n for n < known_below are determined; nothing is known at
/// or above known_below (kExact marks a finite Laurent polynomial). min_order
/// is a lower bound on the support; when exact_valuation is set it is the true
/// valuation and the coefficient there is nonzero.
class LaurentSeries1 {
  public:
    explicit LaurentSeries1(FieldSpec field = {}) : field_(field) {}

    static LaurentSeries1 zero(FieldSpec field, Order known_below = kExact) {
        LaurentSeries1 s(field);
        s.known_below_ = known_below;
        s.min_order_ = known_below;
        return s;
    }

    static LaurentSeries1 monomial(const Scalar& coeff, Order order, Order known_below = kExact) {
        LaurentSeries1 s(coeff.field());
        s.known_below_ = known_below;
        if (order < known_below && !coeff.is_zero())
            s.coeffs_.emplace(order, coeff);
        s.reset_min_order();
        return s;
    }

    static LaurentSeries1 constant(FieldSpec field, long value) {
        return monomial(Scalar(field, value), 0);
    }

    /// Builds from explicit coefficients; zero entries and orders at or above
    /// known_below are dropped. min_order becomes the first nonzero order.
    static LaurentSeries1 from_terms(FieldSpec field, const std::map<Order, Scalar>& terms,
                                     Order known_below = kExact) {
        LaurentSeries1 s(field);
        s.known_below_ = known_below;
        for (const auto& [n, c] : terms) {
            if (c.field() != field)
                throw Error(ErrorCode::field_mismatch, "coefficient outside " + field.name());
            if (n < known_below && !c.is_zero())
                s.coeffs_.emplace(n, c);
        }
        s.reset_min_order();
        return s;
    }

    const FieldSpec& field() const { return field_; }
    Order min_order() const { return min_order_; }
    Order known_below() const { return known_below_; }
    bool is_exact() const { return known_below_ >= kExact; }
    bool has_exact_valuation() const { return exact_valuation_; }
    const std::map<Order, Scalar>& terms() const { return coeffs_; }

    /// True when every determined coefficient is zero.
    bool is_known_zero() const { return coeffs_.empty(); }

    /// First nonzero determined order, if any.
    std::optional<Order> valuation() const {
        if (coeffs_.empty())
            return std::nullopt;
        return coeffs_.begin()->first;
    }

    Scalar coefficient(Order n) const {
        if (n >= known_below_)
            throw Error(ErrorCode::precision_exhausted,
                        "coefficient of z^" + std::to_string(n) + " is not determined");
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? Scalar::zero(field_) : it->second;
    }

    /// Forgets everything at or above order h.
    LaurentSeries1 truncated(Order h) const {
        LaurentSeries1 s = *this;
        if (h >= s.known_below_)
            return s;
        s.known_below_ = h;
        s.coeffs_.erase(s.coeffs_.lower_bound(h), s.coeffs_.end());
        s.min_order_ = std::min(s.min_order_, h);
        if (s.coeffs_.empty() || s.coeffs_.begin()->first != s.min_order_)
            s.exact_valuation_ = false;
        return s;
    }

    /// The Laurent polynomial made of the determined terms below order h.
    LaurentSeries1 polynomial_below(Order h) const {
        std::map<Order, Scalar> kept(coeffs_.begin(), coeffs_.lower_bound(h));
        return from_terms(field_, kept, kExact);
    }

    /// Re-derives min_order from the determined coefficients: if any nonzero
    /// coefficient is known the valuation is known exactly.
    LaurentSeries1 normalized() const {
        LaurentSeries1 s = *this;
        s.reset_min_order();
        return s;
    }

    LaurentSeries1 operator-() const {
        LaurentSeries1 s = *this;
        for (auto& [n, c] : s.coeffs_)
            c = -c;
        return s;
    }

    LaurentSeries1 scaled(const Scalar& k) const {
        if (k.is_zero())
            return zero(field_, known_below_);
        LaurentSeries1 s = *this;
        for (auto& [n, c] : s.coeffs_)
            c *= k;
        return s;
    }

    friend LaurentSeries1 operator+(const LaurentSeries1& a, const LaurentSeries1& b) {
        a.check(b);
        LaurentSeries1 s(a.field_);
        s.known_below_ = std::min(a.known_below_, b.known_below_);
        s.coeffs_ = a.coeffs_;
        s.coeffs_.erase(s.coeffs_.lower_bound(s.known_below_), s.coeffs_.end());
        for (const auto& [n, c] : b.coeffs_) {
            if (n >= s.known_below_)
                break;
            auto [it, inserted] = s.coeffs_.try_emplace(n, c);
            if (!inserted) {
                it->second += c;
                if (it->second.is_zero())
                    s.coeffs_.erase(it);
            }
        }
        s.min_order_ = std::min({a.min_order_, b.min_order_, s.known_below_});
        // The flag survives only when the leading term is visibly uncancelled.
        s.exact_valuation_ = false;
        if (!s.coeffs_.empty() && s.coeffs_.begin()->first == s.min_order_) {
            if (a.min_order_ != b.min_order_)
                s.exact_valuation_ = a.min_order_ < b.min_order_ ? a.exact_valuation_
                                                                 : b.exact_valuation_;
            else
                s.exact_valuation_ = a.exact_valuation_ && b.exact_valuation_;
        }
        return s;
    }

    friend LaurentSeries1 operator-(const LaurentSeries1& a, const LaurentSeries1& b) {
        return a + (-b);
    }

    /// Cauchy product; known_below shrinks to
    /// min(a.known_below + b.min_order, b.known_below + a.min_order).
    friend LaurentSeries1 operator*(const LaurentSeries1& a, const LaurentSeries1& b) {
        a.check(b);
        LaurentSeries1 s(a.field_);
        s.known_below_ = std::min(detail::add_orders(a.known_below_, b.min_order_),
                                  detail::add_orders(b.known_below_, a.min_order_));
        s.min_order_ = std::min(detail::add_orders(a.min_order_, b.min_order_), s.known_below_);
        for (const auto& [n, c] : a.coeffs_) {
            for (const auto& [m, d] : b.coeffs_) {
                if (n + m >= s.known_below_)
                    break;
                auto [it, inserted] = s.coeffs_.try_emplace(n + m, c * d);
                if (!inserted)
                    it->second += c * d;
            }
        }
        std::erase_if(s.coeffs_, [](const auto& kv) { return kv.second.is_zero(); });
        s.exact_valuation_ = a.exact_valuation_ && b.exact_valuation_ &&
                             !s.coeffs_.empty() && s.coeffs_.begin()->first == s.min_order_;
        return s;
    }

    LaurentSeries1& operator+=(const LaurentSeries1& b) { return *this = *this + b; }
    LaurentSeries1& operator-=(const LaurentSeries1& b) { return *this = *this - b; }
    LaurentSeries1& operator*=(const LaurentSeries1& b) { return *this = *this * b; }

    /// Same determined coefficients and the same precision.
    friend bool operator==(const LaurentSeries1& a, const LaurentSeries1& b) {
        return a.field_ == b.field_ && a.known_below_ == b.known_below_ && a.coeffs_ == b.coeffs_;
    }

    /// "z^-2 + 3*z^-1 + 1/2 + O(z^4)"; exact series carry no O-term.
    std::string to_string() const {
        std::string out;
        for (const auto& [n, c] : coeffs_) {
            const bool negative = field_.is_rationals() && sgn(c.rational()) < 0;
            const Scalar mag = negative ? -c : c;
            if (out.empty())
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            const std::string cs = mag.to_string();
            if (n == 0)
                out += cs;
            else {
                if (!mag.is_one())
                    out += cs + "*";
                out += n == 1 ? std::string("z") : "z^" + std::to_string(n);
            }
        }
        if (!is_exact()) {
            const std::string big_o = "O(z^" + std::to_string(known_below_) + ")";
            out += out.empty() ? big_o : " + " + big_o;
        }
        return out.empty() ? std::string("0") : out;
    }

  private:
    void reset_min_order() {
        if (coeffs_.empty()) {
            min_order_ = known_below_;
            exact_valuation_ = false;
        } else {
            min_order_ = coeffs_.begin()->first;
            exact_valuation_ = true;
        }
    }

    void check(const LaurentSeries1& b) const {
        if (field_ != b.field_)
            throw Error(ErrorCode::field_mismatch, field_.name() + " vs " + b.field_.name());
    }

    FieldSpec field_;
    std::map<Order, Scalar> coeffs_;
    Order min_order_ = kExact;
    Order known_below_ = kExact;
    bool exact_valuation_ = false;
};

/// Inverse of a unit of k((z)). For an exact non-monomial input the result is
/// an infinite series, so `cap` must bound its known_below.
inline LaurentSeries1 invert(const LaurentSeries1& a, std::optional<Order> cap = std::nullopt) {
    if (!a.has_exact_valuation())
        throw Error(ErrorCode::non_unit, "valuation of " + a.to_string() + " is not known");
    const Order m = a.min_order();
    const Scalar lead = a.coefficient(m);
    const Scalar lead_inv = lead.inverse();
    if (a.is_exact() && a.terms().size() == 1)
        return LaurentSeries1::monomial(lead_inv, -m);

    Order known_below = a.is_exact() ? kExact : a.known_below() - 2 * m;
    if (cap)
        known_below = std::min(known_below, *cap);
    if (known_below >= kExact)
        throw Error(ErrorCode::precision_exhausted,
                    "inverse of a non-monomial polynomial needs a precision cap");

    // b_k = -lead^{-1} * sum_{i=1..k} a_{m+i} b_{k-i}, result order -m + k.
    const Order count = known_below + m;
    std::map<Order, Scalar> out;
    std::vector<Scalar> b;
    b.reserve(static_cast<std::size_t>(std::max<Order>(count, 0)));
    for (Order k = 0; k < count; ++k) {
        Scalar acc = k == 0 ? Scalar::one(a.field()) : Scalar::zero(a.field());
        for (const auto& [n, c] : a.terms()) {
            const Order i = n - m;
            if (i == 0)
                continue;
            if (i > k)
                break;
            acc -= c * b[static_cast<std::size_t>(k - i)];
        }
        b.push_back(acc * lead_inv);
        if (!b.back().is_zero())
            out.emplace(-m + k, b.back());
    }
    return LaurentSeries1::from_terms(a.field(), out, known_below);
}

namespace detail {

class SeriesLiteralParser {
  public:
    SeriesLiteralParser(FieldSpec field, std::string_view text) : field_(field), text_(text) {}

    LaurentSeries1 parse() {
        std::map<Order, Scalar> terms;
        Order known_below = kExact;
        bool first = true;
        skip_ws();
        if (at_end())
            fail("empty series literal");
        while (!at_end()) {
            bool negative = false;
            if (peek() == '+' || peek() == '-') {
                negative = peek() == '-';
                ++pos_;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            if (peek() == 'O') {
                if (negative)
                    fail("negative O-term");
                ++pos_;
                expect('(');
                expect('z');
                known_below = parse_exponent();
                expect(')');
                skip_ws();
                if (!at_end())
                    fail("O-term must be last");
                break;
            }
            Scalar coeff = Scalar::one(field_);
            Order order = 0;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                coeff = parse_coefficient();
                skip_ws();
                if (peek() == '*') {
                    ++pos_;
                    skip_ws();
                    expect('z');
                    order = parse_exponent();
                }
            } else if (peek() == 'z') {
                ++pos_;
                order = parse_exponent();
            } else {
                fail("expected a term");
            }
            if (negative)
                coeff = -coeff;
            if (!terms.empty() && order <= terms.rbegin()->first)
                fail("orders must be strictly ascending");
            terms.emplace(order, coeff);
            skip_ws();
        }
        for (const auto& [n, c] : terms)
            if (n >= known_below)
                fail("term z^" + std::to_string(n) + " at or above the O-term");
        return LaurentSeries1::from_terms(field_, terms, known_below);
    }

  private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
        skip_ws();
    }

    // After 'z': optional "^k" with a signed integer k; bare z is order 1.
    Order parse_exponent() {
        skip_ws();
        if (peek() != '^')
            return 1;
        ++pos_;
        skip_ws();
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+')
            ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        const std::string digits(text_.substr(start, pos_ - start));
        if (digits.empty() || digits == "-" || digits == "+")
            fail("bad exponent");
        return std::stoll(digits);
    }

    Scalar parse_coefficient() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (peek() == '/') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
        }
        return parse_scalar(field_, std::string(text_.substr(start, pos_ - start)));
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::parse, what + " at offset " + std::to_string(pos_) + " in '" +
                                          std::string(text_) + "'");
    }

    FieldSpec field_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Inverse of LaurentSeries1::to_string. A literal without an O-term is exact.
inline LaurentSeries1 parse_series(FieldSpec field, std::string_view text) {
    return detail::SeriesLiteralParser(field, text).parse();
}

} // namespace krich
