#pragma once

#include "krich/error.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace krich {

/// The ground field: either the rationals or a prime field F_p.
struct FieldSpec {
    enum class Kind { rationals, prime_field };

    Kind kind = Kind::rationals;
    std::uint32_t characteristic = 0;

    static FieldSpec rationals() { return {}; }

    static FieldSpec prime(std::uint64_t p) {
        if (p < 2 || p > 0x7fffffffULL)
            throw Error(ErrorCode::invalid_field,
                        "prime characteristic must lie in [2, 2^31): " + std::to_string(p));
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                throw Error(ErrorCode::invalid_field, std::to_string(p) + " is not prime");
        return {Kind::prime_field, static_cast<std::uint32_t>(p)};
    }

    bool is_rationals() const { return kind == Kind::rationals; }
    bool is_prime_field() const { return kind == Kind::prime_field; }

    std::string name() const {
        return is_rationals() ? std::string("Q") : "F_" + std::to_string(characteristic);
    }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// An exact element of a FieldSpec. Rationals are kept in lowest terms with a
/// positive denominator (mpq canonical form); prime-field values are residues
/// in [0, p).
class Scalar {
  public:
    Scalar() = default;

    Scalar(FieldSpec field, long value) : field_(field) {
        if (field_.is_rationals()) {
            if (value != 0)
                q_ = mpq_class(value);
        } else {
            const long p = static_cast<long>(field_.characteristic);
            long r = value % p;
            if (r < 0)
                r += p;
            r_ = static_cast<std::uint64_t>(r);
        }
    }

    static Scalar zero(FieldSpec field) { return Scalar(field, 0); }
    static Scalar one(FieldSpec field) { return Scalar(field, 1); }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    static Scalar from_rational(FieldSpec field, const mpq_class& value) {
        Scalar s;
        s.field_ = field;
        if (field.is_rationals()) {
            mpq_class v = value;
            v.canonicalize();
            s.set_q(std::move(v));
            return s;
        }
        const unsigned long p = field.characteristic;
        mpz_class num = value.get_num() % p;
        mpz_class den = value.get_den() % p;
        if (num < 0)
            num += p;
        if (den == 0)
            throw Error(ErrorCode::division_by_zero,
                        "denominator " + value.get_den().get_str() + " vanishes in " + field.name());
        s.r_ = num.get_ui();
        s.r_ = (s.r_ * inverse_mod(den.get_ui(), p)) % p;
        return s;
    }

    const FieldSpec& field() const { return field_; }
    bool is_zero() const { return field_.is_rationals() ? !q_ : r_ == 0; }
    bool is_one() const { return field_.is_rationals() ? q_ && *q_ == 1 : r_ == 1; }

    const mpq_class& rational() const {
        static const mpq_class zero;
        return q_ ? *q_ : zero;
    }
    std::uint64_t residue() const { return r_; }

    Scalar operator-() const {
        Scalar s = *this;
        if (field_.is_rationals()) {
            if (s.q_)
                mpq_neg(s.q_->get_mpq_t(), s.q_->get_mpq_t());
        } else if (r_ != 0)
            s.r_ = field_.characteristic - r_;
        return s;
    }

    Scalar& operator+=(const Scalar& rhs) {
        check(rhs);
        if (field_.is_rationals()) {
            if (!rhs.q_)
                return *this;
            if (!q_)
                q_ = rhs.q_;
            else
                set_q(*q_ + *rhs.q_);
        } else {
            r_ += rhs.r_;
            if (r_ >= field_.characteristic)
                r_ -= field_.characteristic;
        }
        return *this;
    }

    Scalar& operator-=(const Scalar& rhs) {
        check(rhs);
        if (field_.is_rationals()) {
            if (!rhs.q_)
                return *this;
            if (!q_)
                q_ = mpq_class(-*rhs.q_);
            else
                set_q(*q_ - *rhs.q_);
        } else
            r_ = (r_ + field_.characteristic - rhs.r_) % field_.characteristic;
        return *this;
    }

    Scalar& operator*=(const Scalar& rhs) {
        check(rhs);
        if (field_.is_rationals()) {
            if (q_ && !rhs.q_)
                q_.reset();
            else if (q_)
                *q_ *= *rhs.q_;
        } else
            r_ = (r_ * rhs.r_) % field_.characteristic;
        return *this;
    }

    Scalar& operator/=(const Scalar& rhs) { return *this *= rhs.inverse(); }

    Scalar inverse() const {
        if (is_zero())
            throw Error(ErrorCode::division_by_zero, "inverse of zero in " + field_.name());
        Scalar s;
        s.field_ = field_;
        if (field_.is_rationals())
            s.q_ = mpq_class(1 / *q_);
        else
            s.r_ = inverse_mod(r_, field_.characteristic);
        return s;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.field_ != b.field_)
            return false;
        return a.field_.is_rationals() ? a.rational() == b.rational() : a.r_ == b.r_;
    }

    /// "p/q" for rationals (no denominator when it is 1), the residue for F_p.
    std::string to_string() const {
        return field_.is_rationals() ? rational().get_str() : std::to_string(r_);
    }

  private:
    static std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
        while (new_r != 0) {
            const std::int64_t q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        if (t < 0)
            t += static_cast<std::int64_t>(p);
        return static_cast<std::uint64_t>(t);
    }

    void check(const Scalar& rhs) const {
        if (field_ != rhs.field_)
            throw Error(ErrorCode::field_mismatch, field_.name() + " vs " + rhs.field_.name());
    }

    void set_q(mpq_class v) {
        if (sgn(v) == 0)
            q_.reset();
        else
            q_ = std::move(v);
    }

    FieldSpec field_;
    // Empty for zero, so zero entries of large matrices cost no allocation.
    std::optional<mpq_class> q_;
    std::uint64_t r_ = 0;
};

/// Reduction Q -> F_p of a rational scalar.
inline Scalar reduce(const Scalar& value, FieldSpec target) {
    if (!value.field().is_rationals())
        throw Error(ErrorCode::field_mismatch, "reduction expects a rational value");
    return Scalar::from_rational(target, value.rational());
}

/// Parses "n" or "p/q" (optionally signed) into the field.
inline Scalar parse_scalar(FieldSpec field, const std::string& text) {
    mpq_class q;
    try {
        std::string t = text;
        if (!t.empty() && t.front() == '+')
            t.erase(0, 1);
        if (t.empty() || q.set_str(t, 10) != 0)
            throw Error(ErrorCode::parse, "bad scalar literal '" + text + "'");
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::parse, "bad scalar literal '" + text + "'");
    }
    if (q.get_den() == 0)
        throw Error(ErrorCode::parse, "zero denominator in '" + text + "'");
    q.canonicalize();
    return Scalar::from_rational(field, q);
}

} // namespace krich
