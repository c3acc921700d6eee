#pragma once

#include "krich/expression.hpp"

#include <string>

namespace krich {

/// Leading behaviour of a coordinate at the distinguished point: lead * z^order.
struct AnsatzTerm {
    Order order = 0;
    Scalar lead;
};

/// A plane affine curve f(x, y) = 0 with a chosen branch at its point P at
/// infinity. The branch is pinned by the ansatz; x is taken to be exactly
/// lead_x * z^order_x, which fixes the local parameter z.
struct CurveSpec {
    std::string label;
    FieldSpec field;
    Poly2 f;
    AnsatzTerm x;
    AnsatzTerm y;
    Order precision_target = 10;

    /// Validates: f nonzero, leads nonzero, and the lowest-order terms of
    /// f(lead_x z^ox, lead_y z^oy) cancel.
    static CurveSpec make(std::string label, FieldSpec field, const Poly2& f, AnsatzTerm x,
                          AnsatzTerm y, Order precision_target = 10) {
        if (f.is_zero())
            throw Error(ErrorCode::ansatz_inconsistent, "curve polynomial is zero");
        if (x.lead.field() != field || y.lead.field() != field || f.field() != field)
            throw Error(ErrorCode::field_mismatch, "curve data over mixed fields");
        if (x.lead.is_zero() || y.lead.is_zero())
            throw Error(ErrorCode::ansatz_inconsistent, "ansatz leading coefficient is zero");
        const LaurentSeries1 x0 = LaurentSeries1::monomial(x.lead, x.order);
        const LaurentSeries1 y0 = LaurentSeries1::monomial(y.lead, y.order);
        Order top = kExact;
        for (const auto& [e, c] : f.terms())
            top = std::min(top, e.first * x.order + e.second * y.order);
        const LaurentSeries1 value = f.evaluate(x0, y0);
        if (!value.coefficient(top).is_zero())
            throw Error(ErrorCode::ansatz_inconsistent,
                        "leading terms of f do not cancel at order " + std::to_string(top));
        return {std::move(label), field, f, std::move(x), std::move(y), precision_target};
    }

    static CurveSpec make(std::string label, FieldSpec field, std::string_view f, Order x_order,
                          Order y_order, Order precision_target = 10) {
        return make(std::move(label), field, parse_polynomial(field, f),
                    {x_order, Scalar::one(field)}, {y_order, Scalar::one(field)},
                    precision_target);
    }
};

struct CurveExpansion {
    LaurentSeries1 x;
    LaurentSeries1 y;
    /// f(x(z), y(z)) in tracked arithmetic: no determined nonzero coefficient,
    /// known at least below precision_target.
    LaurentSeries1 residual;
    int newton_steps = 0;
};

/// Orders of precision lost from y to f(x, y): a term c x^a y^b (b >= 1)
/// contributes a*ox + (b-1)*oy.
inline Order residual_shift(const CurveSpec& spec) {
    std::optional<Order> shift;
    for (const auto& [e, c] : spec.f.terms())
        if (e.second >= 1) {
            const Order s = e.first * spec.x.order + (e.second - 1) * spec.y.order;
            shift = shift ? std::min(*shift, s) : s;
        }
    if (!shift)
        throw Error(ErrorCode::newton_degenerate, "f does not involve y");
    return *shift;
}

/// Expands the coordinates at P. x is the ansatz monomial; y is refined by
/// Newton steps y <- y - f/f_y with exact Laurent-polynomial iterates. The
/// returned y is known below v(f(x,Y)) - v(f_y(x,Y)) for the last iterate Y.
inline CurveExpansion expand_at_infinity(const CurveSpec& spec) {
    const FieldSpec field = spec.field;
    const LaurentSeries1 x = LaurentSeries1::monomial(spec.x.lead, spec.x.order);
    LaurentSeries1 iterate = LaurentSeries1::monomial(spec.y.lead, spec.y.order);
    const Poly2 fy = spec.f.derivative_y();

    const Order needed = spec.precision_target - residual_shift(spec);

    const LaurentSeries1 d0 = fy.evaluate(x, iterate).normalized();
    if (d0.is_known_zero())
        throw Error(ErrorCode::newton_degenerate, "df/dy vanishes on the ansatz");
    const Order vd = *d0.valuation();

    LaurentSeries1 y(field);
    int steps = 0;
    std::optional<Order> previous;
    for (;; ++steps) {
        if (steps > 64)
            throw Error(ErrorCode::newton_degenerate, "Newton iteration did not converge");
        const LaurentSeries1 r = spec.f.evaluate(x, iterate).normalized();
        if (r.is_known_zero()) {
            y = iterate;
            break;
        }
        const LaurentSeries1 d = fy.evaluate(x, iterate).normalized();
        if (d.valuation() != vd)
            throw Error(ErrorCode::newton_degenerate, "valuation of df/dy moved during refinement");
        const Order vr = *r.valuation();
        const Order certified = vr - vd;
        if (certified <= spec.y.order || (previous && certified <= *previous))
            throw Error(ErrorCode::newton_degenerate,
                        "Newton correction does not improve on the ansatz");
        if (certified >= needed) {
            y = iterate.truncated(certified);
            break;
        }
        previous = certified;
        const Order work = needed + 1;
        const LaurentSeries1 correction = r * invert(d, work - vr + 1);
        iterate = (iterate - correction.polynomial_below(work)).polynomial_below(work);
    }

    CurveExpansion out{x, y, spec.f.evaluate(x, y), steps};
    if (!out.residual.is_known_zero() || out.residual.known_below() < spec.precision_target)
        throw Error(ErrorCode::newton_degenerate,
                    "residual " + out.residual.to_string() + " misses the precision target");
    return out;
}

/// Desk-scale curves with a single smooth-branch point at infinity.
namespace curves {

/// P^1 as the parabola y = x^2, x ~ z^-1.
inline CurveSpec projective_line(FieldSpec field = {}) {
    return CurveSpec::make("p1", field, "y - x^2", -1, -2);
}

/// y^2 = x^3 + 1, genus 1, x ~ z^-2, y ~ z^-3.
inline CurveSpec elliptic(FieldSpec field = {}) {
    return CurveSpec::make("elliptic", field, "y^2 - x^3 - 1", -2, -3);
}

/// y^2 = x^3, arithmetic genus 1, x ~ z^-2, y ~ z^-3.
inline CurveSpec cuspidal(FieldSpec field = {}) {
    return CurveSpec::make("cuspidal", field, "y^2 - x^3", -2, -3);
}

} // namespace curves

} // namespace krich
