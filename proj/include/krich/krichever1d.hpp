#pragma once

#include "krich/curve.hpp"
#include "krich/matrix.hpp"

#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace krich {

/// Half-open range of z-orders [lo, hi).
struct OrderWindow {
    Order lo = -8;
    Order hi = 8;
    friend bool operator==(const OrderWindow&, const OrderWindow&) = default;
};

/// A torsion-free sheaf on the curve presented by A-module generators. Each
/// generator is a vector of r function-field elements (expressions in x, y);
/// W is the A-span of the generators inside k((z))^r.
struct SheafData1 {
    std::size_t rank = 1;
    std::vector<std::vector<Expression>> generators;
    std::vector<std::string> trivialization;

    static SheafData1 structure_sheaf() { return line_bundle("1"); }

    static SheafData1 line_bundle(std::string_view generator) {
        return from_vectors({{std::string(generator)}});
    }

    /// Rank r direct sum: generator k sits in component k.
    static SheafData1 diagonal(const std::vector<std::string>& generators) {
        std::vector<std::vector<std::string>> vs;
        for (std::size_t k = 0; k < generators.size(); ++k) {
            std::vector<std::string> v(generators.size(), "0");
            v[k] = generators[k];
            vs.push_back(std::move(v));
        }
        return from_vectors(vs);
    }

    static SheafData1 from_vectors(const std::vector<std::vector<std::string>>& vectors) {
        if (vectors.empty())
            throw Error(ErrorCode::invalid_argument, "sheaf needs at least one generator");
        SheafData1 s;
        s.rank = vectors.front().size();
        if (s.rank == 0)
            throw Error(ErrorCode::invalid_argument, "sheaf rank must be at least 1");
        for (const auto& v : vectors) {
            if (v.size() != s.rank)
                throw Error(ErrorCode::dimension_mismatch, "generator vectors of unequal length");
            std::vector<Expression> g;
            for (const auto& text : v)
                g.push_back(Expression::parse(text));
            s.generators.push_back(std::move(g));
        }
        for (std::size_t k = 0; k < s.rank; ++k)
            s.trivialization.push_back("e" + std::to_string(k + 1));
        return s;
    }
};

/// Window basis of a filtered subspace of k((z))^r. Column index is
/// (order - lo) * rank + component, i.e. (order, component) lexicographic.
/// Rows are in reduced echelon form, so pivots are distinct leading orders.
struct SubspaceBasis {
    FieldSpec field;
    OrderWindow window;
    std::size_t rank = 1;
    Matrix rows;
    std::vector<std::size_t> pivot_columns;
    Order slack = 0;
    std::string meta;

    std::size_t columns() const { return static_cast<std::size_t>(window.hi - window.lo) * rank; }
    Order order_of(std::size_t column) const {
        return window.lo + static_cast<Order>(column / rank);
    }
    std::size_t component_of(std::size_t column) const { return column % rank; }

    std::vector<Order> pivot_orders() const {
        std::vector<Order> out;
        for (std::size_t c : pivot_columns)
            out.push_back(order_of(c));
        return out;
    }

    /// Row `r`, component `c` as a series known below window.hi.
    LaurentSeries1 series(std::size_t r, std::size_t c) const {
        std::map<Order, Scalar> terms;
        for (std::size_t col = c; col < columns(); col += rank)
            if (!rows.at(r, col).is_zero())
                terms.emplace(order_of(col), rows.at(r, col));
        return LaurentSeries1::from_terms(field, terms, window.hi);
    }

    friend bool operator==(const SubspaceBasis& a, const SubspaceBasis& b) {
        return a.field == b.field && a.window == b.window && a.rank == b.rank &&
               a.rows == b.rows && a.pivot_columns == b.pivot_columns;
    }
};

/// Cohomology dimensions of a computed complex together with how they were
/// obtained.
struct ComplexReport {
    std::vector<std::int64_t> h;
    std::int64_t index = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> windows_used;
    std::vector<std::vector<std::int64_t>> h_trace;
    bool stable = false;
    std::string note;
};

namespace detail {

inline constexpr Order kMaxSeriesPrecision = 1 << 12;

inline SubspaceBasis span_basis(const CurveSpec& curve, const SheafData1& sheaf,
                                OrderWindow window, Order slack, std::string meta) {
    if (window.lo >= window.hi)
        throw Error(ErrorCode::window_too_small, "empty order window");
    if (curve.x.order >= 0 || curve.y.order >= 0)
        throw Error(ErrorCode::ansatz_inconsistent,
                    "x and y must have poles at P for the window enumeration to be finite");
    if (slack < 0)
        throw Error(ErrorCode::invalid_argument, "slack must be nonnegative");
    const FieldSpec field = curve.field;
    const std::size_t r = sheaf.rank;
    const Order vmin = window.lo - slack;
    const Order ox = curve.x.order, oy = curve.y.order;

    Order precision = window.hi - vmin + 8;
    for (;;) {
        if (precision > kMaxSeriesPrecision)
            throw Error(ErrorCode::precision_exhausted,
                        "coordinate series cannot cover window [" + std::to_string(window.lo) +
                            ", " + std::to_string(window.hi) + ")");
        CurveSpec target = curve;
        target.precision_target = precision + residual_shift(curve);
        const CurveExpansion ex = expand_at_infinity(target);

        std::vector<LaurentSeries1> xp{LaurentSeries1::constant(field, 1)};
        std::vector<LaurentSeries1> yp{LaurentSeries1::constant(field, 1)};
        auto power = [](std::vector<LaurentSeries1>& cache, const LaurentSeries1& base, Order k) {
            while (static_cast<Order>(cache.size()) <= k)
                cache.push_back(cache.back() * base);
            return cache[static_cast<std::size_t>(k)];
        };

        std::vector<std::vector<LaurentSeries1>> row_series;
        Order deficit = 0;
        for (const auto& gen : sheaf.generators) {
            std::vector<LaurentSeries1> g;
            std::optional<Order> vg;
            for (const auto& e : gen) {
                LaurentSeries1 s = e.evaluate(ex.x, ex.y, precision).normalized();
                if (auto v = s.valuation())
                    vg = vg ? std::min(*vg, *v) : *v;
                g.push_back(std::move(s));
            }
            if (!vg)
                continue;
            for (Order b = 0; b * oy + *vg >= vmin; ++b)
                for (Order a = 0; a * ox + b * oy + *vg >= vmin; ++a) {
                    const LaurentSeries1 mono = power(xp, ex.x, a) * power(yp, ex.y, b);
                    std::vector<LaurentSeries1> comps;
                    for (const auto& gc : g) {
                        comps.push_back(mono * gc);
                        deficit = std::max(deficit, window.hi - comps.back().known_below());
                    }
                    row_series.push_back(std::move(comps));
                }
        }
        if (deficit > 0) {
            precision += deficit + 8;
            continue;
        }

        const std::size_t full_cols = static_cast<std::size_t>(window.hi - vmin) * r;
        Matrix m(field, row_series.size(), full_cols);
        for (std::size_t i = 0; i < row_series.size(); ++i)
            for (std::size_t c = 0; c < r; ++c)
                for (const auto& [n, coeff] : row_series[i][c].terms()) {
                    if (n >= window.hi)
                        break;
                    if (n < vmin)
                        throw Error(ErrorCode::invalid_argument, "generator term below the window");
                    m.set(i, static_cast<std::size_t>(n - vmin) * r + c, coeff);
                }
        const Echelon e = rref(m);
        const std::size_t offset = static_cast<std::size_t>(window.lo - vmin) * r;
        SubspaceBasis basis;
        basis.field = field;
        basis.window = window;
        basis.rank = r;
        basis.slack = slack;
        basis.meta = std::move(meta);
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < e.pivots.size(); ++k)
            if (e.pivots[k] >= offset)
                keep.push_back(k);
        basis.rows = Matrix(field, keep.size(), full_cols - offset);
        for (std::size_t k = 0; k < keep.size(); ++k) {
            for (std::size_t c = offset; c < full_cols; ++c)
                if (!e.matrix.at(keep[k], c).is_zero())
                    basis.rows.set(k, c - offset, e.matrix.at(keep[k], c));
            basis.pivot_columns.push_back(e.pivots[keep[k]] - offset);
        }
        return basis;
    }
}

inline SubspaceBasis stable_span(const CurveSpec& curve, const SheafData1& sheaf,
                                 OrderWindow window, Order slack, const std::string& meta) {
    SubspaceBasis basis = span_basis(curve, sheaf, window, slack, meta);
    const Order doubled = std::max<Order>(2 * slack, slack + 1);
    SubspaceBasis check = span_basis(curve, sheaf, window, doubled, meta);
    if (!(check.rows == basis.rows))
        throw Error(ErrorCode::not_stabilized,
                    "basis changed when slack grew from " + std::to_string(slack) + " to " +
                        std::to_string(doubled));
    return basis;
}

} // namespace detail

inline constexpr Order kDefaultSlack = 4;

/// A = Gamma(C - P, O_C) in the window: monomials x^a y^b of valuation at
/// least lo - slack are expanded and row-reduced; rows pivoting at or above lo
/// are kept. Raises NotStabilized if doubling the slack changes the result.
inline SubspaceBasis build_A(const CurveSpec& curve, OrderWindow window,
                             Order slack = kDefaultSlack) {
    return detail::stable_span(curve, SheafData1::structure_sheaf(), window, slack,
                               "A = span{x^a y^b} on " + curve.label);
}

/// W = Gamma(C - P, F): the A-module spanned by the sheaf generators.
inline SubspaceBasis build_W(const CurveSpec& curve, const SheafData1& sheaf, OrderWindow window,
                             Order slack = kDefaultSlack) {
    std::string meta = "W = A-span{";
    for (std::size_t k = 0; k < sheaf.generators.size(); ++k) {
        meta += k ? "; " : "";
        for (std::size_t c = 0; c < sheaf.rank; ++c)
            meta += (c ? "," : "") + sheaf.generators[k][c].text();
    }
    return detail::stable_span(curve, sheaf, window, slack, meta + "} on " + curve.label);
}

struct Phi1Image {
    SubspaceBasis a;
    SubspaceBasis w;
};

/// The pair (A, W) over a common window.
inline Phi1Image phi1(const CurveSpec& curve, const SheafData1& sheaf, OrderWindow window,
                      Order slack = kDefaultSlack) {
    return {build_A(curve, window, slack), build_W(curve, sheaf, window, slack)};
}

/// (h0, h1) of the windowed map (a, f) -> a - f from span(basis) plus the
/// nonnegative-order monomials onto the window.
inline Cohomology3 window_cohomology(const SubspaceBasis& basis) {
    const OrderWindow w = basis.window;
    if (!(w.lo < 0 && 0 <= w.hi))
        throw Error(ErrorCode::window_too_small, "window must straddle order 0");
    const std::size_t v1 = basis.columns();
    const std::size_t first_nonneg = static_cast<std::size_t>(-w.lo) * basis.rank;
    const std::size_t v0 = basis.rows.rows() + (v1 - first_nonneg);
    Matrix d0(basis.field, v1, v0);
    for (std::size_t r = 0; r < basis.rows.rows(); ++r)
        for (std::size_t c = 0; c < v1; ++c)
            if (!basis.rows.at(r, c).is_zero())
                d0.set(c, r, basis.rows.at(r, c));
    for (std::size_t c = first_nonneg; c < v1; ++c)
        d0.set(c, basis.rows.rows() + (c - first_nonneg), -Scalar::one(basis.field));
    return complex_cohomology(d0, Matrix(basis.field, 0, v1));
}

/// Windows [lo - k*step, hi + k*step) for k = 0..max_enlargements; the result
/// is accepted once two consecutive windows give the same dimensions.
struct StabilizationPolicy {
    Order start_lo = -8;
    Order start_hi = 8;
    Order step = 8;
    int max_enlargements = 5;

    /// KRICH_MAX_ENLARGE, when set, overrides the enlargement cap.
    static StabilizationPolicy from_environment() {
        StabilizationPolicy p;
        if (const char* v = std::getenv("KRICH_MAX_ENLARGE")) {
            char* end = nullptr;
            const long n = std::strtol(v, &end, 10);
            if (end == v || *end != '\0' || n < 0)
                throw Error(ErrorCode::invalid_argument,
                            std::string("KRICH_MAX_ENLARGE must be a nonnegative integer: ") + v);
            p.max_enlargements = static_cast<int>(n);
        }
        return p;
    }
};

using BasisBuilder = std::function<SubspaceBasis(OrderWindow)>;

/// Cohomology of A + K_1 -> K (or W + V_1 -> V) via the stabilization protocol.
inline ComplexReport cohomology1(const BasisBuilder& build, const StabilizationPolicy& policy = {}) {
    ComplexReport report;
    for (int k = 0; k <= policy.max_enlargements; ++k) {
        const OrderWindow w{policy.start_lo - k * policy.step, policy.start_hi + k * policy.step};
        const Cohomology3 c = window_cohomology(build(w));
        const std::vector<std::int64_t> h{static_cast<std::int64_t>(c.h0),
                                          static_cast<std::int64_t>(c.h1)};
        report.windows_used.emplace_back(w.lo, w.hi);
        report.h_trace.push_back(h);
        if (k > 0 && report.h_trace[k - 1] == h) {
            report.h = h;
            report.index = h[0] - h[1];
            report.stable = true;
            return report;
        }
    }
    throw Error(ErrorCode::not_stabilized,
                "cohomology did not repeat within " + std::to_string(policy.max_enlargements) +
                    " window enlargements");
}

inline ComplexReport cohomology1_A(const CurveSpec& curve, const StabilizationPolicy& policy = {},
                                   Order slack = kDefaultSlack) {
    return cohomology1([&](OrderWindow w) { return build_A(curve, w, slack); }, policy);
}

inline ComplexReport cohomology1_W(const CurveSpec& curve, const SheafData1& sheaf,
                                   const StabilizationPolicy& policy = {},
                                   Order slack = kDefaultSlack) {
    return cohomology1([&](OrderWindow w) { return build_W(curve, sheaf, w, slack); }, policy);
}

/// Euler characteristic read off the pivots alone: pivots at order >= 0 minus
/// the (order, component) slots in [lo, 0) that carry no pivot.
inline std::int64_t pivot_gap_index(const SubspaceBasis& basis) {
    std::int64_t nonneg = 0, negative = 0;
    for (Order o : basis.pivot_orders())
        (o >= 0 ? nonneg : negative) += 1;
    const std::int64_t slots = -basis.window.lo * static_cast<std::int64_t>(basis.rank);
    return nonneg - (slots - negative);
}

/// dim { a in span : valuation(a) >= -n }.
inline std::int64_t hilbert_function(const SubspaceBasis& basis, Order n) {
    if (basis.window.lo > -n)
        throw Error(ErrorCode::window_too_small,
                    "window starts at " + std::to_string(basis.window.lo) + ", above -" +
                        std::to_string(n));
    std::int64_t count = 0;
    for (Order o : basis.pivot_orders())
        count += o >= -n ? 1 : 0;
    return count;
}

struct ClosureWitness {
    std::size_t a_row = 0;
    std::size_t w_row = 0;
    Order order = 0;
    std::size_t component = 0;
};

struct ClosureReport {
    bool passed = true;
    std::size_t checked_pairs = 0;
    std::size_t skipped_pairs = 0;
    Order sub_hi = 0;
    std::optional<ClosureWitness> witness;
};

/// Checks A * W subset W on the sub-window [lo, sub_hi): every pair of rows
/// whose product is determined there and starts at or above lo must reduce to
/// zero against the W rows. The first failing pair is reported as witness.
inline ClosureReport verify_closure(const SubspaceBasis& a, const SubspaceBasis& w,
                                    std::optional<Order> sub_hi = std::nullopt) {
    if (a.rank != 1)
        throw Error(ErrorCode::invalid_argument, "A must be rank 1");
    if (!(a.window == w.window) || a.field != w.field)
        throw Error(ErrorCode::dimension_mismatch, "A and W must share field and window");
    const OrderWindow win = w.window;
    ClosureReport report;
    report.sub_hi = sub_hi.value_or(win.lo < 0 ? win.hi + win.lo / 2 : win.hi);
    if (report.sub_hi <= win.lo || report.sub_hi > win.hi)
        throw Error(ErrorCode::window_too_small, "closure sub-window outside the basis window");
    const std::size_t prefix = static_cast<std::size_t>(report.sub_hi - win.lo) * w.rank;

    for (std::size_t i = 0; i < a.rows.rows(); ++i) {
        const LaurentSeries1 sa = a.series(i, 0);
        for (std::size_t k = 0; k < w.rows.rows(); ++k) {
            std::vector<LaurentSeries1> product;
            bool usable = true;
            for (std::size_t c = 0; c < w.rank; ++c) {
                product.push_back(sa * w.series(k, c));
                if (product.back().known_below() < report.sub_hi ||
                    product.back().min_order() < win.lo)
                    usable = false;
            }
            if (!usable) {
                ++report.skipped_pairs;
                continue;
            }
            ++report.checked_pairs;
            std::vector<Scalar> v(prefix, Scalar::zero(w.field));
            for (std::size_t c = 0; c < w.rank; ++c)
                for (const auto& [n, coeff] : product[c].terms()) {
                    if (n >= report.sub_hi)
                        break;
                    v[static_cast<std::size_t>(n - win.lo) * w.rank + c] = coeff;
                }
            for (std::size_t r = 0; r < w.rows.rows(); ++r) {
                const std::size_t p = w.pivot_columns[r];
                if (p >= prefix || v[p].is_zero())
                    continue;
                const Scalar f = v[p];
                for (std::size_t c = p; c < prefix; ++c)
                    if (!w.rows.at(r, c).is_zero())
                        v[c] -= f * w.rows.at(r, c);
            }
            for (std::size_t c = 0; c < prefix; ++c)
                if (!v[c].is_zero()) {
                    report.passed = false;
                    report.witness = ClosureWitness{i, k, w.order_of(c), w.component_of(c)};
                    return report;
                }
        }
    }
    return report;
}

/// Copy of `basis` with `delta` added at (row, column); used to build
/// deliberately broken fixtures.
inline SubspaceBasis perturbed(const SubspaceBasis& basis, std::size_t row, std::size_t column,
                               const Scalar& delta) {
    SubspaceBasis out = basis;
    out.rows.set(row, column, basis.rows.at(row, column) + delta);
    return out;
}

} // namespace krich
