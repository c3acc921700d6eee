#pragma once

#include "krich/krichever1d.hpp"
#include "krich/lattice.hpp"
#include "krich/matrix.hpp"

#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace krich {

/// The P^2 chart with C the line at infinity and F = sum_k O(d_k C).
struct SurfaceScenario {
    FieldSpec field;
    RankProfile twists;
    std::int64_t self_intersection = 1;
    std::int64_t chi_curve = 1;
};

/// Per summand the triple (B, K02, K12) = (B_C(d), B_P, O_PC) and the
/// intersections A, A_C, O_P in front of it:
///   A + A_C + O_P  --d0-->  B + K02 + K12  --d1-->  K
///   d0(a, a_C, o) = (a - a_C, o - a, a_C - o),  d1(b, k02, k12) = b + k02 + k12.
struct RestrictedComplex {
    FieldSpec field;
    std::vector<StandardRings> components;

    static RestrictedComplex from_scenario(const SurfaceScenario& s) {
        RestrictedComplex c{s.field, {}};
        for (std::int64_t d : s.twists.twists)
            c.components.push_back(standard_rings(d));
        return c;
    }
};

inline constexpr const char* kRestrictedSigns =
    "d0(a, a_C, o) = (a - a_C, o - a, a_C - o); d1(b, k02, k12) = b + k02 + k12";

inline constexpr const char* kIndexConvention =
    "realized convention: index = chi(C, O_C) + d - n*C.C with K(n) = z2^n K12, so consecutive "
    "graded pieces differ by -C.C; the graded piece at n is the conormal twist F(nC)|_C "
    "restricted to C, which is why the increment is not +C.C";

namespace detail {

/// Membership of one lattice point in (B, K02, K12), bit k set iff in region k.
using Pattern = unsigned;

struct PatternComplex {
    Matrix d0;
    Matrix d1;
};

/// The complex restricted to one monomial: each summand is k or 0.
inline PatternComplex pattern_complex(FieldSpec field, Pattern p) {
    const bool in[3] = {(p & 1u) != 0, (p & 2u) != 0, (p & 4u) != 0};
    // V0 summands with the pair of V1 summands they live in.
    const std::array<std::array<int, 2>, 3> v0_pairs{{{0, 1}, {0, 2}, {1, 2}}};
    // d0 coefficients of (a, a_C, o) into (B, K02, K12).
    const int sign[3][3] = {{1, -1, 0}, {-1, 0, 1}, {0, 1, -1}};
    std::vector<int> v0, v1;
    for (int k = 0; k < 3; ++k)
        if (in[v0_pairs[k][0]] && in[v0_pairs[k][1]])
            v0.push_back(k);
    for (int k = 0; k < 3; ++k)
        if (in[k])
            v1.push_back(k);
    Matrix d0(field, v1.size(), v0.size());
    for (std::size_t r = 0; r < v1.size(); ++r)
        for (std::size_t c = 0; c < v0.size(); ++c)
            d0.set(r, c, Scalar(field, sign[v1[r]][v0[c]]));
    Matrix d1(field, 1, v1.size());
    for (std::size_t c = 0; c < v1.size(); ++c)
        d1.set(0, c, Scalar::one(field));
    return {std::move(d0), std::move(d1)};
}

inline std::array<Cohomology3, 8> pattern_table(FieldSpec field) {
    std::array<Cohomology3, 8> out{};
    for (Pattern p = 0; p < 8; ++p) {
        const PatternComplex pc = pattern_complex(field, p);
        out[p] = complex_cohomology(pc.d0, pc.d1);
    }
    return out;
}

/// Disjoint regions covering exactly the points with membership pattern p.
inline std::vector<LatticeRegion> pattern_regions(const StandardRings& r, Pattern p) {
    const std::array<const LatticeRegion*, 3> triple{&r.b_c, &r.b_p, &r.o_pc};
    std::vector<LatticeRegion> pieces{LatticeRegion::full()};
    for (int k = 0; k < 3; ++k) {
        std::vector<LatticeRegion> next;
        const std::vector<LatticeRegion> factor =
            (p >> k) & 1u ? std::vector<LatticeRegion>{*triple[k]} : triple[k]->complement();
        for (const auto& a : pieces)
            for (const auto& b : factor) {
                LatticeRegion c = intersect(a, b);
                if (!c.is_empty())
                    next.push_back(std::move(c));
            }
        pieces = std::move(next);
    }
    return pieces;
}

inline Pattern pattern_at(const StandardRings& r, std::int64_t i, std::int64_t j) {
    return (r.b_c.contains(i, j) ? 1u : 0u) | (r.b_p.contains(i, j) ? 2u : 0u) |
           (r.o_pc.contains(i, j) ? 4u : 0u);
}

struct IntervalBounds {
    std::optional<std::int64_t> lo, hi;
    bool empty = false;
};

inline IntervalBounds bounds(const RowInterval& r) {
    using K = RowInterval::Kind;
    switch (r.kind) {
    case K::empty: return {std::nullopt, std::nullopt, true};
    case K::finite: return {r.lo, r.hi, false};
    case K::lower_unbounded: return {std::nullopt, r.hi, false};
    case K::upper_unbounded: return {r.lo, std::nullopt, false};
    case K::full: return {};
    }
    return {};
}

/// |r1 intersect r2|; nullopt when infinite.
inline std::optional<std::int64_t> intersection_size(const RowInterval& r1, const RowInterval& r2) {
    const IntervalBounds a = bounds(r1), b = bounds(r2);
    if (a.empty || b.empty)
        return 0;
    std::optional<std::int64_t> lo = a.lo, hi = a.hi;
    if (b.lo)
        lo = lo ? std::max(*lo, *b.lo) : *b.lo;
    if (b.hi)
        hi = hi ? std::min(*hi, *b.hi) : *b.hi;
    if (!lo || !hi)
        return std::nullopt;
    return std::max<std::int64_t>(0, *hi - *lo + 1);
}

/// |Z minus (r1 union r2)|; nullopt when infinite.
inline std::optional<std::int64_t> uncovered_size(const RowInterval& r1, const RowInterval& r2) {
    using K = RowInterval::Kind;
    if (r1.kind == K::full || r2.kind == K::full)
        return 0;
    const IntervalBounds a = bounds(r1), b = bounds(r2);
    const IntervalBounds* low = nullptr;
    const IntervalBounds* high = nullptr;
    for (const IntervalBounds* x : {&a, &b}) {
        if (x->empty)
            continue;
        if (!x->lo)
            low = x;
        if (!x->hi)
            high = x;
    }
    if (!low || !high || low == high)
        return std::nullopt;
    return std::max<std::int64_t>(0, *high->lo - *low->hi - 1);
}

} // namespace detail

/// B = B_C(O_X) and W = (B_C(O(d_k C)))_k.
struct Phi2Image {
    LatticeRegion b;
    std::vector<LatticeRegion> w;
};

inline Phi2Image phi2(const SurfaceScenario& s) {
    Phi2Image out{standard_rings(0).b_c.named("B"), {}};
    for (std::size_t k = 0; k < s.twists.rank(); ++k)
        out.w.push_back(
            standard_rings(s.twists.twists[k]).b_c.named("W" + std::to_string(k + 1)));
    return out;
}

struct Prop2Report {
    bool passed = true;
    std::size_t components_checked = 0;
    std::optional<std::size_t> failing_component;
    std::optional<LatticePoint> witness;
};

/// Checks B_C cap B_P = A summand by summand. On failure the witness is the
/// first point (in growing square windows, lexicographic) where the two sides
/// disagree.
inline Prop2Report prop2_check(const std::vector<StandardRings>& components) {
    Prop2Report report;
    for (std::size_t k = 0; k < components.size(); ++k) {
        const StandardRings& r = components[k];
        ++report.components_checked;
        const LatticeRegion lhs = intersect(r.b_c, r.b_p);
        if (lhs == r.a)
            continue;
        report.passed = false;
        report.failing_component = k;
        for (std::int64_t w = 4; w <= (1 << 16) && !report.witness; w *= 2)
            for (const auto& p : window_points(LatticeRegion::full(), Window::square(-w, w)))
                if (lhs.contains(p) != r.a.contains(p)) {
                    report.witness = p;
                    break;
                }
        return report;
    }
    return report;
}

inline Prop2Report prop2_check(const SurfaceScenario& s) {
    return prop2_check(RestrictedComplex::from_scenario(s).components);
}

/// Exact (h0, h1, h2) by summing per-monomial cohomology over the eight
/// membership patterns. Patterns with nonzero cohomology must be finite.
inline ComplexReport restricted_cohomology(const RestrictedComplex& complex) {
    const auto table = detail::pattern_table(complex.field);
    std::vector<std::int64_t> h(3, 0);
    for (const auto& rings : complex.components)
        for (detail::Pattern p = 0; p < 8; ++p) {
            const Cohomology3& c = table[p];
            if (c.h0 == 0 && c.h1 == 0 && c.h2 == 0)
                continue;
            std::int64_t count = 0;
            for (const auto& piece : detail::pattern_regions(rings, p)) {
                const auto n = piece.count();
                if (!n)
                    throw Error(ErrorCode::infinite_cohomology,
                                "infinitely many monomials with membership pattern " +
                                    std::to_string(p) + " contribute cohomology");
                count += *n;
            }
            h[0] += count * static_cast<std::int64_t>(c.h0);
            h[1] += count * static_cast<std::int64_t>(c.h1);
            h[2] += count * static_cast<std::int64_t>(c.h2);
        }
    ComplexReport report;
    report.h = h;
    report.index = h[0] - h[1] + h[2];
    report.stable = true;
    report.note = std::string("lattice count; signs ") + kRestrictedSigns;
    return report;
}

/// Recomputes restricted_cohomology with whole-window matrices on [-w, w)^2,
/// w = 4, 8, 12, ..., until two consecutive windows agree.
inline ComplexReport restricted_cohomology_oracle(const RestrictedComplex& complex,
                                                  const StabilizationPolicy& policy = {
                                                      -4, 4, 4, 8}) {
    const FieldSpec field = complex.field;
    ComplexReport report;
    for (int k = 0; k <= policy.max_enlargements; ++k) {
        const Window win{policy.start_lo - k * policy.step, policy.start_hi + k * policy.step,
                         policy.start_lo - k * policy.step, policy.start_hi + k * policy.step};
        std::vector<std::int64_t> h(3, 0);
        for (const auto& rings : complex.components) {
            const std::array<const LatticeRegion*, 3> v0_regions{&rings.a, &rings.a_c, &rings.o_p};
            const std::array<const LatticeRegion*, 3> v1_regions{&rings.b_c, &rings.b_p,
                                                                 &rings.o_pc};
            const std::vector<LatticePoint> all = window_points(LatticeRegion::full(), win);
            std::map<LatticePoint, std::size_t> v2_index;
            for (const auto& p : all)
                v2_index.emplace(p, v2_index.size());
            std::array<std::map<LatticePoint, std::size_t>, 3> v1_index;
            std::size_t v1 = 0;
            for (int s = 0; s < 3; ++s)
                for (const auto& p : window_points(*v1_regions[s], win))
                    v1_index[s].emplace(p, v1++);
            std::size_t v0 = 0;
            for (int s = 0; s < 3; ++s)
                v0 += window_points(*v0_regions[s], win).size();

            Matrix d0(field, v1, v0);
            Matrix d1(field, all.size(), v1);
            const int sign[3][3] = {{1, -1, 0}, {-1, 0, 1}, {0, 1, -1}};
            std::size_t col = 0;
            for (int s = 0; s < 3; ++s)
                for (const auto& p : window_points(*v0_regions[s], win)) {
                    for (int t = 0; t < 3; ++t)
                        if (sign[t][s] != 0)
                            d0.set(v1_index[t].at(p), col, Scalar(field, sign[t][s]));
                    ++col;
                }
            for (int t = 0; t < 3; ++t)
                for (const auto& [p, idx] : v1_index[t])
                    d1.set(v2_index.at(p), idx, Scalar::one(field));
            const Cohomology3 c = complex_cohomology(d0, d1);
            h[0] += static_cast<std::int64_t>(c.h0);
            h[1] += static_cast<std::int64_t>(c.h1);
            h[2] += static_cast<std::int64_t>(c.h2);
        }
        report.windows_used.emplace_back(win.i_lo, win.i_hi);
        report.h_trace.push_back(h);
        if (k > 0 && report.h_trace[k - 1] == h) {
            report.h = h;
            report.index = h[0] - h[1] + h[2];
            report.stable = true;
            report.note = std::string("window matrices; signs ") + kRestrictedSigns;
            return report;
        }
    }
    throw Error(ErrorCode::not_stabilized, "window oracle did not repeat within " +
                                               std::to_string(policy.max_enlargements) +
                                               " enlargements");
}

/// Graded piece n of B + K02 -> K: row(B, n) + row(K02, n) -> k((z1)), summed
/// over the summands. h = (ker, coker).
inline ComplexReport graded_fredholm(const SurfaceScenario& s, std::int64_t n) {
    std::int64_t ker = 0, coker = 0;
    for (const auto& rings : RestrictedComplex::from_scenario(s).components) {
        const RowInterval rb = rings.b_c.row(n), rk = rings.b_p.row(n);
        const auto k = detail::intersection_size(rb, rk);
        const auto c = detail::uncovered_size(rb, rk);
        if (!k || !c)
            throw Error(ErrorCode::infinite_index,
                        "graded piece " + std::to_string(n) + " is not Fredholm");
        ker += *k;
        coker += *c;
    }
    ComplexReport report;
    report.h = {ker, coker};
    report.index = ker - coker;
    report.stable = true;
    report.note = kIndexConvention;
    return report;
}

/// Window-matrix recomputation of graded_fredholm over i in [-w, w).
inline ComplexReport graded_fredholm_oracle(const SurfaceScenario& s, std::int64_t n,
                                            const StabilizationPolicy& policy = {-4, 4, 4, 12}) {
    const FieldSpec field = s.field;
    ComplexReport report;
    for (int k = 0; k <= policy.max_enlargements; ++k) {
        const std::int64_t lo = policy.start_lo - k * policy.step;
        const std::int64_t hi = policy.start_hi + k * policy.step;
        std::int64_t ker = 0, coker = 0;
        for (const auto& rings : RestrictedComplex::from_scenario(s).components) {
            const RowInterval rb = rings.b_c.row(n), rk = rings.b_p.row(n);
            std::vector<std::int64_t> cols;
            for (std::int64_t i = lo; i < hi; ++i)
                if (rb.contains(i))
                    cols.push_back(i);
            const std::size_t nb = cols.size();
            for (std::int64_t i = lo; i < hi; ++i)
                if (rk.contains(i))
                    cols.push_back(i);
            Matrix d(field, static_cast<std::size_t>(hi - lo), cols.size());
            for (std::size_t c = 0; c < cols.size(); ++c)
                d.set(static_cast<std::size_t>(cols[c] - lo), c,
                      c < nb ? Scalar::one(field) : -Scalar::one(field));
            const Cohomology3 h = complex_cohomology(d, Matrix(field, 0, d.rows()));
            ker += static_cast<std::int64_t>(h.h0);
            coker += static_cast<std::int64_t>(h.h1);
        }
        report.windows_used.emplace_back(lo, hi);
        report.h_trace.push_back({ker, coker});
        if (k > 0 && report.h_trace[k - 1] == report.h_trace[k]) {
            report.h = {ker, coker};
            report.index = ker - coker;
            report.stable = true;
            report.note = kIndexConvention;
            return report;
        }
    }
    throw Error(ErrorCode::not_stabilized, "graded window oracle did not repeat");
}

struct CompatComponent {
    std::int64_t twist = 0;
    std::int64_t m = 0;
    OrderWindow window;
    std::vector<Order> graded_row;
    std::vector<Order> phi1_pivots;
    bool equal = false;
};

struct CompatReport {
    bool passed = true;
    std::int64_t n = 0;
    std::vector<CompatComponent> components;
};

/// Compares the graded row {i : (i, n) in B_C(d)} with the pivots of
/// Phi_1(P^1, O(m P)), m = d - n, computed from the curve side with generator
/// x^-m, on a common window.
inline CompatReport phi_compat(const SurfaceScenario& s, std::int64_t n,
                               Order slack = kDefaultSlack) {
    CompatReport report;
    report.n = n;
    const CurveSpec p1 = curves::projective_line(s.field);
    for (std::int64_t d : s.twists.twists) {
        CompatComponent c;
        c.twist = d;
        c.m = d - n;
        c.window = {std::min<Order>(c.m, 0) - 8, std::max<Order>(c.m, 0) + 8};
        const RowInterval row = standard_rings(d).b_c.row(n);
        for (Order i = c.window.lo; i < c.window.hi; ++i)
            if (row.contains(i))
                c.graded_row.push_back(i);
        const SheafData1 sheaf = SheafData1::line_bundle("x^" + std::to_string(-c.m));
        c.phi1_pivots = build_W(p1, sheaf, c.window, slack).pivot_orders();
        std::sort(c.phi1_pivots.begin(), c.phi1_pivots.end());
        c.equal = c.graded_row == c.phi1_pivots;
        report.passed = report.passed && c.equal;
        report.components.push_back(std::move(c));
    }
    return report;
}

struct ClosureCheck2 {
    std::string label;
    bool passed = true;
    std::optional<std::pair<LatticePoint, LatticePoint>> witness;
    std::size_t samples = 0;
    std::optional<std::pair<LatticePoint, LatticePoint>> sample_witness;
};

namespace detail {

/// Exact test of r1 + r2 subset target via supports: for each target
/// constraint a*i + b*j <= c, sup_r1 + sup_r2 <= c.
inline std::optional<std::pair<LatticePoint, LatticePoint>>
additivity_witness(const LatticeRegion& r1, const LatticeRegion& r2, const LatticeRegion& target) {
    if (r1.is_empty() || r2.is_empty())
        return std::nullopt;
    if (target.is_empty())
        return std::make_pair(*r1.nearest_point(), *r2.nearest_point());
    for (const Constraint& k : target.constraints()) {
        const int a = k.sense == Constraint::Sense::le ? k.a : -k.a;
        const int b = k.sense == Constraint::Sense::le ? k.b : -k.b;
        const std::int64_t c = k.sense == Constraint::Sense::le ? k.c : -k.c;
        const auto s1 = r1.support(a, b);
        const auto s2 = r2.support(a, b);
        if (s1 && s2 && s1->first + s2->first <= c)
            continue;
        auto at_least = [&](const LatticeRegion& r, std::int64_t v) {
            return *intersect(r, LatticeRegion::from_constraints({}, {ge(a, b, v)}))
                        .nearest_point();
        };
        if (s1) {
            const LatticePoint p1 = at_least(r1, s1->first);
            return std::make_pair(p1, at_least(r2, c - (a * p1.i + b * p1.j) + 1));
        }
        const LatticePoint p2 = s2 ? at_least(r2, s2->first) : *r2.nearest_point();
        return std::make_pair(at_least(r1, c - (a * p2.i + b * p2.j) + 1), p2);
    }
    return std::nullopt;
}

} // namespace detail

/// r1 + r2 subset target, exact by constraint arithmetic plus a seeded random
/// sample of point pairs from [-radius, radius]^2.
inline ClosureCheck2 region_closure(std::string label, const LatticeRegion& r1,
                                    const LatticeRegion& r2, const LatticeRegion& target,
                                    std::uint32_t seed = 12345, std::size_t samples = 256,
                                    std::int64_t radius = 10) {
    ClosureCheck2 out;
    out.label = std::move(label);
    out.witness = detail::additivity_witness(r1, r2, target);
    out.passed = !out.witness;
    const Window win = Window::square(-radius, radius + 1);
    const auto p1 = window_points(r1, win);
    const auto p2 = window_points(r2, win);
    if (p1.empty() || p2.empty())
        return out;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> d1(0, p1.size() - 1), d2(0, p2.size() - 1);
    for (std::size_t k = 0; k < samples; ++k) {
        const LatticePoint a = p1[d1(rng)], b = p2[d2(rng)];
        ++out.samples;
        if (!out.sample_witness && !target.contains(a.i + b.i, a.j + b.j))
            out.sample_witness = std::make_pair(a, b);
    }
    out.passed = out.passed && !out.sample_witness;
    return out;
}

struct Closure2Report {
    bool passed = true;
    std::vector<ClosureCheck2> checks;
};

/// B * B subset B and B * W_k subset W_k for every summand.
inline Closure2Report closure_check2(const SurfaceScenario& s) {
    const Phi2Image img = phi2(s);
    Closure2Report report;
    report.checks.push_back(region_closure("B*B", img.b, img.b, img.b));
    for (std::size_t k = 0; k < img.w.size(); ++k)
        report.checks.push_back(
            region_closure("B*" + img.w[k].name(), img.b, img.w[k], img.w[k]));
    for (const auto& c : report.checks)
        report.passed = report.passed && c.passed;
    return report;
}

} // namespace krich
