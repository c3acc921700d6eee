#pragma once

#include "krich/adelic2d.hpp"
#include "krich/diagram.hpp"
#include "krich/krichever1d.hpp"

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace krich {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    bool over_time = false;
};

struct AcceptanceReport {
    FieldSpec field;
    std::vector<CriterionResult> criteria;

    bool passed() const {
        for (const auto& c : criteria)
            if (!c.passed)
                return false;
        return !criteria.empty();
    }

    /// One line per criterion. Timings are checked, not printed, so the text
    /// is byte-stable across runs.
    std::string to_text() const {
        std::ostringstream out;
        out << "krich verify field=" << field.name() << "\n";
        for (const auto& c : criteria)
            out << "criterion " << c.id << " [" << c.name << "]: " << (c.passed ? "PASS" : "FAIL")
                << (c.detail.empty() ? "" : " - " + c.detail) << (c.over_time ? " (time limit exceeded)" : "")
                << "\n";
        out << "summary: " << (passed() ? "all criteria passed" : "FAILED") << "\n";
        return out.str();
    }
};

namespace detail {

/// Outcome of one check: ok plus a short description of the first failure.
struct Check {
    bool ok = true;
    std::string why;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    }
};

inline std::string join(const std::vector<std::int64_t>& v) {
    std::string out = "(";
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? "," : "") + std::to_string(v[k]);
    return out + ")";
}

inline CriterionResult timed(int id, std::string name, double limit_seconds,
                             const std::function<Check()>& body, const std::string& summary) {
    CriterionResult r{id, std::move(name), false, {}, false};
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
        c = body();
    } catch (const Error& e) {
        c.ok = false;
        c.why = std::string("error ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.over_time = elapsed > limit_seconds;
    r.passed = c.ok && !r.over_time;
    r.detail = c.ok ? summary : c.why;
    return r;
}

/// Dimensions produced by criteria 1-4 over a field, for cross-field comparison.
inline std::vector<std::int64_t> dimension_fingerprint(FieldSpec field) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = -9; d <= 6; ++d) {
        SurfaceScenario s{field, RankProfile({d})};
        for (auto v : restricted_cohomology(RestrictedComplex::from_scenario(s)).h)
            out.push_back(v);
    }
    for (std::int64_t d = -5; d <= 5; ++d)
        for (std::int64_t n = -5; n <= 5; ++n) {
            SurfaceScenario s{field, RankProfile({d})};
            const auto g = graded_fredholm(s, n);
            out.insert(out.end(), g.h.begin(), g.h.end());
        }
    for (std::int64_t d = -10; d <= 10; ++d)
        out.push_back(prop2_check(SurfaceScenario{field, RankProfile({d, -d, 0})}).passed ? 1 : 0);
    const StandardRings rings = standard_rings(0);
    for (const LatticeRegion* r : rings.all())
        out.push_back(static_cast<std::int64_t>(window_points(*r, Window::square(-6, 6)).size()));
    return out;
}

} // namespace detail

inline CriterionResult criterion_six_rings() {
    return detail::timed(1, "six-ring table", 1.0, [] {
        detail::Check c;
        const StandardRings r = standard_rings(0);
        const std::pair<const LatticeRegion*, const char*> table[] = {
            {&r.b_p, "{i >= 0}"},          {&r.b_c, "{i + j <= 0}"},
            {&r.o_pc, "{j >= 0}"},         {&r.a, "{i >= 0, i + j <= 0}"},
            {&r.a_c, "{j >= 0, i + j <= 0}"}, {&r.o_p, "{i >= 0, j >= 0}"}};
        for (const auto& [region, text] : table)
            c.expect(region->to_string() == text,
                     region->name() + " is " + region->to_string() + ", expected " + text);
        c.expect(intersect(r.b_p, r.b_c) == r.a, "B_P & B_C != A");
        c.expect(intersect(r.b_c, r.o_pc) == r.a_c, "B_C & O_PC != A_C");
        c.expect(intersect(r.b_p, r.o_pc) == r.o_p, "B_P & O_PC != O_P");
        c.expect(r.a.contains(2, -2) && !r.a.contains(-1, 0), "A membership");
        return c;
    }, "six regions and three intersection identities exact");
}

inline CriterionResult criterion_prop2(FieldSpec field) {
    return detail::timed(2, "B_C & B_P = A", 1.0, [field] {
        detail::Check c;
        for (std::int64_t a = -10; a <= 10; ++a) {
            c.expect(prop2_check(SurfaceScenario{field, RankProfile({a})}).passed,
                     "rank 1 twist " + std::to_string(a));
            for (std::int64_t b = -10; b <= 10; ++b) {
                c.expect(prop2_check(SurfaceScenario{field, RankProfile({a, b})}).passed,
                         "rank 2 twists " + detail::join({a, b}));
                    for (std::int64_t e = -10; e <= 10; e += 5) {
                    c.expect(prop2_check(SurfaceScenario{field, RankProfile({a, b, e})}).passed,
                             "rank 3 twists " + detail::join({a, b, e}));
                        }
            }
        }
        auto rings = std::vector<StandardRings>{standard_rings(0)};
        rings[0].b_p = LatticeRegion::from_constraints("B_P", {ge(1, 0, 1)});
        const Prop2Report bad = prop2_check(rings);
        c.expect(!bad.passed && bad.witness && rings[0].a.contains(*bad.witness) !=
                                                   intersect(rings[0].b_c, rings[0].b_p)
                                                       .contains(*bad.witness),
                 "mis-shifted B_P not detected");
        return c;
    }, "twists -10..10, ranks 1-3; mis-shifted fixture caught");
}

inline CriterionResult criterion_surface_cohomology(FieldSpec field) {
    return detail::timed(3, "surface cohomology", 5.0, [field] {
        detail::Check c;
        for (std::int64_t d = -9; d <= 6; ++d) {
            std::vector<std::int64_t> expected{0, 0, 0};
            if (d >= 0)
                expected[0] = (d + 1) * (d + 2) / 2;
            else if (d <= -3)
                expected[2] = (-d - 1) * (-d - 2) / 2;
            const RestrictedComplex cx =
                RestrictedComplex::from_scenario(SurfaceScenario{field, RankProfile({d})});
            const auto lattice = restricted_cohomology(cx);
            const auto oracle = restricted_cohomology_oracle(cx);
            c.expect(lattice.h == expected, "twist " + std::to_string(d) + " lattice " +
                                                detail::join(lattice.h) + " expected " +
                                                detail::join(expected));
            c.expect(oracle.h == lattice.h, "twist " + std::to_string(d) + " oracle " +
                                                detail::join(oracle.h));
        }
        return c;
    }, "d in [-9, 6] match monomial counts; window oracle agrees");
}

inline CriterionResult criterion_graded_index(FieldSpec field) {
    return detail::timed(4, "graded Fredholm index", 2.0, [field] {
        detail::Check c;
        for (std::int64_t d = -5; d <= 5; ++d)
            for (std::int64_t n = -5; n <= 5; ++n) {
                SurfaceScenario s{field, RankProfile({d})};
                const auto g = graded_fredholm(s, n);
                const auto go = graded_fredholm_oracle(s, n);
                const std::string at = "d=" + std::to_string(d) + " n=" + std::to_string(n);
                c.expect(g.index == d - n + 1, at + " index " + std::to_string(g.index));
                c.expect(g.index == s.chi_curve + d - n * s.self_intersection, at + " formula");
                c.expect(go.h == g.h, at + " oracle " + detail::join(go.h));
                c.expect(g.note == kIndexConvention, at + " missing convention note");
                if (n < 5)
                    c.expect(g.index - graded_fredholm(s, n + 1).index == s.self_intersection,
                             at + " increment");
            }
        return c;
    }, "index = d - n + 1 on [-5,5]^2, step -C.C, oracle agrees, convention noted");
}

inline CriterionResult criterion_curve_cohomology(FieldSpec field) {
    return detail::timed(5, "curve cohomology", 30.0, [field] {
        detail::Check c;
        const std::pair<CurveSpec, std::vector<std::int64_t>> cases[] = {
            {curves::projective_line(field), {1, 0}},
            {curves::elliptic(field), {1, 1}},
            {curves::cuspidal(field), {1, 1}}};
        for (const auto& [curve, expected] : cases) {
            const auto t0 = std::chrono::steady_clock::now();
            const ComplexReport r = cohomology1_A(curve);
            const double s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            c.expect(r.h == expected, curve.label + " h " + detail::join(r.h));
            c.expect(r.stable && r.windows_used.size() <= 4,
                     curve.label + " needed " + std::to_string(r.windows_used.size()) + " windows");
            c.expect(r.windows_used.front() == std::make_pair<std::int64_t, std::int64_t>(-8, 8),
                     curve.label + " did not start at [-8, 8)");
            c.expect(s < 10.0, curve.label + " over 10 s");
            const SubspaceBasis a = build_A(curve, {-8, 8});
            c.expect(pivot_gap_index(a) == r.index, curve.label + " pivot/gap index disagrees");
        }
        return c;
    }, "P1 (1,0), y^2=x^3+1 (1,1), y^2=x^3 (1,1); stable within 3 enlargements");
}

inline CriterionResult criterion_hilbert(FieldSpec field) {
    return detail::timed(6, "Hilbert function", 10.0, [field] {
        detail::Check c;
        const SubspaceBasis e = build_A(curves::elliptic(field), {-8, 8});
        const SubspaceBasis p = build_A(curves::projective_line(field), {-8, 8});
        const std::int64_t elliptic[] = {1, 1, 2, 3, 4, 5};
        for (Order n = 0; n <= 5; ++n) {
            c.expect(hilbert_function(e, n) == elliptic[n],
                     "elliptic n=" + std::to_string(n) + " gives " +
                         std::to_string(hilbert_function(e, n)));
            c.expect(hilbert_function(p, n) == n + 1, "P1 n=" + std::to_string(n));
        }
        return c;
    }, "elliptic (1,1,2,3,4,5), P1 n+1");
}

inline CriterionResult criterion_closure(FieldSpec field) {
    return detail::timed(7, "closure laws", 10.0, [field] {
        detail::Check c;
        const OrderWindow w{-12, 12};
        for (const CurveSpec& curve :
             {curves::projective_line(field), curves::elliptic(field), curves::cuspidal(field)}) {
            const SubspaceBasis a = build_A(curve, w);
            const ClosureReport r = verify_closure(a, a);
            c.expect(r.passed && r.checked_pairs > 0, curve.label + " A*A");
        }
        const CurveSpec p1 = curves::projective_line(field);
        const ClosureReport pw = verify_closure(build_A(p1, w), build_W(p1, SheafData1::line_bundle("x"), w));
        c.expect(pw.passed && pw.checked_pairs > 0, "P1 A*W(x)");
        const CurveSpec ell = curves::elliptic(field);
        const SheafData1 two = SheafData1::diagonal({"1", "y"});
        const ClosureReport ew = verify_closure(build_A(ell, w), build_W(ell, two, w));
        c.expect(ew.passed && ew.checked_pairs > 0, "elliptic A*W(1, y)");

        const SubspaceBasis a = build_A(ell, w);
        std::size_t row = a.rows.rows();
        for (std::size_t k = 0; k < a.rows.rows(); ++k)
            if (a.order_of(a.pivot_columns[k]) == 0)
                row = k;
        const std::size_t col = static_cast<std::size_t>(1 - w.lo);
        const ClosureReport bad = verify_closure(a, perturbed(a, row, col, Scalar::one(field)));
        c.expect(!bad.passed && bad.witness.has_value(), "corrupted basis not detected");

        for (std::int64_t d = -5; d <= 5; ++d)
            c.expect(closure_check2(SurfaceScenario{field, RankProfile({d, -d})}).passed,
                     "surface closure twist " + std::to_string(d));
        const LatticeRegion fixture = LatticeRegion::from_constraints("F", {le(1, 1, 1)});
        const ClosureCheck2 f = region_closure("F*F", fixture, fixture, fixture);
        c.expect(!f.passed && f.witness &&
                     f.witness->first == LatticePoint{0, 1} && f.witness->second == LatticePoint{0, 1},
                 "fixture {i + j <= 1} witness");
        return c;
    }, "built-in scenarios closed; corrupted basis and {i + j <= 1} caught with witnesses");
}

inline CriterionResult criterion_compat(FieldSpec field) {
    return detail::timed(8, "Phi_1 compatibility", 20.0, [field] {
        detail::Check c;
        for (std::int64_t d = -5; d <= 5; ++d)
            for (std::int64_t n = -5; n <= 5; ++n)
                c.expect(phi_compat(SurfaceScenario{field, RankProfile({d})}, n).passed,
                         "d=" + std::to_string(d) + " n=" + std::to_string(n));
        return c;
    }, "graded rows equal curve-side pivots for |d|, |n| <= 5");
}

inline CriterionResult criterion_cross_field(FieldSpec field) {
    return detail::timed(9, "cross-field", 10.0, [field] {
        detail::Check c;
        const auto base = detail::dimension_fingerprint(field);
        for (std::uint64_t p : {7u, 101u}) {
            const FieldSpec f = FieldSpec::prime(p);
            c.expect(detail::dimension_fingerprint(f) == base, "F_" + std::to_string(p) + " differs");
            c.expect(criterion_prop2(f).passed && criterion_surface_cohomology(f).passed &&
                         criterion_graded_index(f).passed,
                     "criteria 2-4 over F_" + std::to_string(p));
        }
        return c;
    }, "criteria 1-4 identical over F_7 and F_101");
}

/// Criteria 1-9 in order.
inline AcceptanceReport run_core_acceptance(FieldSpec field) {
    AcceptanceReport r;
    r.field = field;
    r.criteria.push_back(criterion_six_rings());
    r.criteria.push_back(criterion_prop2(field));
    r.criteria.push_back(criterion_surface_cohomology(field));
    r.criteria.push_back(criterion_graded_index(field));
    r.criteria.push_back(criterion_curve_cohomology(field));
    r.criteria.push_back(criterion_hilbert(field));
    r.criteria.push_back(criterion_closure(field));
    r.criteria.push_back(criterion_compat(field));
    r.criteria.push_back(criterion_cross_field(field));
    return r;
}

/// In-process determinism: the criteria text twice, and diagrams rendered
/// twice plus recounted.
inline CriterionResult criterion_determinism(FieldSpec field, const std::string& first_text) {
    return detail::timed(10, "determinism", 120.0, [&] {
        detail::Check c;
        AcceptanceReport again = run_core_acceptance(field);
        c.expect(again.to_text() == first_text, "second run differs");
        const Window w = Window::square(-6, 6);
        const DiagramData d1 = six_ring_diagram(0, w), d2 = six_ring_diagram(0, w);
        c.expect(to_ascii(d1) == to_ascii(d2) && to_svg(d1) == to_svg(d2), "diagram bytes differ");
        c.expect(recount_ascii(to_ascii(d1), d1.regions, w).passed, "ascii recount");
        c.expect(recount_svg(to_svg(d1), d1.regions, w).passed, "svg recount");
        const DiagramData a = support_diagram({standard_rings(0).a}, Window::square(-4, 4));
        c.expect(a.cells.size() == 14, "A in [-4,4)^2 has " + std::to_string(a.cells.size()) + " cells");
        return c;
    }, "repeat run byte-identical; diagrams stable and recounted");
}

inline AcceptanceReport run_acceptance(FieldSpec field = {}) {
    AcceptanceReport r = run_core_acceptance(field);
    r.criteria.push_back(criterion_determinism(field, r.to_text()));
    return r;
}

} // namespace krich
