#include "krich/lattice.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace krich;

namespace {

constexpr std::int64_t kProbe = 14;

bool same_points(const LatticeRegion& a, const LatticeRegion& b, std::int64_t r = kProbe) {
    for (std::int64_t i = -r; i <= r; ++i)
        for (std::int64_t j = -r; j <= r; ++j)
            if (a.contains(i, j) != b.contains(i, j))
                return false;
    return true;
}

std::vector<Constraint> random_constraints(std::mt19937& rng) {
    std::uniform_int_distribution<int> unit(-1, 1), count(0, 4), sense(0, 1);
    std::uniform_int_distribution<std::int64_t> offset(-4, 4);
    std::vector<Constraint> cs;
    for (int k = count(rng); k > 0; --k) {
        int a = unit(rng), b = unit(rng);
        if (a == 0 && b == 0)
            a = 1;
        cs.push_back(sense(rng) ? ge(a, b, offset(rng)) : le(a, b, offset(rng)));
    }
    return cs;
}

} // namespace

TEST(StandardRings, TwistZeroTable) {
    const StandardRings r = standard_rings(0);
    EXPECT_EQ(r.b_p.to_string(), "{i >= 0}");
    EXPECT_EQ(r.b_c.to_string(), "{i + j <= 0}");
    EXPECT_EQ(r.o_pc.to_string(), "{j >= 0}");
    EXPECT_EQ(r.a.to_string(), "{i >= 0, i + j <= 0}");
    EXPECT_EQ(r.a_c.to_string(), "{j >= 0, i + j <= 0}");
    EXPECT_EQ(r.o_p.to_string(), "{i >= 0, j >= 0}");
    EXPECT_TRUE(r.a.contains(2, -2));
    EXPECT_FALSE(r.a.contains(-1, 0));
}

TEST(StandardRings, NegativeTwistEmptiesFirstQuadrant) {
    const StandardRings r = standard_rings(-3);
    EXPECT_EQ(r.a.to_string(), "{i >= 0, i + j <= -3}");
    EXPECT_TRUE(window_points(r.a, Window::square(0, 20)).empty());
    EXPECT_EQ(r.b_p, standard_rings(5).b_p);
    EXPECT_EQ(r.o_p, standard_rings(5).o_p);
}

TEST(Intersect, TableIdentities) {
    for (std::int64_t d = -10; d <= 10; ++d) {
        const StandardRings r = standard_rings(d);
        EXPECT_EQ(intersect(r.b_p, r.b_c), r.a);
        EXPECT_EQ(intersect(r.b_c, r.o_pc), r.a_c);
        EXPECT_EQ(intersect(r.b_p, r.o_pc), r.o_p);
    }
    const LatticeRegion a = standard_rings(0).a;
    EXPECT_EQ(intersect(a, LatticeRegion::full()), a);
}

TEST(Row, Examples) {
    const StandardRings r = standard_rings(0);
    EXPECT_EQ(r.b_c.row(2), (RowInterval{RowInterval::Kind::lower_unbounded, 0, -2}));
    EXPECT_EQ(r.a.row(-3), (RowInterval{RowInterval::Kind::finite, 0, 3}));
    EXPECT_EQ(r.a.row(1).kind, RowInterval::Kind::empty);
    EXPECT_EQ(r.o_pc.row(0).kind, RowInterval::Kind::full);
    EXPECT_EQ(r.o_pc.row(-1).kind, RowInterval::Kind::empty);
    for (std::int64_t n = -4; n <= 4; ++n)
        EXPECT_EQ(intersect(r.b_p, filtration_region(n)).row(n),
                  (RowInterval{RowInterval::Kind::upper_unbounded, 0, 0}));
}

TEST(WindowPoints, Counts) {
    const StandardRings r = standard_rings(0);
    // Sum over i = 0..3 of (5 - i) points with j in [-4, -i].
    EXPECT_EQ(window_points(r.a, Window::square(-4, 4)).size(), 14u);
    EXPECT_EQ(window_points(r.o_p, Window::square(0, 2)).size(), 4u);
    EXPECT_TRUE(window_points(LatticeRegion::empty(), Window::square(-4, 4)).empty());
    const auto pts = window_points(r.o_p, Window::square(0, 2));
    EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
}

TEST(Filtration, Nesting) {
    EXPECT_EQ(filtration_region(0).to_string(), "{j >= 0}");
    EXPECT_EQ(intersect(filtration_region(0), standard_rings(0).o_pc),
              standard_rings(0).o_pc);
    EXPECT_EQ(intersect(filtration_region(2), filtration_region(1)), filtration_region(2));
    EXPECT_EQ(intersect(filtration_region(1), filtration_region(0)), filtration_region(1));
}

TEST(Count, FiniteAndInfinite) {
    EXPECT_EQ(LatticeRegion::from_constraints("", {ge(1, 0, 0), ge(0, 1, 0), le(1, 1, 2)}).count(),
              6);
    EXPECT_FALSE(standard_rings(0).a.count().has_value());
    EXPECT_EQ(LatticeRegion::empty().count(), 0);
    EXPECT_TRUE(LatticeRegion::from_constraints("", {ge(1, 0, 1), le(1, 0, 0)}).is_empty());
}

TEST(Properties, NormalizationMatchesMembership) {
    std::mt19937 rng(99);
    for (int t = 0; t < 400; ++t) {
        const auto c1 = random_constraints(rng), c2 = random_constraints(rng);
        const LatticeRegion a = LatticeRegion::from_constraints("", c1);
        const LatticeRegion b = LatticeRegion::from_constraints("", c2);
        for (std::int64_t i = -kProbe; i <= kProbe; ++i)
            for (std::int64_t j = -kProbe; j <= kProbe; ++j) {
                bool raw = true;
                for (const auto& k : c1)
                    raw = raw && k.holds(i, j);
                ASSERT_EQ(a.contains(i, j), raw);
            }
        // Offsets are small, so every region that differs does so near the origin.
        EXPECT_EQ(a == b, same_points(a, b));
        const LatticeRegion ab = intersect(a, b), ba = intersect(b, a);
        EXPECT_EQ(ab, ba);
        EXPECT_EQ(intersect(ab, a), ab);
        EXPECT_EQ(intersect(a, a), a);
        for (std::int64_t i = -kProbe; i <= kProbe; ++i)
            for (std::int64_t j = -kProbe; j <= kProbe; ++j)
                ASSERT_EQ(ab.contains(i, j), a.contains(i, j) && b.contains(i, j));
    }
}

TEST(Properties, RowsAgreeWithMembership) {
    std::mt19937 rng(5);
    for (int t = 0; t < 200; ++t) {
        const LatticeRegion r = LatticeRegion::from_constraints("", random_constraints(rng));
        for (std::int64_t j = -8; j <= 8; ++j) {
            const RowInterval row = r.row(j);
            for (std::int64_t i = -kProbe; i <= kProbe; ++i)
                ASSERT_EQ(row.contains(i), r.contains(i, j));
        }
    }
}

TEST(Properties, ComplementPartitionsThePlane) {
    std::mt19937 rng(8);
    for (int t = 0; t < 200; ++t) {
        const LatticeRegion r = LatticeRegion::from_constraints("", random_constraints(rng));
        const auto pieces = r.complement();
        for (std::int64_t i = -kProbe; i <= kProbe; ++i)
            for (std::int64_t j = -kProbe; j <= kProbe; ++j) {
                int hits = r.contains(i, j) ? 1 : 0;
                for (const auto& p : pieces)
                    hits += p.contains(i, j) ? 1 : 0;
                ASSERT_EQ(hits, 1);
            }
    }
}

TEST(Properties, SupportAndNearestPoint) {
    std::mt19937 rng(12);
    for (int t = 0; t < 200; ++t) {
        const LatticeRegion r = LatticeRegion::from_constraints("", random_constraints(rng));
        if (r.is_empty())
            continue;
        const auto near = r.nearest_point();
        ASSERT_TRUE(near.has_value());
        EXPECT_TRUE(r.contains(*near));
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                if (a == 0 && b == 0)
                    continue;
                const auto s = r.support(a, b);
                if (!s)
                    continue;
                EXPECT_TRUE(r.contains(s->second));
                EXPECT_EQ(a * s->second.i + b * s->second.j, s->first);
                for (const auto& p : window_points(r, Window::square(-kProbe, kProbe)))
                    ASSERT_LE(a * p.i + b * p.j, s->first);
            }
    }
}

TEST(RankProfile, NeedsASummand) {
    EXPECT_THROW(RankProfile(std::vector<std::int64_t>{}), Error);
    EXPECT_EQ(RankProfile({0, -1}).rank(), 2u);
}
