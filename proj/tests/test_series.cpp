#include "krich/series.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace krich;

namespace {

const FieldSpec Q;

LaurentSeries1 S(std::string_view text) { return parse_series(Q, text); }

// True when a and b agree on every coefficient both determine.
bool agree_on_overlap(const LaurentSeries1& a, const LaurentSeries1& b) {
    const Order h = std::min(a.known_below(), b.known_below());
    const Order lo = std::min(a.min_order(), b.min_order());
    for (Order n = lo; n < h && n < lo + 200; ++n)
        if (!(a.coefficient(n) == b.coefficient(n)))
            return false;
    return true;
}

LaurentSeries1 random_series(std::mt19937& rng, FieldSpec f) {
    std::uniform_int_distribution<long> c(-3, 3);
    std::uniform_int_distribution<int> lo(-3, 1), len(1, 5), prec(2, 6);
    const Order start = lo(rng);
    std::map<Order, Scalar> terms;
    for (int k = 0; k < len(rng); ++k)
        terms.emplace(start + k, Scalar(f, c(rng)));
    terms[start] = Scalar(f, 1);
    return LaurentSeries1::from_terms(f, terms, start + prec(rng));
}

} // namespace

TEST(SeriesLiteral, RoundTrip) {
    for (const char* text : {"z^-2 + 3*z^-1 + 1/2 + O(z^4)", "1 - z + z^2", "0", "O(z^3)",
                             "-1/3*z^-5 + O(z^-1)", "z + O(z^2)"})
        EXPECT_EQ(S(text).to_string(), text);
    EXPECT_THROW(S("z^-2 +"), Error);
    EXPECT_THROW(S("z^2 + z^1"), Error);
}

TEST(SeriesAdd, CancellationDropsValuationFlag) {
    const LaurentSeries1 sum = S("z^-1 + 1 + O(z^2)") + S("-z^-1 + O(z^3)");
    EXPECT_EQ(sum.to_string(), "1 + O(z^2)");
    EXPECT_EQ(sum.known_below(), 2);
    EXPECT_EQ(sum.min_order(), -1);
    EXPECT_FALSE(sum.has_exact_valuation());
    EXPECT_TRUE(sum.normalized().has_exact_valuation());
}

TEST(SeriesAdd, IdentityAndPrecision) {
    const LaurentSeries1 a = S("z^-2 + 3*z^-1 + 1/2 + O(z^4)");
    EXPECT_EQ(a + LaurentSeries1::zero(Q), a);
    const LaurentSeries1 b = S("1 + z + O(z^3)") + S("1 - z + O(z^5)");
    EXPECT_EQ(b.to_string(), "2 + O(z^3)");
}

TEST(SeriesMul, PrecisionShrinks) {
    const LaurentSeries1 a = S("z^-1 + 1 + z + O(z^2)");
    const LaurentSeries1 sq = a * a;
    EXPECT_EQ(sq.to_string(), "z^-2 + 2*z^-1 + 3 + O(z^1)");
    EXPECT_EQ(sq.min_order(), -2);
    EXPECT_EQ(a * LaurentSeries1::constant(Q, 1), a);
    EXPECT_EQ((S("1 - z + O(z^3)") * S("1 + z + z^2 + O(z^3)")).to_string(), "1 + O(z^3)");
}

TEST(SeriesInvert, Examples) {
    EXPECT_EQ(invert(S("1 - z + O(z^3)")).to_string(), "1 + z + z^2 + O(z^3)");
    EXPECT_EQ(invert(S("z")).to_string(), "z^-1");
    const LaurentSeries1 a = S("z^-2 + 1");
    const LaurentSeries1 inv = invert(a, 12);
    EXPECT_EQ(inv.min_order(), 2);
    const LaurentSeries1 back = a * inv;
    EXPECT_GE(back.known_below(), 10);
    EXPECT_TRUE(agree_on_overlap(back, LaurentSeries1::constant(Q, 1)));
    EXPECT_EQ(inv.to_string(), "z^2 - z^4 + z^6 - z^8 + z^10 + O(z^12)");
}

TEST(SeriesInvert, Errors) {
    try {
        invert(S("z^-1 + 1 + O(z^2)") + S("-z^-1 + O(z^2)"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::non_unit);
    }
    EXPECT_THROW(invert(S("O(z^2)")), Error);
    try {
        invert(S("1 + z"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::precision_exhausted);
    }
}

TEST(SeriesProperties, RingLawsOnOverlap) {
    std::mt19937 rng(17);
    for (const FieldSpec f : {FieldSpec{}, FieldSpec::prime(7)})
        for (int t = 0; t < 200; ++t) {
            const auto a = random_series(rng, f), b = random_series(rng, f),
                       c = random_series(rng, f);
            EXPECT_TRUE(agree_on_overlap((a * b) * c, a * (b * c)));
            EXPECT_TRUE(agree_on_overlap(a * (b + c), a * b + a * c));
            EXPECT_TRUE(agree_on_overlap(a + b, b + a));
            EXPECT_TRUE(agree_on_overlap(a * b, b * a));
        }
}

TEST(SeriesProperties, InverseMultipliesBackToOne) {
    std::mt19937 rng(23);
    for (int t = 0; t < 100; ++t) {
        const auto a = random_series(rng, Q);
        const auto inv = invert(a);
        EXPECT_EQ(inv.min_order(), -a.min_order());
        const auto back = a * inv;
        EXPECT_TRUE(agree_on_overlap(back, LaurentSeries1::constant(Q, 1)));
        EXPECT_GE(back.known_below(), 1);
    }
}

TEST(SeriesProperties, MorePrecisionNeverChangesKnownCoefficients) {
    const LaurentSeries1 exact = S("z^-2 + 1 + z^3");
    const LaurentSeries1 lo = invert(exact, 6), hi = invert(exact, 20);
    EXPECT_TRUE(agree_on_overlap(lo, hi));
    EXPECT_TRUE(agree_on_overlap(lo * lo, hi * hi));
}

TEST(SeriesErrors, FieldMismatch) {
    EXPECT_THROW(S("1") + parse_series(FieldSpec::prime(5), "1"), Error);
    EXPECT_THROW(S("1 + O(z^2)").coefficient(2), Error);
}
