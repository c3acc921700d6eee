#include "krich/field.hpp"

#include <gtest/gtest.h>

using namespace krich;

TEST(FieldSpec, RejectsComposite) {
    EXPECT_THROW(FieldSpec::prime(1), Error);
    EXPECT_THROW(FieldSpec::prime(9), Error);
    EXPECT_THROW(FieldSpec::prime(1ULL << 31), Error);
    EXPECT_EQ(FieldSpec::prime(101).characteristic, 101u);
    EXPECT_EQ(FieldSpec::prime(7).name(), "F_7");
    EXPECT_EQ(FieldSpec::rationals().name(), "Q");
}

TEST(Scalar, RationalsStayReduced) {
    const FieldSpec q;
    const Scalar a = parse_scalar(q, "6/8");
    EXPECT_EQ(a.to_string(), "3/4");
    EXPECT_EQ((a + parse_scalar(q, "1/4")).to_string(), "1");
    EXPECT_EQ((a * parse_scalar(q, "-4/3")).to_string(), "-1");
    EXPECT_EQ((a / a).to_string(), "1");
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ(parse_scalar(q, "-2/-4").to_string(), "1/2");
}

TEST(Scalar, PrimeFieldResidues) {
    const FieldSpec f = FieldSpec::prime(7);
    EXPECT_EQ(Scalar(f, -1).residue(), 6u);
    EXPECT_EQ(Scalar(f, 3).inverse().residue(), 5u);
    EXPECT_EQ(parse_scalar(f, "1/2").residue(), 4u);
    EXPECT_THROW(parse_scalar(f, "1/7"), Error);
    EXPECT_THROW(Scalar::zero(f).inverse(), Error);
}

TEST(Scalar, FieldMismatchIsAnError) {
    try {
        (void)(Scalar(FieldSpec{}, 1) + Scalar(FieldSpec::prime(5), 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::field_mismatch);
    }
}

TEST(Scalar, ReductionAgreesWithModularArithmetic) {
    const FieldSpec q, f = FieldSpec::prime(101);
    for (long a = -20; a <= 20; ++a)
        for (long b = 1; b <= 20; ++b) {
            const Scalar x = parse_scalar(q, std::to_string(a) + "/" + std::to_string(b));
            const Scalar y = reduce(x, f);
            EXPECT_EQ((y * Scalar(f, b)).residue(), Scalar(f, a).residue());
        }
}

TEST(Scalar, ParseErrors) {
    EXPECT_THROW(parse_scalar(FieldSpec{}, "abc"), Error);
    EXPECT_THROW(parse_scalar(FieldSpec{}, "1/0"), Error);
    EXPECT_THROW(parse_scalar(FieldSpec{}, ""), Error);
}
