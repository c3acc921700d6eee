#include "krich/matrix.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace krich;

namespace {

// Cofactor expansion, independent of elimination.
Scalar determinant(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n == 1)
        return m.at(0, 0);
    Scalar det = Scalar::zero(m.field());
    for (std::size_t c = 0; c < n; ++c) {
        Matrix minor(m.field(), n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0, k = 0; j < n; ++j)
                if (j != c)
                    minor.set(i - 1, k++, m.at(i, j));
        const Scalar term = m.at(0, c) * determinant(minor);
        det = c % 2 ? det - term : det + term;
    }
    return det;
}

Matrix random_matrix(FieldSpec f, std::size_t r, std::size_t c, std::mt19937& rng, int spread = 3) {
    std::uniform_int_distribution<long> d(-spread, spread);
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, Scalar(f, d(rng)));
    return m;
}

Matrix reduce_matrix(const Matrix& m, FieldSpec f) {
    Matrix out(f, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.set(i, j, reduce(m.at(i, j), f));
    return out;
}

} // namespace

TEST(Rref, RankOneDependency) {
    const FieldSpec q;
    const Echelon e = rref(Matrix::from_rows(q, {{1, 2}, {2, 4}}));
    EXPECT_EQ(e.matrix, Matrix::from_rows(q, {{1, 2}, {0, 0}}));
    EXPECT_EQ(e.pivots, std::vector<std::size_t>{0});
}

TEST(Rref, IdentityIsFixed) {
    const FieldSpec q;
    const Echelon e = rref(Matrix::identity(q, 3));
    EXPECT_EQ(e.matrix, Matrix::identity(q, 3));
    EXPECT_EQ(e.pivots, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Rref, PermutationOverF2) {
    const FieldSpec f = FieldSpec::prime(2);
    const Echelon e = rref(Matrix::from_rows(f, {{0, 1}, {1, 0}}));
    EXPECT_EQ(e.matrix, Matrix::identity(f, 2));
    EXPECT_EQ(e.pivots, (std::vector<std::size_t>{0, 1}));
}

TEST(Rref, EmptyMatrices) {
    const FieldSpec q;
    EXPECT_EQ(rank(Matrix(q, 0, 3)), 0u);
    EXPECT_EQ(rank(Matrix(q, 3, 0)), 0u);
    EXPECT_EQ(kernel_basis(Matrix(q, 0, 3)).rows(), 3u);
}

TEST(Rank, ZeroAndDependent) {
    const FieldSpec q;
    EXPECT_EQ(rank(Matrix::from_rows(q, {{1, 2}, {2, 4}})), 1u);
    EXPECT_EQ(rank(Matrix(q, 2, 3)), 0u);
}

TEST(Rank, NonsingularMatchesCofactorDeterminant) {
    const FieldSpec q;
    std::mt19937 rng(7);
    int nonsingular = 0;
    for (int t = 0; t < 40; ++t) {
        const Matrix m = random_matrix(q, 5, 5, rng);
        const bool det_nonzero = !determinant(m).is_zero();
        EXPECT_EQ(rank(m) == 5, det_nonzero);
        nonsingular += det_nonzero;
    }
    EXPECT_GT(nonsingular, 10);
}

TEST(Kernel, Examples) {
    const FieldSpec q;
    const Matrix k = kernel_basis(Matrix::from_rows(q, {{1, 1}}));
    ASSERT_EQ(k.rows(), 1u);
    EXPECT_EQ(k.at(0, 0), -k.at(0, 1));
    EXPECT_FALSE(k.at(0, 0).is_zero());
    EXPECT_EQ(kernel_basis(Matrix::identity(q, 4)).rows(), 0u);
    const Matrix m = Matrix::from_rows(q, {{1, 2, 3}, {2, 4, 6}});
    const Matrix km = kernel_basis(m);
    EXPECT_EQ(km.rows(), 2u);
    EXPECT_TRUE((m * km.transpose()).is_zero());
    EXPECT_EQ(rank(km), 2u);
}

TEST(Properties, RankNullityIdempotenceAndKernel) {
    std::mt19937 rng(11);
    for (const FieldSpec f : {FieldSpec{}, FieldSpec::prime(7), FieldSpec::prime(101)})
        for (int t = 0; t < 30; ++t) {
            std::uniform_int_distribution<std::size_t> dim(1, 7);
            const Matrix m = random_matrix(f, dim(rng), dim(rng), rng, 2);
            const Echelon e = rref(m);
            EXPECT_EQ(rref(e.matrix).matrix, e.matrix);
            const Matrix k = kernel_basis(m);
            EXPECT_EQ(k.rows() + e.pivots.size(), m.cols());
            if (k.rows() > 0) {
                EXPECT_TRUE((m * k.transpose()).is_zero());
                EXPECT_EQ(rank(k), k.rows());
            }
            // Row space preserved: stacking the rref onto m adds no rank.
            Matrix stacked(f, 2 * m.rows(), m.cols());
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    stacked.set(i, j, m.at(i, j));
                    stacked.set(m.rows() + i, j, e.matrix.at(i, j));
                }
            EXPECT_EQ(rank(stacked), e.pivots.size());
        }
}

TEST(Properties, PrimeFieldAgreesWithReducedRationalComputation) {
    std::mt19937 rng(5);
    const FieldSpec q;
    int compared = 0;
    for (const std::uint64_t p : {101ULL, 1009ULL}) {
        const FieldSpec f = FieldSpec::prime(p);
        for (int t = 0; t < 30; ++t) {
            const Matrix m = random_matrix(q, 4, 6, rng, 2);
            const Echelon eq = rref(m);
            const Echelon ef = rref(reduce_matrix(m, f));
            bool clean = true;
            for (std::size_t i = 0; i < eq.matrix.rows(); ++i)
                for (std::size_t j = 0; j < eq.matrix.cols(); ++j)
                    if (mpz_divisible_ui_p(eq.matrix.at(i, j).rational().get_den_mpz_t(), p))
                        clean = false;
            if (!clean || ef.pivots != eq.pivots)
                continue;
            EXPECT_EQ(ef.matrix, reduce_matrix(eq.matrix, f));
            ++compared;
        }
    }
    EXPECT_GE(compared, 50);
}

TEST(ComplexCohomology, Examples) {
    const FieldSpec q;
    const Cohomology3 zero = complex_cohomology(Matrix(q, 1, 1), Matrix(q, 1, 1));
    EXPECT_EQ(zero.h0, 1u);
    EXPECT_EQ(zero.h1, 1u);
    EXPECT_EQ(zero.h2, 1u);

    const Matrix d0 = Matrix::from_rows(q, {{1, 0}, {0, 1}, {1, 1}, {0, 0}, {0, 0}});
    const Matrix d1 = Matrix::from_rows(q, {{1, 1, -1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}});
    EXPECT_EQ(rank(d0), 2u);
    EXPECT_EQ(rank(d1), 3u);
    const Cohomology3 exact = complex_cohomology(d0, d1);
    EXPECT_EQ(exact.h0, 0u);
    EXPECT_EQ(exact.h1, 0u);
    EXPECT_EQ(exact.h2, 0u);
}

TEST(ComplexCohomology, Errors) {
    const FieldSpec q;
    try {
        complex_cohomology(Matrix::identity(q, 2), Matrix::identity(q, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::composition_nonzero);
    }
    try {
        complex_cohomology(Matrix(q, 2, 1), Matrix(q, 1, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
    }
}

TEST(ComplexCohomology, EulerAdditivityOnRandomComplexes) {
    std::mt19937 rng(3);
    const FieldSpec q;
    for (int t = 0; t < 25; ++t) {
        // d0 = k * c with c = a basis of the kernel of d1, so d1 d0 = 0.
        const Matrix d1 = random_matrix(q, 3, 6, rng, 2);
        const Matrix basis = kernel_basis(d1).transpose();
        const Matrix mix = random_matrix(q, basis.cols(), 4, rng, 2);
        const Matrix d0 = basis * mix;
        const Cohomology3 h = complex_cohomology(d0, d1);
        EXPECT_EQ(static_cast<long>(h.h0) - static_cast<long>(h.h1) + static_cast<long>(h.h2),
                  4 - 6 + 3);
        EXPECT_EQ(h.h0, 4 - rank(d0));
    }
}
