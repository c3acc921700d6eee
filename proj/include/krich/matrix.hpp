#pragma once

#include "krich/field.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace krich {

/// Dense row-major matrix over one FieldSpec. Shapes with zero rows or zero
/// columns are legal and stand for maps from or to the zero space.
class Matrix {
  public:
    Matrix() = default;

    Matrix(FieldSpec field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(field)) {}

    static Matrix identity(FieldSpec field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i, Scalar::one(field));
        return m;
    }

    static Matrix from_rows(FieldSpec field, std::initializer_list<std::initializer_list<long>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        Matrix m(field, r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c)
                throw Error(ErrorCode::dimension_mismatch, "ragged row list");
            std::size_t j = 0;
            for (long v : row)
                m.set(i, j++, Scalar(field, v));
            ++i;
        }
        return m;
    }

    const FieldSpec& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    const Scalar& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void set(std::size_t r, std::size_t c, Scalar value) {
        if (value.field() != field_)
            throw Error(ErrorCode::field_mismatch, "entry field " + value.field().name() +
                                                       " in matrix over " + field_.name());
        data_[r * cols_ + c] = std::move(value);
    }

    std::span<const Scalar> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    bool is_zero() const {
        for (const auto& s : data_)
            if (!s.is_zero())
                return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t.data_[j * rows_ + i] = at(i, j);
        return t;
    }

    /// Rows [first, first + count) as a new matrix.
    Matrix row_block(std::size_t first, std::size_t count) const {
        Matrix m(field_, count, cols_);
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m.data_[i * cols_ + j] = at(first + i, j);
        return m;
    }

    /// Columns [first, first + count) as a new matrix.
    Matrix col_block(std::size_t first, std::size_t count) const {
        Matrix m(field_, rows_, count);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < count; ++j)
                m.data_[i * count + j] = at(i, first + j);
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.field_ != b.field_)
            throw Error(ErrorCode::field_mismatch, "matrix product across fields");
        if (a.cols_ != b.rows_)
            throw Error(ErrorCode::dimension_mismatch,
                        "product of " + a.shape() + " and " + b.shape());
        Matrix m(a.field_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Scalar& aik = a.at(i, k);
                if (aik.is_zero())
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b.at(k, j).is_zero())
                        m.data_[i * b.cols_ + j] += aik * b.at(k, j);
            }
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
               a.data_ == b.data_;
    }

    std::string shape() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

  private:
    FieldSpec field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

struct Echelon {
    Matrix matrix;
    std::vector<std::size_t> pivots;
};

namespace detail {

// Fraction-free Gauss-Jordan over Z: every row is kept primitive (content 1),
// which bounds the entry growth; pivot rows are normalised to 1 only at the end.
inline Echelon rref_rationals(const Matrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<mpz_class>> a(rows);
    for (auto& row : a)
        row.resize(cols);
    auto make_primitive = [](std::vector<mpz_class>& row) {
        mpz_class g = 0;
        for (const auto& v : row)
            if (sgn(v) != 0) {
                g = gcd(g, v);
                if (g == 1)
                    return;
            }
        if (g > 1)
            for (auto& v : row)
                if (sgn(v) != 0)
                    mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    };
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < cols; ++j)
            if (!m.at(i, j).is_zero())
                l = lcm(l, m.at(i, j).rational().get_den());
        for (std::size_t j = 0; j < cols; ++j)
            if (!m.at(i, j).is_zero())
                a[i][j] = m.at(i, j).rational().get_num() * (l / m.at(i, j).rational().get_den());
        make_primitive(a[i]);
    }

    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    mpz_class t;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rows;
        for (std::size_t i = rank; i < rows; ++i)
            if (sgn(a[i][c]) != 0 && (p == rows || mpz_cmpabs(a[i][c].get_mpz_t(), a[p][c].get_mpz_t()) < 0))
                p = i;
        if (p == rows)
            continue;
        std::swap(a[p], a[rank]);
        const auto& prow = a[rank];
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || sgn(a[i][c]) == 0)
                continue;
            const mpz_class g = gcd(prow[c], a[i][c]);
            const mpz_class fp = prow[c] / g;
            const mpz_class fi = a[i][c] / g;
            auto& row = a[i];
            for (std::size_t j = 0; j < cols; ++j) {
                if (sgn(prow[j]) == 0) {
                    if (sgn(row[j]) != 0)
                        row[j] *= fp;
                    continue;
                }
                t = fi * prow[j];
                row[j] *= fp;
                row[j] -= t;
            }
            make_primitive(row);
        }
        pivots.push_back(c);
        ++rank;
    }

    Matrix out(m.field(), rows, cols);
    for (std::size_t i = 0; i < rank; ++i) {
        const mpz_class& lead = a[i][pivots[i]];
        for (std::size_t j = 0; j < cols; ++j)
            if (sgn(a[i][j]) != 0) {
                mpq_class q(a[i][j], lead);
                q.canonicalize();
                out.set(i, j, Scalar::from_rational(m.field(), q));
            }
    }
    return {std::move(out), std::move(pivots)};
}

inline Echelon rref_prime(const Matrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const std::uint64_t p = m.field().characteristic;
    std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            a[i][j] = m.at(i, j).residue();

    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = rank; i < rows; ++i)
            if (a[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv == rows)
            continue;
        std::swap(a[piv], a[rank]);
        auto& prow = a[rank];
        const std::uint64_t inv = Scalar(m.field(), static_cast<long>(prow[c])).inverse().residue();
        for (auto& v : prow)
            v = (v * inv) % p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a[i][c] == 0)
                continue;
            const std::uint64_t f = a[i][c];
            auto& row = a[i];
            for (std::size_t j = c; j < cols; ++j)
                if (prow[j] != 0)
                    row[j] = (row[j] + (p - (f * prow[j]) % p)) % p;
        }
        pivots.push_back(c);
        ++rank;
    }

    Matrix out(m.field(), rows, cols);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (a[i][j] != 0)
                out.set(i, j, Scalar(m.field(), static_cast<long>(a[i][j])));
    return {std::move(out), std::move(pivots)};
}

} // namespace detail

/// Reduced row-echelon form. Zero rows are kept at the bottom so the shape is
/// unchanged; the row space is preserved.
inline Echelon rref(const Matrix& m) {
    if (m.empty())
        return {m, {}};
    return m.field().is_rationals() ? detail::rref_rationals(m) : detail::rref_prime(m);
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Rows form a basis of { v : m * v^T = 0 }.
inline Matrix kernel_basis(const Matrix& m) {
    const Echelon e = rref(m);
    const std::size_t cols = m.cols();
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : e.pivots)
        is_pivot[c] = true;
    Matrix k(m.field(), cols - e.pivots.size(), cols);
    std::size_t r = 0;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        k.set(r, f, Scalar::one(m.field()));
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            if (!e.matrix.at(i, f).is_zero())
                k.set(r, e.pivots[i], -e.matrix.at(i, f));
        ++r;
    }
    return k;
}

struct Cohomology3 {
    std::size_t h0 = 0;
    std::size_t h1 = 0;
    std::size_t h2 = 0;
    friend bool operator==(const Cohomology3&, const Cohomology3&) = default;
};

/// Cohomology of V0 --d0--> V1 --d1--> V2, with d0 of shape dim V1 x dim V0
/// and d1 of shape dim V2 x dim V1 (matrices act on column vectors).
inline Cohomology3 complex_cohomology(const Matrix& d0, const Matrix& d1) {
    if (d0.field() != d1.field())
        throw Error(ErrorCode::field_mismatch, "differentials over different fields");
    if (d1.cols() != d0.rows())
        throw Error(ErrorCode::dimension_mismatch,
                    "d0 is " + d0.shape() + " but d1 is " + d1.shape());
    if (!(d1 * d0).is_zero())
        throw Error(ErrorCode::composition_nonzero, "d1 * d0 != 0");
    const std::size_t r0 = rank(d0);
    const std::size_t r1 = rank(d1);
    return {d0.cols() - r0, d0.rows() - r1 - r0, d1.rows() - r1};
}

} // namespace krich
