#pragma once

// Small dense complex matrices at configurable precision.

#include "esfr/numerics/big_real.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace esfr {

class BigComplexMatrix {
public:
    BigComplexMatrix(std::size_t rows, std::size_t cols, Bits bits = kDefaultPrecision)
        : rows_(rows), cols_(cols), bits_(bits), data_(rows * cols, BigComplex(bits))
    {
    }

    static BigComplexMatrix identity(std::size_t n, Bits bits)
    {
        BigComplexMatrix out(n, n, bits);
        for (std::size_t i = 0; i < n; ++i) out.set(i, i, BigComplex(BigReal(1L, bits)));
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    Bits precision() const { return bits_; }

    const BigComplex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    /// Stores the entry rounded to the matrix precision.
    void set(std::size_t i, std::size_t j, const BigComplex& value)
    {
        data_[i * cols_ + j] = value.precision() == bits_ ? value : value.rounded(bits_);
    }

    BigReal frobenius_norm() const
    {
        BigReal acc(bits_);
        for (const auto& z : data_) acc += norm(z);
        return sqrt(acc);
    }

    BigComplex trace() const
    {
        require_square("trace");
        BigComplex acc(bits_);
        for (std::size_t i = 0; i < rows_; ++i) acc += (*this)(i, i);
        return acc;
    }

    friend BigComplexMatrix operator*(const BigComplexMatrix& a, const BigComplexMatrix& b)
    {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        BigComplexMatrix out(a.rows_, b.cols_, std::max(a.bits_, b.bits_));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) {
                BigComplex acc(out.bits_);
                for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
                out.set(i, j, acc);
            }
        return out;
    }

    friend BigComplexMatrix operator+(const BigComplexMatrix& a, const BigComplexMatrix& b)
    {
        return combine(a, b, 1);
    }
    friend BigComplexMatrix operator-(const BigComplexMatrix& a, const BigComplexMatrix& b)
    {
        return combine(a, b, -1);
    }
    friend BigComplexMatrix operator*(const BigComplex& s, const BigComplexMatrix& a)
    {
        BigComplexMatrix out(a.rows_, a.cols_, a.bits_);
        for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = (s * a.data_[k]).rounded(a.bits_);
        return out;
    }

    std::vector<BigComplex> apply(const std::vector<BigComplex>& x) const
    {
        if (x.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
        std::vector<BigComplex> y(rows_, BigComplex(bits_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    void require_square(const char* what) const
    {
        if (!square()) throw std::invalid_argument(std::string(what) + " requires a square matrix");
    }

private:
    static BigComplexMatrix combine(const BigComplexMatrix& a, const BigComplexMatrix& b, int sign)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
        BigComplexMatrix out(a.rows_, a.cols_, std::max(a.bits_, b.bits_));
        for (std::size_t k = 0; k < a.data_.size(); ++k)
            out.data_[k] = (sign > 0 ? a.data_[k] + b.data_[k] : a.data_[k] - b.data_[k]).rounded(out.bits_);
        return out;
    }

    std::size_t rows_;
    std::size_t cols_;
    Bits bits_;
    std::vector<BigComplex> data_;
};

namespace detail {

/// In-place LU with partial pivoting. Returns the permutation sign, or 0 when
/// a pivot column is exactly zero.
inline int lu_decompose(BigComplexMatrix& a, std::vector<std::size_t>& perm)
{
    const std::size_t n = a.rows();
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        BigReal best = abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            BigReal m = abs(a(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best.is_zero()) return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                BigComplex tmp = a(k, j);
                a.set(k, j, a(piv, j));
                a.set(piv, j, tmp);
            }
            std::swap(perm[k], perm[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            BigComplex factor = a(i, k) / a(k, k);
            a.set(i, k, factor);
            for (std::size_t j = k + 1; j < n; ++j) a.set(i, j, a(i, j) - factor * a(k, j));
        }
    }
    return sign;
}

}  // namespace detail

/// Determinant by partially pivoted elimination at the matrix precision.
inline BigComplex determinant(const BigComplexMatrix& a)
{
    a.require_square("determinant");
    BigComplexMatrix lu = a;
    std::vector<std::size_t> perm;
    int sign = detail::lu_decompose(lu, perm);
    if (sign == 0) return BigComplex(a.precision());
    BigComplex det(BigReal(static_cast<long>(sign), a.precision()));
    for (std::size_t i = 0; i < a.rows(); ++i) det *= lu(i, i);
    return det;
}

/// Solves a x = b. A singular pivot is nudged by the unit roundoff, which is
/// what inverse iteration wants.
inline std::vector<BigComplex> solve(const BigComplexMatrix& a, const std::vector<BigComplex>& b)
{
    a.require_square("solve");
    const std::size_t n = a.rows();
    BigComplexMatrix lu = a;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    const BigReal tiny = epsilon(a.precision()) * max(a.frobenius_norm(), BigReal(1L, a.precision()));
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        BigReal best = abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            BigReal m = abs(lu(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                BigComplex tmp = lu(k, j);
                lu.set(k, j, lu(piv, j));
                lu.set(piv, j, tmp);
            }
            std::swap(perm[k], perm[piv]);
        }
        if (abs(lu(k, k)) < tiny) lu.set(k, k, BigComplex(tiny));
        for (std::size_t i = k + 1; i < n; ++i) {
            BigComplex factor = lu(i, k) / lu(k, k);
            lu.set(i, k, factor);
            for (std::size_t j = k + 1; j < n; ++j) lu.set(i, j, lu(i, j) - factor * lu(k, j));
        }
    }
    std::vector<BigComplex> x(n, BigComplex(a.precision()));
    for (std::size_t i = 0; i < n; ++i) {
        BigComplex acc = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * x[j];
        x[i] = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        BigComplex acc = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(ii, j) * x[j];
        x[ii] = acc / lu(ii, ii);
    }
    return x;
}

}  // namespace esfr
