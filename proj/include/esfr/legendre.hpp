#pragma once

// Exact Legendre machinery: polynomials with rational coefficients, truncated
// power series, Legendre polynomials and their derivatives, and the modified
// spherical Bessel series used to expand the exponential in the Legendre basis.

#include "esfr/numerics/big_real.hpp"
#include "esfr/numerics/rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace esfr {

/// Polynomial with exact rational coefficients; coeffs[k] multiplies x^k.
class ExactPoly {
public:
    ExactPoly() = default;
    explicit ExactPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static ExactPoly monomial(unsigned degree, const Rational& coeff = 1)
    {
        std::vector<Rational> c(degree + 1, Rational(0));
        c[degree] = coeff;
        return ExactPoly(std::move(c));
    }

    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
    Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }

    Rational operator()(const Rational& x) const
    {
        Rational acc = 0;
        for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
        return acc;
    }

    BigComplex operator()(const BigComplex& z) const
    {
        const Bits bits = z.precision();
        BigComplex acc(bits);
        for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + BigComplex(coeffs_[k], bits);
        return acc;
    }

    ExactPoly derivative() const
    {
        if (coeffs_.size() <= 1) return {};
        std::vector<Rational> out(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = coeffs_[k] * static_cast<long>(k);
        return ExactPoly(std::move(out));
    }

    ExactPoly derivative(unsigned order) const
    {
        ExactPoly out = *this;
        for (unsigned i = 0; i < order; ++i) out = out.derivative();
        return out;
    }

    /// p(-x)
    ExactPoly reflected() const
    {
        std::vector<Rational> out = coeffs_;
        for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
        return ExactPoly(std::move(out));
    }

    /// Exact definite integral over [a, b].
    Rational integrate(const Rational& a, const Rational& b) const
    {
        Rational acc = 0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            Rational n = static_cast<long>(k + 1);
            acc += coeffs_[k] * (pow(b, static_cast<unsigned>(k + 1)) - pow(a, static_cast<unsigned>(k + 1))) / n;
        }
        return acc;
    }

    friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b)
    {
        std::vector<Rational> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeff(k) + b.coeff(k);
        return ExactPoly(std::move(out));
    }
    friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b)
    {
        std::vector<Rational> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeff(k) - b.coeff(k);
        return ExactPoly(std::move(out));
    }
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return ExactPoly(std::move(out));
    }
    friend ExactPoly operator*(const Rational& s, const ExactPoly& a)
    {
        std::vector<Rational> out = a.coeffs_;
        for (auto& c : out) c *= s;
        return ExactPoly(std::move(out));
    }
    friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

/// Power series known exactly through z^order (coefficients 0..order).
class ExactSeries {
public:
    explicit ExactSeries(unsigned order) : coeffs_(order + 1, Rational(0)) {}
    ExactSeries(std::vector<Rational> coeffs, unsigned order) : coeffs_(std::move(coeffs))
    {
        coeffs_.resize(order + 1, Rational(0));
    }
    static ExactSeries from_poly(const ExactPoly& p, unsigned order)
    {
        std::vector<Rational> c(order + 1, Rational(0));
        for (unsigned k = 0; k <= order; ++k) c[k] = p.coeff(k);
        return ExactSeries(std::move(c), order);
    }

    unsigned order() const { return static_cast<unsigned>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& operator[](std::size_t k) const { return coeffs_.at(k); }
    Rational& operator[](std::size_t k) { return coeffs_.at(k); }

    /// Index of the first nonzero coefficient, if any within the known order.
    std::optional<unsigned> first_nonzero() const
    {
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            if (coeffs_[k] != 0) return static_cast<unsigned>(k);
        return std::nullopt;
    }

    ExactSeries truncated(unsigned order) const
    {
        std::vector<Rational> c(coeffs_.begin(), coeffs_.begin() + std::min<std::size_t>(order + 1, coeffs_.size()));
        return ExactSeries(std::move(c), std::min(order, this->order()));
    }

    /// f(s z)
    ExactSeries scaled_argument(const Rational& s) const
    {
        ExactSeries out = *this;
        Rational power = 1;
        for (auto& c : out.coeffs_) {
            c *= power;
            power *= s;
        }
        return out;
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    ExactSeries inverse() const
    {
        if (coeffs_[0] == 0) throw std::domain_error("series inverse needs a nonzero constant term");
        ExactSeries out(order());
        out.coeffs_[0] = 1 / coeffs_[0];
        for (unsigned k = 1; k <= order(); ++k) {
            Rational acc = 0;
            for (unsigned j = 1; j <= k; ++j) acc += coeffs_[j] * out.coeffs_[k - j];
            out.coeffs_[k] = -acc / coeffs_[0];
        }
        return out;
    }

    friend ExactSeries operator+(const ExactSeries& a, const ExactSeries& b)
    {
        unsigned n = std::min(a.order(), b.order());
        ExactSeries out(n);
        for (unsigned k = 0; k <= n; ++k) out.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
        return out;
    }
    friend ExactSeries operator-(const ExactSeries& a, const ExactSeries& b)
    {
        unsigned n = std::min(a.order(), b.order());
        ExactSeries out(n);
        for (unsigned k = 0; k <= n; ++k) out.coeffs_[k] = a.coeffs_[k] - b.coeffs_[k];
        return out;
    }
    friend ExactSeries operator*(const ExactSeries& a, const ExactSeries& b)
    {
        unsigned n = std::min(a.order(), b.order());
        ExactSeries out(n);
        for (unsigned i = 0; i <= n; ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (unsigned j = 0; i + j <= n; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return out;
    }
    friend ExactSeries operator*(const Rational& s, const ExactSeries& a)
    {
        ExactSeries out = a;
        for (auto& c : out.coeffs_) c *= s;
        return out;
    }
    friend bool operator==(const ExactSeries& a, const ExactSeries& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::vector<Rational> coeffs_;
};

/// Legendre polynomial of degree j, normalized so that psi_j(1) = 1.
inline ExactPoly legendre_poly(unsigned j)
{
    ExactPoly prev({Rational(1)});
    if (j == 0) return prev;
    ExactPoly cur({Rational(0), Rational(1)});
    const ExactPoly x = ExactPoly::monomial(1);
    for (unsigned n = 1; n < j; ++n) {
        // (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}
        ExactPoly next = make_rational(2 * n + 1, n + 1) * (x * cur) - make_rational(n, n + 1) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// k-th derivative of psi_j at xi; zero when k > j.
inline Rational legendre_derivative_at(unsigned j, unsigned k, const Rational& xi)
{
    if (k > j) return 0;
    return legendre_poly(j).derivative(k)(xi);
}

/// Taylor series of e^{sign z} through z^order.
inline ExactSeries exp_series(int sign, unsigned order)
{
    if (sign != 1 && sign != -1) throw std::invalid_argument("exp_series: sign must be +1 or -1");
    ExactSeries out(order);
    Rational term = 1;
    for (unsigned k = 0; k <= order; ++k) {
        out[k] = term;
        term = term * sign / static_cast<long>(k + 1);
    }
    return out;
}

/// Series of the modified spherical Bessel function I_j through z^order.
/// Half-integer Gamma values are reduced against the sqrt(pi)/2 prefactor,
/// so every coefficient is rational:
///   z^{2k+j} coefficient = 4^n n! / (2 * 2^{2k+j} * k! * (2n)!),  n = k+j+1.
inline ExactSeries bessel_series(unsigned j, unsigned order)
{
    if (order < j) throw std::invalid_argument("bessel_series: order must be >= j");
    ExactSeries out(order);
    for (unsigned k = 0; 2 * k + j <= order; ++k) {
        const unsigned n = k + j + 1;
        Rational num = pow2(2 * static_cast<long>(n)) * Rational(factorial(n));
        Rational den = Rational(2) * pow2(static_cast<long>(2 * k + j)) * Rational(factorial(k)) *
                       Rational(factorial(2 * n));
        Rational c = num / den;
        c.canonicalize();
        out[2 * k + j] = c;
    }
    return out;
}

/// 2^p p! / (2p)!, the leading coefficient of (2p+1) I_p.
inline Rational a_coefficient(unsigned p)
{
    Rational out = pow2(p) * Rational(factorial(p)) / Rational(factorial(2 * p));
    out.canonicalize();
    return out;
}

}  // namespace esfr
