#pragma once

// ESFR operator bundles in the modal Legendre basis, where the mass and filter
// matrices are diagonal, and the more general symmetric-FR bundles obtained
// from an arbitrary right correction derivative h_R.

#include "esfr/errors.hpp"
#include "esfr/legendre.hpp"
#include "esfr/numerics/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace esfr {

enum class SchemeKind { esfr, symmetric_general };

inline const char* to_string(SchemeKind kind) { return kind == SchemeKind::esfr ? "esfr" : "symmetric_general"; }

/// Dense exact matrix, row-major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(std::size_t n) : n_(n), data_(n * n, Rational(0)) {}

    std::size_t size() const { return n_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

    std::vector<Rational> apply(const std::vector<Rational>& x) const
    {
        std::vector<Rational> y(n_, Rational(0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if ((*this)(i, j) != 0) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
    {
        RationalMatrix out(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < a.n_; ++j) out(i, j) += a(i, k) * b(k, j);
            }
        return out;
    }
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) { return a.data_ == b.data_; }

    bool is_zero() const
    {
        for (const auto& v : data_)
            if (v != 0) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    std::vector<Rational> data_;
};

struct FrOperators {
    unsigned p = 0;
    Rational c;                 ///< ESFR parameter (ESFR-equivalent value for symmetric bundles)
    std::vector<Rational> M;    ///< diagonal of the mass matrix, 2/(2j+1)
    RationalMatrix D;           ///< modal differentiation operator
    std::vector<Rational> K;    ///< diagonal of the filter matrix
    std::vector<Rational> l;    ///< left traces psi_j(-1)
    std::vector<Rational> r;    ///< right traces psi_j(1)
    std::vector<Rational> q;    ///< diagonal of (M+K)^{-1}
    Rational fc;                ///< q_p / ((2p+1)/2)
    std::vector<Rational> hL;
    std::vector<Rational> hR;
    SchemeKind kind = SchemeKind::esfr;
    std::optional<unsigned> kbar;  ///< smallest index with K_jj != 0
    std::vector<std::string> warnings;

    std::size_t size() const { return p + 1; }
};

namespace detail {

inline std::vector<Rational> legendre_mass(unsigned p)
{
    std::vector<Rational> m(p + 1);
    for (unsigned j = 0; j <= p; ++j) m[j] = make_rational(2, 2 * j + 1);
    return m;
}

inline RationalMatrix legendre_differentiation(unsigned p)
{
    // psi_k' = sum_{j<k, j+k odd} (2j+1) psi_j
    RationalMatrix d(p + 1);
    for (unsigned j = 0; j <= p; ++j)
        for (unsigned k = j + 1; k <= p; ++k)
            if ((j + k) % 2 == 1) d(j, k) = static_cast<long>(2 * j + 1);
    return d;
}

inline std::optional<unsigned> first_nonzero(const std::vector<Rational>& v)
{
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0) return static_cast<unsigned>(j);
    return std::nullopt;
}

inline void fill_common(FrOperators& ops)
{
    const unsigned p = ops.p;
    ops.M = legendre_mass(p);
    ops.D = legendre_differentiation(p);
    ops.l.resize(p + 1);
    ops.r.assign(p + 1, Rational(1));
    for (unsigned j = 0; j <= p; ++j) ops.l[j] = sign_power(j);
}

}  // namespace detail

/// (2p)! / (2^p p!): the constant value of the p-th derivative of psi_p.
inline Rational top_derivative(unsigned p)
{
    Rational out = Rational(factorial(2 * p)) / (pow2(p) * Rational(factorial(p)));
    out.canonicalize();
    return out;
}

/// kappa_p = (2p+1) ((2p)!)^2 / (2^{2p+1} (p!)^2), so that f(c) = 1 / (1 + c kappa_p).
inline Rational kappa(unsigned p)
{
    if (p < 1) throw PreconditionError("kappa: p must be >= 1");
    Rational fact2p = Rational(factorial(2 * p));
    Rational factp = Rational(factorial(p));
    Rational out = Rational(2 * p + 1) * fact2p * fact2p / (pow2(2 * p + 1) * factp * factp);
    out.canonicalize();
    return out;
}

/// f(c); throws when c sits exactly on the pole at c = -1/kappa_p.
inline Rational correction_factor(unsigned p, const Rational& c)
{
    Rational denom = 1 + c * kappa(p);
    if (denom == 0) throw PreconditionError("c = " + to_string(c) + " makes M+K singular (f(c) diverges)");
    Rational out = 1 / denom;
    out.canonicalize();
    return out;
}

struct SpecialC {
    Rational c_minus;  ///< stability bound
    Rational c_sd;     ///< spectral difference
    Rational c_hu;     ///< Huynh g2
};

inline SpecialC special_c(unsigned p)
{
    if (p < 1) throw PreconditionError("special_c: p must be >= 1");
    // a = (2p)!/(2^p p!) is the constant p-th derivative of psi_p.
    const Rational a = top_derivative(p);
    const Rational a2 = a * a;
    const Rational two_p1 = 2 * p + 1;
    SpecialC out;
    out.c_minus = Rational(-2) / (two_p1 * a2);
    out.c_sd = Rational(2 * p) / (two_p1 * Rational(p + 1) * a2);
    out.c_hu = Rational(2 * (p + 1)) / (two_p1 * Rational(p) * a2);
    out.c_minus.canonicalize();
    out.c_sd.canonicalize();
    out.c_hu.canonicalize();
    return out;
}

inline FrOperators build_esfr(unsigned p, const Rational& c)
{
    if (p < 1) throw PreconditionError("build_esfr: p must be >= 1");
    FrOperators ops;
    ops.p = p;
    ops.c = c;
    ops.kind = SchemeKind::esfr;
    detail::fill_common(ops);

    ops.fc = correction_factor(p, c);
    const SpecialC special = special_c(p);
    if (c <= special.c_minus)
        ops.warnings.push_back("c = " + to_string(c) + " <= c_minus = " + to_string(special.c_minus) +
                               ": scheme is not linearly stable");

    const Rational a = top_derivative(p);
    ops.K.assign(p + 1, Rational(0));
    ops.K[p] = c * a * a;

    ops.q.resize(p + 1);
    ops.hR.resize(p + 1);
    ops.hL.resize(p + 1);
    for (unsigned j = 0; j <= p; ++j) {
        ops.q[j] = 1 / (ops.M[j] + ops.K[j]);
        ops.q[j].canonicalize();
        ops.hR[j] = ops.q[j] * ops.r[j];
        ops.hL[j] = -ops.q[j] * ops.l[j];
    }
    ops.kbar = detail::first_nonzero(ops.K);
    return ops;
}

/// Bundle for a symmetric FR scheme given its right correction derivative
/// coefficients; every entry must be nonzero.
inline FrOperators build_symmetric_fr(unsigned p, const std::vector<Rational>& hR)
{
    if (p < 1) throw PreconditionError("build_symmetric_fr: p must be >= 1");
    if (hR.size() != p + 1)
        throw PreconditionError("build_symmetric_fr: expected " + std::to_string(p + 1) + " hR entries, got " +
                                std::to_string(hR.size()));
    for (std::size_t j = 0; j < hR.size(); ++j)
        if (hR[j] == 0) throw PreconditionError("hR entry at index " + std::to_string(j) + " is zero");

    FrOperators ops;
    ops.p = p;
    ops.kind = SchemeKind::symmetric_general;
    detail::fill_common(ops);
    ops.hR = hR;
    ops.q = hR;
    ops.K.resize(p + 1);
    ops.hL.resize(p + 1);
    for (unsigned j = 0; j <= p; ++j) {
        ops.K[j] = 1 / hR[j] - ops.M[j];
        ops.K[j].canonicalize();
        ops.hL[j] = sign_power(j + 1) * hR[j];
    }
    ops.kbar = detail::first_nonzero(ops.K);
    ops.fc = 2 * ops.q[p] / Rational(2 * p + 1);
    ops.fc.canonicalize();
    const Rational a = top_derivative(p);
    ops.c = ops.K[p] / (a * a);
    ops.c.canonicalize();
    return ops;
}

}  // namespace esfr
