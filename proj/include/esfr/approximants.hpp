#pragma once

// The rational approximant pair (P, Q) of e^{-z} generated by an FR operator
// bundle, its exact residual series, and the error estimate built on the
// leading residual coefficients.

#include "esfr/legendre.hpp"
#include "esfr/numerics/big_real.hpp"
#include "esfr/operators.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace esfr {

struct ApproximantPair {
    unsigned p = 0;
    ExactPoly P;  ///< degree p+1, leading coefficient 2^{-(p+1)}
    ExactPoly Q;  ///< degree <= p
    std::vector<Rational> q;
};

/// P(z) = 2^{-(p+1)} z^{p+1} - sum_{j,k} (-1)^j 2^{k-p} q_j psi_j^{(k)}(-1) z^{p-k}
/// Q(z) =                   - sum_{j,k} (-1)^j 2^{k-p} q_j psi_j^{(k)}(+1) z^{p-k}
inline ApproximantPair build_pq(const FrOperators& ops)
{
    const unsigned p = ops.p;
    std::vector<Rational> pc(p + 2, Rational(0));
    std::vector<Rational> qc(p + 1, Rational(0));
    pc[p + 1] = pow2(-static_cast<long>(p + 1));
    const Rational minus_one = -1;
    const Rational plus_one = 1;
    for (unsigned j = 0; j <= p; ++j) {
        const ExactPoly psi = legendre_poly(j);
        ExactPoly deriv = psi;
        for (unsigned k = 0; k <= j; ++k) {
            const Rational weight = sign_power(j) * pow2(static_cast<long>(k) - static_cast<long>(p)) * ops.q[j];
            pc[p - k] -= weight * deriv(minus_one);
            qc[p - k] -= weight * deriv(plus_one);
            deriv = deriv.derivative();
        }
    }
    return ApproximantPair{p, ExactPoly(std::move(pc)), ExactPoly(std::move(qc)), ops.q};
}

struct ResidualSeries {
    ExactSeries series;
    std::optional<unsigned> first_nonzero;
};

/// Exact Taylor coefficients of P(z) - Q(z) e^{-z} through z^order.
inline ResidualSeries residual_series(const ApproximantPair& pair, unsigned order)
{
    if (order < 2 * pair.p + 3)
        throw PreconditionError("residual_series: order must be >= 2p+3 = " + std::to_string(2 * pair.p + 3));
    ExactSeries r = ExactSeries::from_poly(pair.P, order) - ExactSeries::from_poly(pair.Q, order) * exp_series(-1, order);
    auto first = r.first_nonzero();
    return ResidualSeries{std::move(r), first};
}

/// P and Q rescaled so that Q(0) = 1.
inline ApproximantPair normalized(const ApproximantPair& pair)
{
    const Rational q0 = pair.Q.coeff(0);
    if (q0 == 0) throw std::domain_error("approximant normalization needs Q(0) != 0");
    ApproximantPair out = pair;
    out.P = (1 / q0) * pair.P;
    out.Q = (1 / q0) * pair.Q;
    return out;
}

/// Taylor series of P/Q through z^order.
inline ExactSeries ratio_series(const ApproximantPair& pair, unsigned order)
{
    return ExactSeries::from_poly(pair.P, order) * ExactSeries::from_poly(pair.Q, order).inverse();
}

/// True when P/Q reproduces e^{-z} through z^{order}.
inline bool matches_exponential(const ApproximantPair& pair, unsigned order)
{
    return ratio_series(normalized(pair), order) == exp_series(-1, order);
}

struct ErrorEstimate {
    Rational b1;
    Rational b2;
    unsigned p = 0;
    Rational c;
};

/// b1 = (1 - f) p!/(2p)!,  b2 = (f - 1) p!/(2 (2p)!) + (p+1)!/(2p+2)!
inline ErrorEstimate b_coefficients(unsigned p, const Rational& c)
{
    if (p < 1) throw PreconditionError("b_coefficients: p must be >= 1");
    const Rational f = correction_factor(p, c);
    const Rational ratio = Rational(factorial(p)) / Rational(factorial(2 * p));
    ErrorEstimate out;
    out.p = p;
    out.c = c;
    out.b1 = (1 - f) * ratio;
    out.b2 = (f - 1) * ratio / 2 + Rational(factorial(p + 1)) / Rational(factorial(2 * p + 2));
    out.b1.canonicalize();
    out.b2.canonicalize();
    return out;
}

/// F(p, c, theta) = |b1 (i theta)^{2p+1} + b2 (i theta)^{2p+2}|, evaluated as
/// |theta|^{2p+1} sqrt(b1^2 + b2^2 theta^2).
inline BigReal estimate_F(unsigned p, const Rational& c, const BigReal& theta)
{
    const ErrorEstimate e = b_coefficients(p, c);
    const Bits bits = theta.precision();
    const BigReal b1 = to_big(e.b1, bits);
    const BigReal b2 = to_big(e.b2, bits);
    return pow(abs(theta), static_cast<long>(2 * p + 1)) * sqrt(b1 * b1 + b2 * b2 * theta * theta);
}

/// A_T from the estimate F / |lambda1(0) - theta| sampled at dtheta and dtheta/2.
inline BigReal semianalytic_AT(unsigned p, const Rational& c, const BigReal& dtheta, const BigComplex& lambda1_at_0)
{
    if (!(dtheta.sign() > 0)) throw PreconditionError("semianalytic_AT: dtheta must be positive");
    if (lambda1_at_0.is_zero()) throw PreconditionError("semianalytic_AT: lambda1(0) must be nonzero");
    auto estimate = [&](const BigReal& theta) {
        return estimate_F(p, c, theta) / abs(lambda1_at_0 - BigComplex(theta));
    };
    const BigReal half = dtheta / 2L;
    const BigReal ln2 = log(BigReal(2L, dtheta.precision()));
    return (log(estimate(dtheta)) - log(estimate(half))) / ln2 - BigReal(1L, dtheta.precision());
}

}  // namespace esfr
