#include "esfr/legendre.hpp"

#include <gtest/gtest.h>

using namespace esfr;

namespace {

Rational binomial(unsigned n, unsigned k) { return Rational(factorial(n)) / Rational(factorial(k) * factorial(n - k)); }

}  // namespace

TEST(Legendre, LowDegreesInMonomialForm)
{
    EXPECT_EQ(legendre_poly(0), ExactPoly({Rational(1)}));
    EXPECT_EQ(legendre_poly(2), ExactPoly({make_rational(-1, 2), Rational(0), make_rational(3, 2)}));
    EXPECT_EQ(legendre_poly(3), ExactPoly({Rational(0), make_rational(-3, 2), Rational(0), make_rational(5, 2)}));
}

TEST(Legendre, OrthogonalWithModalMass)
{
    for (unsigned i = 0; i <= 7; ++i)
        for (unsigned j = 0; j <= 7; ++j) {
            const Rational v = (legendre_poly(i) * legendre_poly(j)).integrate(-1, 1);
            EXPECT_EQ(v, i == j ? make_rational(2, 2 * i + 1) : Rational(0)) << i << "," << j;
        }
}

TEST(Legendre, EndpointDerivativesMatchClosedForm)
{
    // psi_j^{(k)}(1) = (j+k)! / (2^k k! (j-k)!), and the reflection (-1)^{j+k} at -1.
    for (unsigned j = 0; j <= 9; ++j)
        for (unsigned k = 0; k <= j + 1; ++k) {
            Rational expect = 0;
            if (k <= j)
                expect = Rational(factorial(j + k)) / (pow2(k) * Rational(factorial(k) * factorial(j - k)));
            EXPECT_EQ(legendre_derivative_at(j, k, 1), expect) << j << "," << k;
            EXPECT_EQ(legendre_derivative_at(j, k, -1), sign_power(j + k) * expect) << j << "," << k;
        }
}

TEST(Legendre, ReflectionParity)
{
    for (unsigned j = 0; j <= 8; ++j)
        EXPECT_EQ(legendre_poly(j).reflected(), Rational(sign_power(j)) * legendre_poly(j));
}

TEST(Series, InverseAndExponentialIdentities)
{
    const unsigned order = 14;
    const auto e_plus = exp_series(1, order);
    const auto e_minus = exp_series(-1, order);
    auto one = ExactSeries(order);
    one[0] = 1;
    EXPECT_EQ(e_plus * e_minus, one);
    EXPECT_EQ(e_plus.inverse(), e_minus);
    EXPECT_EQ(e_plus.scaled_argument(-1), e_minus);
    EXPECT_EQ(*e_minus.first_nonzero(), 0u);
    EXPECT_THROW(ExactSeries(3).inverse(), std::domain_error);
}

TEST(Bessel, LegendreExpansionOfExponential)
{
    // e^{z x} = sum_j (2j+1) I_j(z) psi_j(x), checked coefficientwise at several x.
    const unsigned order = 10;
    for (const Rational& x : {Rational(1), Rational(-1), make_rational(1, 3), make_rational(-2, 5)}) {
        ExactSeries total(order);
        for (unsigned j = 0; j <= order; ++j)
            total = total + Rational(2 * j + 1) * legendre_poly(j)(x) * bessel_series(j, order);
        EXPECT_EQ(total, exp_series(1, order).scaled_argument(x));
    }
}

TEST(Bessel, LeadingCoefficient)
{
    for (unsigned p = 1; p <= 8; ++p) {
        const auto s = bessel_series(p, p + 2);
        EXPECT_EQ(*s.first_nonzero(), p);
        EXPECT_EQ(Rational(2 * p + 1) * s[p], a_coefficient(p)) << p;
        // 1 / (2p-1)!!
        Rational dfact = 1;
        for (unsigned k = 1; k < 2 * p; k += 2) dfact *= k;
        EXPECT_EQ(a_coefficient(p), 1 / dfact);
    }
    EXPECT_THROW(bessel_series(4, 3), std::invalid_argument);
}

TEST(ExactPoly, CalculusRules)
{
    const ExactPoly a({Rational(1), Rational(-2), make_rational(1, 2)});
    const ExactPoly b({make_rational(3, 7), Rational(0), Rational(0), Rational(4)});
    EXPECT_EQ((a * b).derivative(), a.derivative() * b + a * b.derivative());
    EXPECT_EQ(ExactPoly::monomial(5).derivative(5), ExactPoly({Rational(120)}));
    EXPECT_EQ(ExactPoly().degree(), -1);
    EXPECT_EQ((a - a).degree(), -1);
    EXPECT_EQ(binomial(6, 2), Rational(15));
}

TEST(Legendre, ReferenceValues)
{
    for (unsigned j = 0; j <= 10; ++j) EXPECT_EQ(legendre_poly(j)(Rational(1)), 1);
    EXPECT_EQ(legendre_poly(2)(Rational(0)), make_rational(-1, 2));
    EXPECT_EQ(legendre_derivative_at(2, 1, 1), 3);
    EXPECT_EQ(legendre_derivative_at(3, 5, make_rational(1, 2)), 0);
    for (unsigned p = 0; p <= 8; ++p) {
        const ExactPoly top = legendre_poly(p).derivative(p);
        EXPECT_EQ(top.degree(), 0);
        EXPECT_EQ(top.coeff(0), Rational(factorial(2 * p)) / (pow2(p) * Rational(factorial(p))));
    }
}

TEST(Legendre, EndpointDerivativeSymmetry)
{
    for (unsigned n = 0; n <= 8; ++n)
        for (unsigned m = 0; m <= 8; ++m)
            EXPECT_EQ(legendre_derivative_at(n, m, 1), sign_power(m + n) * legendre_derivative_at(n, m, -1));
}

TEST(Bessel, ParityAndTruncation)
{
    const unsigned order = 12;
    for (unsigned j = 0; j <= 8; ++j) {
        const auto s = bessel_series(j, order);
        for (unsigned m = 0; m < j; ++m) EXPECT_EQ(s[m], 0);
        EXPECT_EQ(s.scaled_argument(-1), Rational(sign_power(j)) * s);
    }
    // Partial sums of the expansion of e^y at x = 1 leave a residual starting at y^{J+1}.
    for (unsigned J = 0; J <= 8; ++J) {
        ExactSeries partial(order);
        for (unsigned j = 0; j <= J; ++j) partial = partial + Rational(2 * j + 1) * bessel_series(j, order);
        const auto residual = exp_series(1, order) - partial;
        EXPECT_EQ(*residual.first_nonzero(), J + 1) << J;
    }
}

TEST(Series, SmallReferenceCases)
{
    EXPECT_EQ(exp_series(-1, 2), ExactSeries({Rational(1), Rational(-1), make_rational(1, 2)}, 2));
    EXPECT_EQ(a_coefficient(0), 1);
    EXPECT_EQ(a_coefficient(2), make_rational(1, 3));
    // Mixed-order arithmetic truncates to the shorter series.
    EXPECT_EQ((exp_series(1, 3) * exp_series(1, 7)).order(), 3u);
}
