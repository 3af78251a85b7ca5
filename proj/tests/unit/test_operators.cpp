#include "esfr/operators.hpp"

#include <gtest/gtest.h>

using namespace esfr;

namespace {

RationalMatrix transpose(const RationalMatrix& a)
{
    RationalMatrix t(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) t(i, j) = a(j, i);
    return t;
}

}  // namespace

TEST(Operators, DifferentiationMatchesGalerkinProjection)
{
    for (unsigned p = 1; p <= 6; ++p) {
        const auto ops = build_esfr(p, 0);
        for (unsigned j = 0; j <= p; ++j)
            for (unsigned k = 0; k <= p; ++k) {
                const Rational proj =
                    (legendre_poly(j) * legendre_poly(k).derivative()).integrate(-1, 1) / ops.M[j];
                EXPECT_EQ(ops.D(j, k), proj) << p << ":" << j << "," << k;
            }
    }
}

TEST(Operators, TracesAndMass)
{
    const auto ops = build_esfr(4, 0);
    for (unsigned j = 0; j <= 4; ++j) {
        EXPECT_EQ(ops.l[j], legendre_poly(j)(Rational(-1)));
        EXPECT_EQ(ops.r[j], legendre_poly(j)(Rational(1)));
        EXPECT_EQ(ops.M[j], (legendre_poly(j) * legendre_poly(j)).integrate(-1, 1));
    }
}

TEST(Operators, FilterMatchesDefinition)
{
    // K = (c/2) (D^p)^T M D^p
    for (unsigned p = 1; p <= 5; ++p)
        for (const Rational& c : {Rational(0), make_rational(1, 7), Rational(100), make_rational(-1, 1000)}) {
            const auto ops = build_esfr(p, c);
            RationalMatrix dp = ops.D;
            for (unsigned k = 1; k < p; ++k) dp = dp * ops.D;
            RationalMatrix m(p + 1);
            for (unsigned j = 0; j <= p; ++j) m(j, j) = ops.M[j];
            const RationalMatrix full = transpose(dp) * m * dp;
            for (unsigned i = 0; i <= p; ++i)
                for (unsigned j = 0; j <= p; ++j) {
                    const Rational expect = c / 2 * full(i, j);
                    if (i == j)
                        EXPECT_EQ(ops.K[i], expect) << p;
                    else
                        EXPECT_EQ(expect, 0);
                }
        }
}

TEST(Operators, KappaAndCorrectionFactor)
{
    EXPECT_EQ(kappa(1), make_rational(3, 2));
    EXPECT_EQ(kappa(2), make_rational(45, 2));
    for (unsigned p = 1; p <= 6; ++p) {
        const auto ops = build_esfr(p, 3);
        EXPECT_EQ(ops.fc, 1 / (1 + 3 * kappa(p)));
        EXPECT_EQ(ops.q[p], make_rational(2 * p + 1, 2) * ops.fc);
        EXPECT_EQ(ops.fc, 2 * ops.q[p] / Rational(2 * p + 1));
    }
    EXPECT_THROW(correction_factor(2, -1 / kappa(2)), PreconditionError);
    EXPECT_THROW(build_esfr(3, special_c(3).c_minus), PreconditionError);
}

TEST(Operators, SpecialValues)
{
    const auto s2 = special_c(2);
    EXPECT_EQ(s2.c_sd, make_rational(4, 135));
    EXPECT_EQ(s2.c_hu, make_rational(1, 15));
    for (unsigned p = 1; p <= 6; ++p) EXPECT_EQ(special_c(p).c_minus, -1 / kappa(p));
}

TEST(Operators, UnstableParameterWarns)
{
    const auto s = special_c(2);
    EXPECT_TRUE(build_esfr(2, 0).warnings.empty());
    EXPECT_FALSE(build_esfr(2, s.c_minus * 2).warnings.empty());
}

TEST(Operators, CorrectionDerivativesAreMirrored)
{
    const auto ops = build_esfr(3, make_rational(1, 9));
    for (unsigned j = 0; j <= 3; ++j) {
        EXPECT_EQ(ops.hR[j], ops.q[j]);
        EXPECT_EQ(ops.hL[j], sign_power(j + 1) * ops.hR[j]);
    }
    EXPECT_EQ(*ops.kbar, 3u);
    EXPECT_FALSE(build_esfr(3, 0).kbar.has_value());
}

TEST(SymmetricFr, RoundTripsEsfrBundles)
{
    for (unsigned p = 1; p <= 5; ++p)
        for (const Rational& c : {Rational(0), special_c(p).c_sd, Rational(100)}) {
            const auto ref = build_esfr(p, c);
            const auto sym = build_symmetric_fr(p, ref.hR);
            EXPECT_EQ(sym.K, ref.K);
            EXPECT_EQ(sym.q, ref.q);
            EXPECT_EQ(sym.hL, ref.hL);
            EXPECT_EQ(sym.c, c);
            EXPECT_EQ(sym.fc, ref.fc);
            EXPECT_EQ(sym.kind, SchemeKind::symmetric_general);
        }
}

TEST(SymmetricFr, IdentifiesKbar)
{
    std::vector<Rational> hR = {make_rational(1, 4), make_rational(3, 2), make_rational(5, 2)};
    const auto ops = build_symmetric_fr(2, hR);
    EXPECT_EQ(*ops.kbar, 0u);
    EXPECT_EQ(ops.K[0], ops.M[0]);
    EXPECT_EQ(ops.K[1], 0);
}

TEST(SymmetricFr, ValidatesInput)
{
    EXPECT_THROW(build_symmetric_fr(2, {Rational(1), Rational(1)}), PreconditionError);
    try {
        build_symmetric_fr(2, {Rational(1), Rational(0), Rational(1)});
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
    }
    EXPECT_THROW(build_esfr(0, 0), PreconditionError);
}

TEST(Operators, ReferenceBundles)
{
    const auto dg = build_esfr(2, 0);
    EXPECT_EQ(dg.q, (std::vector<Rational>{make_rational(1, 2), make_rational(3, 2), make_rational(5, 2)}));
    EXPECT_EQ(dg.fc, 1);
    EXPECT_EQ(build_esfr(2, 100).fc, make_rational(1, 2251));
    const auto p1 = build_esfr(1, 0);
    EXPECT_EQ(p1.D(0, 1), 1);
    EXPECT_EQ(p1.D(0, 0), 0);
    EXPECT_EQ(p1.D(1, 0), 0);
    EXPECT_EQ(special_c(2).c_minus, make_rational(-2, 45));
    for (unsigned p = 1; p <= 8; ++p) {
        EXPECT_EQ(kappa(p) * special_c(p).c_minus, -1);
        EXPECT_GT(kappa(p), 0);
    }
}

TEST(Operators, ExactStructuralInvariants)
{
    for (unsigned p = 1; p <= 6; ++p)
        for (const Rational& c : {Rational(0), special_c(p).c_hu, Rational(42)}) {
            const auto ops = build_esfr(p, c);
            for (unsigned j = 0; j <= p; ++j) {
                EXPECT_EQ((ops.M[j] + ops.K[j]) * ops.hR[j], ops.r[j]);
                EXPECT_EQ((ops.M[j] + ops.K[j]) * ops.hL[j], -ops.l[j]);
            }
            RationalMatrix power = ops.D;
            for (unsigned k = 1; k < p; ++k) power = power * ops.D;
            std::vector<Rational> unit(p + 1, Rational(0));
            unit[p] = 1;
            const auto image = power.apply(unit);
            EXPECT_EQ(image[0], top_derivative(p));
            for (unsigned j = 1; j <= p; ++j) EXPECT_EQ(image[j], 0);
            EXPECT_TRUE((power * ops.D).is_zero());
        }
}

TEST(Operators, CorrectionFactorDecreasesToZero)
{
    for (unsigned p = 1; p <= 4; ++p) {
        const Rational lo = special_c(p).c_minus;
        std::vector<Rational> cs = {lo + make_rational(1, 1000000), lo / 2, Rational(0), make_rational(1, 10), Rational(10),
                                    Rational(100000), Rational(1000000000)};
        for (std::size_t i = 1; i < cs.size(); ++i) EXPECT_LT(correction_factor(p, cs[i]), correction_factor(p, cs[i - 1]));
        EXPECT_LT(correction_factor(p, Rational(1000000000)), make_rational(1, 1000000));
    }
}

TEST(SymmetricFr, DgAndPerturbedBundles)
{
    const auto dg = build_esfr(3, 0);
    const auto sym = build_symmetric_fr(3, dg.hR);
    EXPECT_FALSE(sym.kbar.has_value());
    for (const auto& k : sym.K) EXPECT_EQ(k, 0);

    std::vector<Rational> hr = build_esfr(2, 0).hR;
    hr[1] = make_rational(7, 5);
    const auto perturbed = build_symmetric_fr(2, hr);
    EXPECT_EQ(*perturbed.kbar, 1u);
    EXPECT_NE(perturbed.K[1], 0);
    EXPECT_EQ(perturbed.K[0], 0);
    EXPECT_EQ(perturbed.K[2], 0);
}
