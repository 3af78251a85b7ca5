#include "esfr/spectrum.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace esfr;

namespace {

constexpr Bits kBits = 192;

BigReal rel(const BigComplex& a, const BigComplex& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST(VonNeumann, ModifiedMatrixFactorsThroughH)
{
    // H~ = -(1/2i) (M+K) (H - theta I)
    for (unsigned p = 1; p <= 4; ++p) {
        const auto ops = build_esfr(p, make_rational(1, 10));
        const BigReal th(0.37, kBits);
        const auto h = von_neumann_H(ops, th, kBits);
        const auto ht = modified_H(ops, th, kBits);
        const BigComplex factor(BigReal(kBits), BigReal(0.5, kBits));  // -1/(2i)
        for (std::size_t j = 0; j <= p; ++j)
            for (std::size_t k = 0; k <= p; ++k) {
                BigComplex shifted = h(j, k);
                if (j == k) shifted -= BigComplex(th);
                const BigComplex expect = factor * BigComplex(ops.M[j] + ops.K[j], kBits) * shifted;
                EXPECT_LT(abs(ht(j, k) - expect).to_double(), 1e-50);
            }
    }
}

TEST(VonNeumann, DeterminantIdentity)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1e-4, 3.0);
    for (unsigned p = 1; p <= 5; ++p)
        for (const Rational& c : {Rational(0), special_c(p).c_hu, make_rational(-1, 1000000)})
            for (int trial = 0; trial < 5; ++trial) {
                const auto ops = build_esfr(p, c);
                const BigReal th(u(rng), kBits);
                EXPECT_LT(rel(modified_determinant(ops, th, kBits), approximant_determinant(ops, th, kBits)).to_double(), 1e-50);
            }
}

TEST(VonNeumann, GuardedDeterminantSurvivesCancellation)
{
    // At p = 5, theta = 1e-6 the determinant is ~1e-66 against O(1) entries.
    const auto ops = build_esfr(5, 100);
    const BigReal th(1e-6, kBits);
    const BigComplex reference = approximant_determinant(ops, BigReal(1e-6, 2048), 2048);
    EXPECT_LT(rel(modified_determinant(ops, th, kBits), reference).to_double(), 1e-50);
    EXPECT_LT(rel(approximant_determinant(ops, th, kBits), reference).to_double(), 1e-50);
    EXPECT_EQ(modified_determinant(ops, th, kBits).precision(), kBits);
}

TEST(VonNeumann, EigenvaluesSatisfyDispersionRelation)
{
    // Every eigenvalue lambda of H(theta) solves P(i lambda) = Q(i lambda) e^{-i theta}.
    for (unsigned p = 1; p <= 5; ++p) {
        const auto ops = build_esfr(p, special_c(p).c_sd);
        const auto pair = build_pq(ops);
        for (double th : {1e-3, 0.5, 2.0}) {
            const BigReal t(th, kBits);
            for (const auto& lam : eigenvalues(von_neumann_H(ops, t, kBits)).eigenvalues) {
                const BigComplex z = BigComplex(BigReal(kBits), BigReal(1L, kBits)) * lam;
                const BigComplex lhs = pair.P(z);
                const BigComplex rhs = pair.Q(z) * BigComplex::polar(-t);
                EXPECT_LT((abs(lhs - rhs) / (abs(lhs) + abs(rhs))).to_double(), 1e-40);
            }
        }
    }
}

TEST(VonNeumann, PhysicalEigenvalueApproachesTheta)
{
    const auto ops = build_esfr(2, 0);
    const auto grid = log_grid(BigReal(1e-4, kBits), BigReal(1e-1, kBits), 8);
    const auto samples = physical_eigenvalue(ops, grid, kBits);
    for (const auto& s : samples) EXPECT_LT((abs(s.omega_h - BigComplex(s.theta)) / s.theta).to_double(), 1e-3);
    // DG: E_T = O(theta^{2p+2}), so the scaled error is nearly constant.
    const BigReal e0 = abs(samples[0].omega_h - BigComplex(samples[0].theta)) / pow(samples[0].theta, 6);
    const BigReal e1 = abs(samples[1].omega_h - BigComplex(samples[1].theta)) / pow(samples[1].theta, 6);
    EXPECT_NEAR((e0 / e1).to_double(), 1.0, 1e-3);
}

TEST(VonNeumann, ParallelSweepIsDeterministic)
{
    const auto ops = build_esfr(3, 1);
    const auto grid = log_grid(BigReal(1e-3, kBits), BigReal(1L, kBits), 9);
    const auto serial = physical_eigenvalue(ops, grid, kBits, 1);
    const auto parallel = physical_eigenvalue(ops, grid, kBits, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_TRUE(serial[i].omega_h.real() == parallel[i].omega_h.real());
        EXPECT_TRUE(serial[i].omega_h.imag() == parallel[i].omega_h.imag());
    }
}

TEST(VonNeumann, AmbiguousAnchorIsReported)
{
    const BigReal th(0.5, kBits);
    std::vector<std::vector<BigComplex>> spectra = {
        {BigComplex(BigReal(0.4, kBits)), BigComplex(BigReal(0.6, kBits)), BigComplex(BigReal(3L, kBits))}};
    EXPECT_THROW(detail::track_physical({th}, spectra), AmbiguousEigenvalueError);
}

TEST(VonNeumann, GridPreconditions)
{
    const auto ops = build_esfr(2, 0);
    EXPECT_THROW(physical_eigenvalue(ops, {BigReal(0.2, kBits), BigReal(0.1, kBits)}, kBits), PreconditionError);
    EXPECT_THROW(physical_eigenvalue(ops, {BigReal(0L, kBits)}, kBits), PreconditionError);
    EXPECT_THROW(log_grid(BigReal(1L, kBits), BigReal(0.5, kBits), 5), PreconditionError);
    const auto g = log_grid(BigReal(1e-6, kBits), BigReal(1L, kBits), 7);
    EXPECT_NEAR(g[3].to_double(), 1e-3, 1e-15);
}

TEST(SpectralOrder, InsufficientPrecisionIsReported)
{
    EXPECT_THROW(measure_AT(build_esfr(3, 0), BigReal(1e-3, 64), 64), PrecisionError);
}

TEST(SpectralOrder, DgOrder)
{
    EXPECT_NEAR(measure_AT(build_esfr(1, 0), BigReal(1e-3, kBits), kBits).to_double(), 3.0, 0.01);
}

TEST(Lambda1, KnownValueForLargeC)
{
    const auto l = lambda1_at_zero(build_esfr(2, 100), kBits);
    EXPECT_TRUE(l.warnings.empty());
    EXPECT_NEAR(l.value.real().to_double(), 0.0, 1e-30);
    EXPECT_NEAR(l.value.imag().to_double(), -0.0044458, 1e-7);
}

TEST(Lambda1, SymmetricBundleSkipsProbe)
{
    const auto ops = build_symmetric_fr(2, {make_rational(1, 4), make_rational(3, 2), make_rational(5, 2)});
    const auto l = lambda1_at_zero(ops, kBits);
    ASSERT_EQ(l.warnings.size(), 1u);
    EXPECT_FALSE(l.value.is_zero());
}

TEST(CharPoly, EqualsPMinusQ)
{
    for (unsigned p = 1; p <= 6; ++p)
        for (const Rational& c : {Rational(0), special_c(p).c_sd, Rational(7)}) {
            const auto ops = build_esfr(p, c);
            const auto pair = build_pq(ops);
            EXPECT_EQ(char_poly(ops).as_poly(), pair.P - pair.Q) << p;
        }
}

TEST(CharPoly, LowOrderCoefficients)
{
    for (unsigned p = 1; p <= 6; ++p)
        for (const Rational& c : {Rational(0), make_rational(1, 3), Rational(1000)}) {
            const auto ops = build_esfr(p, c);
            const auto cp = char_poly(ops);
            EXPECT_EQ(cp.coeffs[0], 0);
            const Rational closed = sign_power(p) * Rational(2 * p + 1) * legendre_derivative_at(p, p - 1, 1) * ops.fc / 2;
            EXPECT_EQ(cp.coeffs[1], closed) << p;
        }
}

TEST(CharPoly, RootsMatchSpectrumAtZero)
{
    for (unsigned p = 1; p <= 6; ++p) {
        const auto ops = build_esfr(p, make_rational(1, 2));
        const auto roots = char_poly_roots(char_poly(ops), kBits);
        auto values = eigenvalues(von_neumann_H(ops, BigReal(kBits), kBits)).eigenvalues;
        ASSERT_EQ(roots.size(), values.size());
        for (const auto& r : roots) {
            BigReal best = abs(r - values[0]);
            for (const auto& v : values) best = min(best, abs(r - v));
            EXPECT_LT(best.to_double(), 1e-20);
        }
    }
}

TEST(CharPoly, SingleNullEigenvalue)
{
    for (unsigned p = 1; p <= 5; ++p)
        for (const Rational& c : {Rational(0), Rational(1), make_rational(1, 100000)}) {
            const auto m = null_multiplicity(build_esfr(p, c), kBits);
            EXPECT_EQ(m.count, 1u);
        }
}

TEST(Sweep, CsvLayout)
{
    const auto records = sweep(build_esfr(2, 0), BigReal(1e-2, kBits), BigReal(1e-1, kBits), 3, kBits);
    ASSERT_EQ(records.size(), 3u);
    EXPECT_FALSE(records[0].local_slope.has_value());
    EXPECT_NEAR(records[2].local_slope->to_double(), 6.0, 0.05);
    std::ostringstream os;
    write_sweep_csv(os, records);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "theta,ET,omega_re,omega_im,lambda1_re,lambda1_im,gap,slope");
    std::getline(in, line);
    EXPECT_EQ(line.back(), ',');
    std::size_t rows = 1;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 3u);
}

TEST(VonNeumann, PeriodicInTheta)
{
    const auto ops = build_esfr(3, make_rational(1, 4));
    const BigReal th(0.8, kBits);
    const auto a = von_neumann_H(ops, th, kBits);
    const auto b = von_neumann_H(ops, th + BigReal::pi(kBits) * 2L, kBits);
    EXPECT_LT((a - b).frobenius_norm().to_double(), 1e-50);
}

TEST(VonNeumann, AssemblyFromParts)
{
    // p=1, c=0, theta=0: H = -2i (D + M^{-1} l (l - r)^T), assembled by hand.
    const auto ops = build_esfr(1, 0);
    const auto h = von_neumann_H(ops, BigReal(kBits), kBits);
    // M^{-1} = diag(1/2, 3/2); l = (1, -1); l - r = (0, -2); D = [[0, 1], [0, 0]].
    const double inner[2][2] = {{0, 1 + 0.5 * 1 * -2}, {0, 1.5 * -1 * -2}};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            const BigComplex expect(BigReal(kBits), BigReal(-2 * inner[j][k], kBits));
            EXPECT_LT(abs(h(j, k) - expect).to_double(), 1e-55);
        }
}

TEST(VonNeumann, ModifiedDeterminantSpecialCases)
{
    for (unsigned p = 1; p <= 5; ++p) {
        const auto ops = build_esfr(p, 0);
        EXPECT_TRUE(determinant(modified_H(ops, BigReal(kBits), kBits)).is_zero() ||
                    abs(determinant(modified_H(ops, BigReal(kBits), kBits))).to_double() < 1e-50);
        // det(M+K) = prod 1/q_j
        BigComplexMatrix mk(p + 1, p + 1, kBits);
        Rational prod = 1;
        for (unsigned j = 0; j <= p; ++j) {
            mk.set(j, j, BigComplex(ops.M[j] + ops.K[j], kBits));
            prod /= ops.q[j];
        }
        EXPECT_LT(rel(determinant(mk), BigComplex(prod, kBits)).to_double(), 1e-55);
    }
}

TEST(SpectralOrder, ErrorBracketedByEstimate)
{
    // E_T / F stays within fixed bounds as theta decreases.
    for (const Rational& c : {make_rational(1, 10), Rational(1)}) {
        const auto ops = build_esfr(2, c);
        const auto grid = log_grid(BigReal(1e-5, kBits), BigReal(1e-2, kBits), 7);
        const auto samples = physical_eigenvalue(ops, grid, kBits);
        double lo = 1e300, hi = 0;
        for (const auto& s : samples) {
            const double ratio = (abs(s.omega_h - BigComplex(s.theta)) / estimate_F(2, c, s.theta)).to_double();
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        EXPECT_GT(lo, 0.0);
        EXPECT_LT(hi / lo, 1.5);
    }
}

TEST(SpectralOrder, PreAsymptoticAtLargeStep)
{
    const double at = measure_AT(build_esfr(2, 100), BigReal::pi(kBits) / 8L, kBits).to_double();
    EXPECT_NEAR(at, 3.0, 0.3);
}

TEST(SpectralOrder, DgSweepReachesTwoPPlusTwo)
{
    const auto records = sweep(build_esfr(2, 0), BigReal(1e-5, kBits), BigReal(1e-3, kBits), 5, kBits);
    EXPECT_NEAR(records.back().local_slope->to_double(), 6.0, 0.01);
}

TEST(SpectralOrder, ThreeFactorRatioIsFlat)
{
    // E_T |lambda1(theta) - theta| / |det H~(theta)| is asymptotically constant.
    for (const Rational& c : {Rational(1), Rational(100)}) {
        const auto ops = build_esfr(2, c);
        const auto records = sweep(ops, BigReal(1e-6, kBits), BigReal(1e-3, kBits), 7, kBits);
        std::vector<double> logs;
        for (const auto& r : records)
            logs.push_back(log(r.E_T * r.gap / abs(modified_determinant(ops, r.theta, kBits))).to_double());
        const double slope = (logs.back() - logs.front()) / std::log(1e3);
        EXPECT_LT(std::abs(slope), 0.05) << to_string(c);
    }
}

TEST(Lambda1, ShrinksAsCGrows)
{
    double prev = 1e300;
    for (long c : {10L, 100L, 1000L}) {
        const auto l = lambda1_at_zero(build_esfr(2, c), kBits);
        const double m = abs(l.value).to_double();
        EXPECT_LT(m, prev);
        EXPECT_GT(m, 0.0);
        prev = m;
    }
}

TEST(Lambda1, DgValueIsACharacteristicRoot)
{
    const auto ops = build_esfr(2, 0);
    const auto l = lambda1_at_zero(ops, kBits);
    const auto roots = char_poly_roots(char_poly(ops), kBits);
    BigReal best = abs(roots[0] - l.value);
    for (const auto& r : roots) best = min(best, abs(r - l.value));
    EXPECT_LT(best.to_double(), 1e-40);
    EXPECT_GT(abs(l.value).to_double(), 0.1);
}

TEST(CharPoly, NearDegenerateNullWarns)
{
    const auto m = null_multiplicity(build_esfr(2, 1000000000), kBits);
    EXPECT_EQ(m.count, 1u);
    EXPECT_EQ(m.warnings.size(), 1u);
    EXPECT_TRUE(null_multiplicity(build_esfr(2, 0), kBits).warnings.empty());
}
