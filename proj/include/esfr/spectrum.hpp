#pragma once

// Von Neumann analysis of an FR operator bundle with upwind flux: the Bloch
// matrix H(theta), the modified matrix H~(theta), physical-eigenvalue
// selection and tracking, the dispersion-dissipation error E_T and its
// spectral order A_T, and the characteristic polynomial of H(0).

#include "esfr/approximants.hpp"
#include "esfr/detail/parallel.hpp"
#include "esfr/errors.hpp"
#include "esfr/numerics/eigen.hpp"
#include "esfr/operators.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace esfr {

/// H(theta) = -2i (D + (M+K)^{-1} l l^T - (M+K)^{-1} l r^T e^{-i theta})
inline BigComplexMatrix von_neumann_H(const FrOperators& ops, const BigReal& theta, Bits bits)
{
    const std::size_t n = ops.size();
    const BigComplex shift = BigComplex::polar(-theta.rounded(bits));
    const BigComplex minus_two_i(BigReal(bits), BigReal(-2L, bits));
    BigComplexMatrix h(n, n, bits);
    for (std::size_t j = 0; j < n; ++j) {
        const Rational ql = ops.q[j] * ops.l[j];
        for (std::size_t k = 0; k < n; ++k) {
            BigComplex entry(ops.D(j, k) + ql * ops.l[k], bits);
            entry -= BigComplex(ql * ops.r[k], bits) * shift;
            h.set(j, k, minus_two_i * entry);
        }
    }
    return h;
}

/// H~(theta) = (M+K)(D - (i theta / 2) I) + l (l - r e^{-i theta})^T
inline BigComplexMatrix modified_H(const FrOperators& ops, const BigReal& theta, Bits bits)
{
    const std::size_t n = ops.size();
    const BigReal th = theta.rounded(bits);
    const BigComplex shift = BigComplex::polar(-th);
    BigComplexMatrix h(n, n, bits);
    for (std::size_t j = 0; j < n; ++j) {
        const Rational mk = ops.M[j] + ops.K[j];
        for (std::size_t k = 0; k < n; ++k) {
            BigComplex entry(mk * ops.D(j, k) + ops.l[j] * ops.l[k], bits);
            entry -= BigComplex(ops.l[j] * ops.r[k], bits) * shift;
            if (j == k) entry -= BigComplex(BigReal(bits), to_big(mk, bits) * th / 2L);
            h.set(j, k, entry);
        }
    }
    return h;
}

/// Extra working bits covering the cancellation in det H~(theta), which is
/// O(theta^{2p+1}) (or smaller) while the entries are O(1).
inline Bits cancellation_guard_bits(unsigned p, const BigReal& theta)
{
    const double lg = -std::log2(std::min(1.0, std::abs(theta.to_double())));
    const double fact = std::lgamma(2.0 * p + 3.0) / std::log(2.0);
    return 64 + static_cast<Bits>(std::ceil((2.0 * p + 2.0) * lg + 2.0 * fact));
}

/// det H~(theta) from the matrix entries, evaluated with guard bits and
/// rounded to `bits`.
inline BigComplex modified_determinant(const FrOperators& ops, const BigReal& theta, Bits bits)
{
    const Bits work = bits + cancellation_guard_bits(ops.p, theta);
    return determinant(modified_H(ops, theta.rounded(work), work)).rounded(bits);
}

/// (-1)^{p+1} det(M+K) (P(i theta) - Q(i theta) e^{-i theta}): the closed form
/// of det H~(theta), evaluated with guard bits and rounded to `bits`.
inline BigComplex approximant_determinant(const FrOperators& ops, const BigReal& theta, Bits bits)
{
    const Bits work = bits + cancellation_guard_bits(ops.p, theta);
    const ApproximantPair pair = build_pq(ops);
    Rational det_mk = 1;
    for (const auto& qj : ops.q) det_mk /= qj;
    det_mk *= sign_power(ops.p + 1);
    const BigReal th = theta.rounded(work);
    const BigComplex z(BigReal(work), th);
    const BigComplex value = pair.P(z) - pair.Q(z) * BigComplex::polar(-th);
    return (BigComplex(det_mk, work) * value).rounded(bits);
}

namespace detail {

inline std::vector<BigComplex> spectrum_at(const FrOperators& ops, const BigReal& theta, Bits bits)
{
    return eigenvalues(von_neumann_H(ops, theta, bits)).eigenvalues;
}

inline std::size_t nearest_index(const std::vector<BigComplex>& values, const BigComplex& target,
                                 std::optional<std::size_t> exclude = std::nullopt)
{
    std::size_t best = values.size();
    BigReal best_dist(target.precision());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (exclude && *exclude == i) continue;
        BigReal d = abs(values[i] - target);
        if (best == values.size() || d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    return best;
}

/// Indices of the physical eigenvalue at each grid point. The first point is
/// anchored by argmin |lambda - theta|; later points follow the secant
/// prediction from the previous selections.
inline std::vector<std::size_t> track_physical(const std::vector<BigReal>& grid,
                                               const std::vector<std::vector<BigComplex>>& spectra)
{
    std::vector<std::size_t> picks(grid.size());
    if (grid.empty()) return picks;

    const BigComplex anchor(grid[0]);
    std::vector<std::pair<BigReal, std::size_t>> by_distance;
    for (std::size_t i = 0; i < spectra[0].size(); ++i) by_distance.emplace_back(abs(spectra[0][i] - anchor), i);
    std::sort(by_distance.begin(), by_distance.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (by_distance.size() > 1 && by_distance[1].first < by_distance[0].first * 2L)
        throw AmbiguousEigenvalueError("physical eigenvalue is ambiguous at theta = " + grid[0].to_string(8) +
                                       "; start the grid at a smaller theta");
    picks[0] = by_distance[0].second;

    for (std::size_t g = 1; g < grid.size(); ++g) {
        const BigComplex& prev = spectra[g - 1][picks[g - 1]];
        BigComplex predicted = prev * (grid[g] / grid[g - 1]);
        if (g >= 2) {
            const BigComplex& prev2 = spectra[g - 2][picks[g - 2]];
            predicted = prev + (prev - prev2) * ((grid[g] - grid[g - 1]) / (grid[g - 1] - grid[g - 2]));
        }
        picks[g] = nearest_index(spectra[g], predicted);
    }
    return picks;
}

inline void require_ascending_positive(const std::vector<BigReal>& grid)
{
    if (grid.empty()) throw PreconditionError("theta grid is empty");
    if (!(grid.front().sign() > 0)) throw PreconditionError("theta grid must be strictly positive");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i - 1] < grid[i])) throw PreconditionError("theta grid must be strictly ascending");
}

inline std::vector<std::vector<BigComplex>> spectra_on(const FrOperators& ops, const std::vector<BigReal>& grid,
                                                       Bits bits, unsigned jobs)
{
    std::vector<std::vector<BigComplex>> spectra(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) { spectra[i] = spectrum_at(ops, grid[i], bits); });
    return spectra;
}

}  // namespace detail

struct PhysicalSample {
    BigReal theta;
    BigComplex omega_h;
};

/// Physical eigenvalue omega^h on an ascending, strictly positive grid.
inline std::vector<PhysicalSample> physical_eigenvalue(const FrOperators& ops, const std::vector<BigReal>& grid,
                                                       Bits bits, unsigned jobs = 1)
{
    detail::require_ascending_positive(grid);
    const auto spectra = detail::spectra_on(ops, grid, bits, jobs);
    const auto picks = detail::track_physical(grid, spectra);
    std::vector<PhysicalSample> out;
    out.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) out.push_back({grid[g], spectra[g][picks[g]]});
    return out;
}

struct Lambda1 {
    BigComplex value;
    std::vector<std::string> warnings;
};

namespace detail {

/// Eigenvalues of H(0) ordered by modulus; entry 0 is the null eigenvalue.
inline std::vector<BigComplex> spectrum_by_modulus(const FrOperators& ops, Bits bits)
{
    std::vector<BigComplex> values = spectrum_at(ops, BigReal(bits), bits);
    std::stable_sort(values.begin(), values.end(),
                     [](const BigComplex& a, const BigComplex& b) { return abs(a) < abs(b); });
    return values;
}

}  // namespace detail

/// lambda1(0, c): the smallest-modulus eigenvalue of H(0) once the null
/// eigenvalue is removed. Identification is heuristic; a probe at a larger c
/// checks that the matched eigenvalue shrinks, and a warning is attached
/// otherwise.
inline Lambda1 lambda1_at_zero(const FrOperators& ops, Bits bits)
{
    if (ops.p < 1) throw PreconditionError("lambda1_at_zero: p must be >= 1");
    const auto values = detail::spectrum_by_modulus(ops, bits);
    Lambda1 out{values[1], {}};

    if (ops.kind != SchemeKind::esfr) {
        out.warnings.push_back("monotonicity probe skipped: bundle is not an ESFR scheme");
        return out;
    }
    Rational probe_c = 2 * ops.c;
    if (ops.c <= 0) {
        const Rational magnitude = abs(ops.c);
        probe_c = ops.c + (magnitude > 1 ? magnitude : Rational(1));
    }
    const auto probe = detail::spectrum_by_modulus(build_esfr(ops.p, probe_c), bits);
    std::vector<BigComplex> nonnull(probe.begin() + 1, probe.end());
    const BigComplex& matched = nonnull[detail::nearest_index(nonnull, out.value)];
    if (!(abs(matched) < abs(out.value)))
        out.warnings.push_back("lambda1 identification: modulus did not decrease when c was raised to " +
                               to_string(probe_c));
    return out;
}

struct SweepRecord {
    BigReal theta;
    BigComplex omega_h;
    BigReal E_T;
    BigComplex lambda1;
    BigReal gap;  ///< |lambda1 - theta|
    std::optional<BigReal> local_slope;
};

/// n log-spaced points from lo to hi inclusive.
inline std::vector<BigReal> log_grid(const BigReal& lo, const BigReal& hi, std::size_t points)
{
    if (!(lo.sign() > 0) || !(lo < hi)) throw PreconditionError("log grid needs 0 < lo < hi");
    if (points < 2) throw PreconditionError("log grid needs at least two points");
    const BigReal log_lo = log(lo);
    const BigReal step = (log(hi) - log_lo) / static_cast<long>(points - 1);
    std::vector<BigReal> grid;
    grid.reserve(points);
    for (std::size_t i = 0; i < points; ++i) grid.push_back(exp(log_lo + step * static_cast<long>(i)));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

inline std::vector<SweepRecord> sweep(const FrOperators& ops, const BigReal& theta_min, const BigReal& theta_max,
                                      std::size_t points, Bits bits, unsigned jobs = 1)
{
    const auto grid = log_grid(theta_min.rounded(bits), theta_max.rounded(bits), points);
    const auto spectra = detail::spectra_on(ops, grid, bits, jobs);
    const auto picks = detail::track_physical(grid, spectra);
    const Lambda1 anchor = lambda1_at_zero(ops, bits);

    std::vector<SweepRecord> out;
    out.reserve(points);
    BigComplex lambda_prev = anchor.value;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& values = spectra[g];
        const std::size_t lam = detail::nearest_index(values, lambda_prev, picks[g]);
        SweepRecord rec{grid[g], values[picks[g]], abs(values[picks[g]] - BigComplex(grid[g])), values[lam],
                        abs(values[lam] - BigComplex(grid[g])), std::nullopt};
        if (g > 0) {
            const SweepRecord& prev = out.back();
            rec.local_slope = (log(rec.E_T) - log(prev.E_T)) / (log(rec.theta) - log(prev.theta));
        }
        lambda_prev = rec.lambda1;
        out.push_back(std::move(rec));
    }
    return out;
}

/// E_T at theta (physical eigenvalue by argmin |lambda - theta| with the ambiguity check).
inline BigReal dispersion_error(const FrOperators& ops, const BigReal& theta, Bits bits)
{
    const auto s = physical_eigenvalue(ops, {theta.rounded(bits)}, bits);
    return abs(s[0].omega_h - BigComplex(s[0].theta));
}

/// A_T = [ln E_T(dtheta) - ln E_T(dtheta/2)] / ln 2 - 1
inline BigReal measure_AT(const FrOperators& ops, const BigReal& dtheta, Bits bits)
{
    if (!(dtheta.sign() > 0)) throw PreconditionError("measure_AT: dtheta must be positive");
    const BigReal full = dtheta.rounded(bits);
    const BigReal half = full / 2L;
    const auto samples = physical_eigenvalue(ops, {half, full}, bits);
    const BigReal noise = ldexp(BigReal(1L, bits), -bits + 32);
    std::vector<BigReal> errors;
    for (const auto& s : samples) {
        BigReal e = abs(s.omega_h - BigComplex(s.theta));
        if (!(e > s.theta * noise))
            throw PrecisionError("E_T(" + s.theta.to_string(6) + ") is at the rounding level of " +
                                 std::to_string(bits) + "-bit arithmetic; rerun with higher precision");
        errors.push_back(std::move(e));
    }
    const BigReal ln2 = log(BigReal(2L, bits));
    return (log(errors[1]) - log(errors[0])) / ln2 - BigReal(1L, bits);
}

struct AtSample {
    Rational c;
    BigReal numeric;
    BigReal semianalytic;
    BigComplex lambda1;
    std::vector<std::string> warnings;
};

/// Numeric A_T and its semi-analytic estimate from lambda1(0, c), per c value.
inline std::vector<AtSample> at_vs_c(unsigned p, const BigReal& dtheta, const std::vector<Rational>& cs, Bits bits,
                                     unsigned jobs = 1)
{
    std::vector<AtSample> out(cs.size(), AtSample{0, BigReal(bits), BigReal(bits), BigComplex(bits), {}});
    detail::parallel_for(cs.size(), jobs, [&](std::size_t i) {
        const FrOperators ops = build_esfr(p, cs[i]);
        const Lambda1 l1 = lambda1_at_zero(ops, bits);
        out[i] = AtSample{cs[i], measure_AT(ops, dtheta, bits), semianalytic_AT(p, cs[i], dtheta.rounded(bits), l1.value),
                          l1.value, l1.warnings};
    });
    return out;
}

/// Log-spaced positive values, each rounded to 20 significant digits and
/// read back as an exact decimal fraction.
inline std::vector<Rational> log_rational_grid(const Rational& lo, const Rational& hi, std::size_t points)
{
    if (points == 1) return {lo};
    std::vector<Rational> out;
    for (const auto& v : log_grid(to_big(lo, 128), to_big(hi, 128), points)) out.push_back(parse_rational(v.to_string(20)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

struct CharPoly {
    unsigned p = 0;
    Rational c;
    std::vector<Rational> coeffs;  ///< c_{k,p}, k = 0..p
    Rational leading;              ///< 2^{-(p+1)}, coefficient of (i lambda)^{p+1}

    /// The polynomial in z = i lambda.
    ExactPoly as_poly() const
    {
        std::vector<Rational> all = coeffs;
        all.push_back(leading);
        return ExactPoly(std::move(all));
    }
};

/// c_{k,p} = sum_{j=0}^{k} (-1)^p ((-1)^j - (-1)^k) 2^{-k} q_{p-j} psi_{p-j}^{(p-k)}(1)
inline CharPoly char_poly(const FrOperators& ops)
{
    const unsigned p = ops.p;
    CharPoly out;
    out.p = p;
    out.c = ops.c;
    out.leading = pow2(-static_cast<long>(p + 1));
    out.coeffs.assign(p + 1, Rational(0));
    const Rational one = 1;
    for (unsigned k = 0; k <= p; ++k) {
        Rational acc = 0;
        for (unsigned j = 0; j <= k; ++j) {
            const int weight = sign_power(p) * (sign_power(j) - sign_power(k));
            if (weight == 0) continue;
            acc += weight * pow2(-static_cast<long>(k)) * ops.q[p - j] * legendre_derivative_at(p - j, p - k, one);
        }
        acc.canonicalize();
        out.coeffs[k] = acc;
    }
    return out;
}

/// Roots lambda of 2^{-(p+1)} (i lambda)^{p+1} + sum_k c_{k,p} (i lambda)^k,
/// from the companion matrix and polished by Newton steps.
inline std::vector<BigComplex> char_poly_roots(const CharPoly& cp, Bits bits)
{
    const std::size_t n = cp.p + 1;
    BigComplexMatrix companion(n, n, bits);
    for (std::size_t i = 1; i < n; ++i) companion.set(i, i - 1, BigComplex(BigReal(1L, bits)));
    for (std::size_t i = 0; i < n; ++i) companion.set(i, n - 1, BigComplex(Rational(-cp.coeffs[i] / cp.leading), bits));
    std::vector<BigComplex> z = eigenvalues(companion).eigenvalues;

    const ExactPoly poly = cp.as_poly();
    const ExactPoly dpoly = poly.derivative();
    for (auto& root : z) {
        for (int it = 0; it < 3; ++it) {
            BigComplex d = dpoly(root);
            if (d.is_zero()) break;
            root -= poly(root) / d;
        }
    }
    std::vector<BigComplex> lambdas;
    lambdas.reserve(n);
    const BigComplex minus_i(BigReal(bits), BigReal(-1L, bits));
    for (const auto& root : z) lambdas.push_back(minus_i * root);
    detail::sort_eigenvalues(lambdas);
    return lambdas;
}

struct NullMultiplicity {
    unsigned count = 0;
    std::vector<std::string> warnings;
};

/// Number of eigenvalues of H(0) with modulus below 2^{-bits/2}. A warning is
/// attached when the smallest non-null eigenvalue is within a factor 1e-6 of
/// the spectral radius, i.e. the null eigenvalue is close to coalescing.
inline NullMultiplicity null_multiplicity(const FrOperators& ops, Bits bits)
{
    const auto values = detail::spectrum_by_modulus(ops, bits);
    const BigReal threshold = ldexp(BigReal(1L, bits), -bits / 2);
    NullMultiplicity out;
    for (const auto& v : values)
        if (abs(v) < threshold) ++out.count;
    if (out.count < values.size()) {
        const BigReal& radius = abs(values.back());
        const BigReal smallest = abs(values[out.count]);
        if (smallest < radius * BigReal(1e-6, bits))
            out.warnings.push_back("near-degenerate null eigenvalue: next eigenvalue has modulus " +
                                   smallest.to_string(6));
    }
    return out;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records)
{
    os << "theta,ET,omega_re,omega_im,lambda1_re,lambda1_im,gap,slope\n";
    for (const auto& r : records) {
        os << r.theta << ',' << r.E_T << ',' << r.omega_h.real() << ',' << r.omega_h.imag() << ','
           << r.lambda1.real() << ',' << r.lambda1.imag() << ',' << r.gap << ',';
        if (r.local_slope) os << *r.local_slope;
        os << '\n';
    }
}

}  // namespace esfr
