#pragma once

// Eigenvalues of small dense complex matrices: Householder reduction to upper
// Hessenberg form followed by single-shift complex QR (Wilkinson shifts,
// Givens sweeps, aggressive-free standard deflation).

#include "esfr/numerics/matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace esfr {

struct EigenResult {
    std::vector<BigComplex> eigenvalues;  ///< sorted by (real, imag)
    long iterations = 0;
    bool converged = false;
    /// Relative backward error estimate ||E||_F / ||A||_F: the eigenvalues are
    /// exact for some A + E. Never below the rounding floor of the precision.
    BigReal residual_bound;
};

class EigenConvergenceError : public std::runtime_error {
public:
    EigenConvergenceError(const std::string& what, EigenResult partial)
        : std::runtime_error(what), partial_(std::move(partial))
    {
    }
    const EigenResult& partial() const { return partial_; }

private:
    EigenResult partial_;
};

inline constexpr std::size_t kMaxEigenDimension = 16;

/// Deflation tolerance used when none is requested: 2^(-bits+16).
inline BigReal default_eigen_tolerance(Bits bits) { return ldexp(BigReal(1L, bits), -bits + 16); }

namespace detail {

inline void sort_eigenvalues(std::vector<BigComplex>& values)
{
    std::sort(values.begin(), values.end(), [](const BigComplex& a, const BigComplex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

inline void reduce_to_hessenberg(BigComplexMatrix& h)
{
    const std::size_t n = h.rows();
    const Bits bits = h.precision();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        BigReal alpha_norm(bits);
        for (std::size_t i = k + 1; i < n; ++i) alpha_norm += norm(h(i, k));
        alpha_norm = sqrt(alpha_norm);
        if (alpha_norm.is_zero()) continue;

        // v = x + e^{i arg x0} ||x|| e1, reflector I - 2 v v^H / (v^H v)
        std::vector<BigComplex> v;
        v.reserve(n - k - 1);
        for (std::size_t i = k + 1; i < n; ++i) v.push_back(h(i, k));
        BigReal x0_abs = abs(v[0]);
        BigComplex phase = x0_abs.is_zero() ? BigComplex(BigReal(1L, bits)) : v[0] / x0_abs;
        v[0] += phase * alpha_norm;
        BigReal vnorm2(bits);
        for (const auto& vi : v) vnorm2 += norm(vi);
        if (vnorm2.is_zero()) continue;

        // Left: rows k+1..n-1, all columns.
        for (std::size_t j = 0; j < n; ++j) {
            BigComplex dot(bits);
            for (std::size_t i = 0; i < v.size(); ++i) dot += conj(v[i]) * h(k + 1 + i, j);
            BigComplex scale = dot * BigReal(2L, bits) / vnorm2;
            for (std::size_t i = 0; i < v.size(); ++i) h.set(k + 1 + i, j, h(k + 1 + i, j) - v[i] * scale);
        }
        // Right: columns k+1..n-1, all rows.
        for (std::size_t i = 0; i < n; ++i) {
            BigComplex dot(bits);
            for (std::size_t j = 0; j < v.size(); ++j) dot += h(i, k + 1 + j) * v[j];
            BigComplex scale = dot * BigReal(2L, bits) / vnorm2;
            for (std::size_t j = 0; j < v.size(); ++j) h.set(i, k + 1 + j, h(i, k + 1 + j) - scale * conj(v[j]));
        }
        for (std::size_t i = k + 2; i < n; ++i) h.set(i, k, BigComplex(bits));
    }
}

/// Eigenvalue of the 2x2 block [[a, b], [c, d]] closest to d.
inline BigComplex wilkinson_shift(const BigComplex& a, const BigComplex& b, const BigComplex& c, const BigComplex& d)
{
    BigComplex half_diff = (a - d) * BigReal(0.5, a.precision());
    BigComplex disc = sqrt(half_diff * half_diff + b * c);
    BigComplex mu1 = d + half_diff + disc;
    BigComplex mu2 = d + half_diff - disc;
    return abs(mu1 - d) <= abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace detail

/// All eigenvalues of a square matrix (dimension <= 16), with multiplicity.
/// `tol` is the relative deflation threshold on the Hessenberg subdiagonal.
/// Throws EigenConvergenceError carrying the partial result when the
/// iteration cap is hit.
inline EigenResult eigenvalues(const BigComplexMatrix& a, const BigReal& tol, long max_iterations_per_eigenvalue = 60)
{
    a.require_square("eigenvalues");
    if (a.rows() > kMaxEigenDimension)
        throw std::invalid_argument("eigenvalues: dimension exceeds " + std::to_string(kMaxEigenDimension));
    if (!(tol.sign() > 0)) throw std::invalid_argument("eigenvalues: tolerance must be positive");

    const std::size_t n = a.rows();
    const Bits bits = a.precision();
    const BigReal eps = epsilon(bits);
    const BigReal a_norm = a.frobenius_norm();
    const BigReal floor = eps * static_cast<long>(4 * n * n);

    EigenResult result;
    result.residual_bound = floor;
    if (n == 0) {
        result.converged = true;
        return result;
    }

    BigComplexMatrix h = a;
    detail::reduce_to_hessenberg(h);

    std::vector<BigComplex> eig(n, BigComplex(bits));
    std::vector<bool> found(n, false);
    BigReal worst(bits);  // largest relative size of a subdiagonal we zeroed
    long since_deflation = 0;

    std::size_t hi = n - 1;
    while (true) {
        // Locate the start of the trailing unreduced block.
        std::size_t lo = hi;
        while (lo > 0) {
            const BigReal sub = abs(h(lo, lo - 1));
            const BigReal local = abs(h(lo - 1, lo - 1)) + abs(h(lo, lo));
            bool negligible = false;
            BigReal rel(bits);
            if (sub <= tol * local) {
                negligible = true;
                rel = a_norm.is_zero() ? BigReal(bits) : sub / a_norm;
            } else if (sub <= eps * a_norm) {
                negligible = true;
                rel = eps;
            }
            if (negligible) {
                if (rel > worst) worst = rel;
                h.set(lo, lo - 1, BigComplex(bits));
                break;
            }
            --lo;
        }

        if (lo == hi) {
            eig[hi] = h(hi, hi);
            found[hi] = true;
            since_deflation = 0;
            if (hi == 0) break;
            --hi;
            continue;
        }

        ++since_deflation;
        ++result.iterations;
        if (since_deflation > max_iterations_per_eigenvalue) {
            for (std::size_t i = 0; i < n; ++i)
                if (!found[i]) eig[i] = h(i, i);
            result.eigenvalues = eig;
            detail::sort_eigenvalues(result.eigenvalues);
            result.converged = false;
            result.residual_bound = max(worst, floor);
            throw EigenConvergenceError("eigenvalues: QR iteration did not converge after " +
                                            std::to_string(result.iterations) + " sweeps",
                                        result);
        }

        BigComplex shift(bits);
        if (since_deflation % 11 == 0) {
            // Exceptional shift to break cycles.
            BigReal s = abs(h(hi, hi - 1).real()) + abs(h(hi, hi - 1).imag());
            if (hi >= 2) s += abs(h(hi - 1, hi - 2).real()) + abs(h(hi - 1, hi - 2).imag());
            shift = h(hi, hi) + BigComplex(s * BigReal(0.75, bits));
        } else {
            shift = detail::wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        // One explicit-shift QR sweep on the active block [lo, hi].
        for (std::size_t i = lo; i <= hi; ++i) h.set(i, i, h(i, i) - shift);
        struct Rotation {
            BigReal c;
            BigComplex s;
        };
        std::vector<Rotation> rotations;
        rotations.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            const BigComplex& x = h(k, k);
            const BigComplex& y = h(k + 1, k);
            BigReal ax = abs(x);
            BigReal r = hypot(ax, abs(y));
            Rotation rot{BigReal(bits), BigComplex(bits)};
            if (r.is_zero()) {
                rot.c = BigReal(1L, bits);
            } else if (ax.is_zero()) {
                rot.s = BigComplex(BigReal(1L, bits));
            } else {
                rot.c = ax / r;
                rot.s = (x / ax) * conj(y) / r;
            }
            for (std::size_t j = k; j <= hi; ++j) {
                BigComplex u = h(k, j);
                BigComplex w = h(k + 1, j);
                h.set(k, j, rot.c * u + rot.s * w);
                h.set(k + 1, j, rot.c * w - conj(rot.s) * u);
            }
            rotations.push_back(std::move(rot));
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const Rotation& rot = rotations[k - lo];
            std::size_t last = std::min(k + 2, hi);
            for (std::size_t i = lo; i <= last; ++i) {
                BigComplex u = h(i, k);
                BigComplex w = h(i, k + 1);
                h.set(i, k, rot.c * u + conj(rot.s) * w);
                h.set(i, k + 1, rot.c * w - rot.s * u);
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h.set(i, i, h(i, i) + shift);
    }

    result.eigenvalues = std::move(eig);
    detail::sort_eigenvalues(result.eigenvalues);
    result.converged = true;
    result.residual_bound = max(worst, floor);
    return result;
}

inline EigenResult eigenvalues(const BigComplexMatrix& a)
{
    return eigenvalues(a, default_eigen_tolerance(a.precision()));
}

}  // namespace esfr
