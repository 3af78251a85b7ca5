#pragma once

// 1D periodic linear advection (unit speed) with an FR spatial operator and
// full upwind flux, advanced in time with classical RK4. Used to check the
// von Neumann predictions against actual propagation of a Bloch wave.

#include "esfr/errors.hpp"
#include "esfr/numerics/matrix.hpp"
#include "esfr/operators.hpp"
#include "esfr/spectrum.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace esfr {

struct Mesh {
    unsigned N = 0;       ///< element count
    Rational length = 0;  ///< domain length; elements are uniform

    Mesh(unsigned elements, Rational domain_length) : N(elements), length(std::move(domain_length))
    {
        if (N < 2) throw PreconditionError("mesh needs at least two elements");
        if (!(length > 0)) throw PreconditionError("mesh length must be positive");
    }
    Rational element_size() const
    {
        Rational h = length / Rational(N);
        h.canonicalize();
        return h;
    }
};

/// Lifting of exact operator entries into the state scalar type.
template <class Scalar>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static Rational lift(const Rational& q, Bits) { return q; }
};

template <>
struct scalar_traits<BigComplex> {
    static BigComplex lift(const Rational& q, Bits bits) { return BigComplex(q, bits); }
};

/// Element k occupies coefficients [k (p+1), (k+1)(p+1)).
template <class Scalar>
std::vector<Scalar> rhs_coeffs(const FrOperators& ops, const Mesh& mesh, std::span<const Scalar> u, Bits bits)
{
    using T = scalar_traits<Scalar>;
    const std::size_t n = ops.size();
    if (u.size() != n * mesh.N) throw PreconditionError("state shape does not match mesh and degree");

    const Rational scale_q = Rational(-2) / mesh.element_size();
    const Scalar scale = T::lift(scale_q, bits);
    std::vector<Scalar> D(n * n), hL(n), l(n), r(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < n; ++m) D[j * n + m] = T::lift(ops.D(j, m), bits);
        hL[j] = T::lift(ops.hL[j], bits);
        l[j] = T::lift(ops.l[j], bits);
        r[j] = T::lift(ops.r[j], bits);
    }

    std::vector<Scalar> rates(u.size(), T::lift(Rational(0), bits));
    for (std::size_t k = 0; k < mesh.N; ++k) {
        const std::size_t left = (k + mesh.N - 1) % mesh.N;
        const Scalar* uk = &u[k * n];
        const Scalar* ul = &u[left * n];
        Scalar upwind = T::lift(Rational(0), bits);  // f*_L = r^T u_{k-1}
        Scalar own_left = T::lift(Rational(0), bits);
        for (std::size_t j = 0; j < n; ++j) {
            upwind += r[j] * ul[j];
            own_left += l[j] * uk[j];
        }
        const Scalar jump = upwind - own_left;
        // The right interface term vanishes: f*_R = r^T u_k for upwinding.
        for (std::size_t j = 0; j < n; ++j) {
            Scalar acc = jump * hL[j];
            for (std::size_t m = j + 1; m < n; ++m)
                if (ops.D(j, m) != 0) acc += D[j * n + m] * uk[m];
            rates[k * n + j] = scale * acc;
        }
    }
    return rates;
}

struct SimState {
    BigReal t;
    std::vector<BigComplex> coeffs;  ///< N x (p+1), element-major
};

inline std::vector<BigComplex> rhs(const FrOperators& ops, const Mesh& mesh, const SimState& state)
{
    const Bits bits = state.coeffs.empty() ? state.t.precision() : state.coeffs.front().precision();
    return rhs_coeffs<BigComplex>(ops, mesh, std::span<const BigComplex>(state.coeffs), bits);
}

inline BigReal state_norm(const std::vector<BigComplex>& u, Bits bits)
{
    BigReal acc(bits);
    for (const auto& z : u) acc += norm(z);
    return sqrt(acc);
}

/// Broken (M+K)-weighted energy, (h/2) sum_k u_k^H (M+K) u_k.
inline BigReal energy(const FrOperators& ops, const Mesh& mesh, const SimState& state)
{
    const Bits bits = state.t.precision();
    const std::size_t n = ops.size();
    BigReal acc(bits);
    for (std::size_t k = 0; k < mesh.N; ++k)
        for (std::size_t j = 0; j < n; ++j) acc += to_big(ops.M[j] + ops.K[j], bits) * norm(state.coeffs[k * n + j]);
    return acc * to_big(mesh.element_size() / 2, bits);
}

/// Classical RK4. `observer(state)` is called after every step when given.
template <class Observer>
SimState rk4_advance(const FrOperators& ops, const Mesh& mesh, SimState state, const BigReal& dt, long steps,
                     Observer&& observer)
{
    if (!(dt.sign() > 0)) throw PreconditionError("rk4_advance: dt must be positive");
    const Bits bits = state.t.precision();
    const BigReal initial_norm = state_norm(state.coeffs, bits);
    const BigReal limit = initial_norm * BigReal(1e10, bits);
    const BigReal half = dt / 2L;
    const BigReal sixth = dt / 6L;
    const std::size_t size = state.coeffs.size();

    auto axpy = [&](const std::vector<BigComplex>& x, const BigReal& a, const std::vector<BigComplex>& y) {
        std::vector<BigComplex> out(size, BigComplex(bits));
        for (std::size_t i = 0; i < size; ++i) out[i] = x[i] + y[i] * a;
        return out;
    };
    auto f = [&](const std::vector<BigComplex>& u) {
        return rhs_coeffs<BigComplex>(ops, mesh, std::span<const BigComplex>(u), bits);
    };

    for (long step = 0; step < steps; ++step) {
        const auto& u = state.coeffs;
        auto k1 = f(u);
        auto k2 = f(axpy(u, half, k1));
        auto k3 = f(axpy(u, half, k2));
        auto k4 = f(axpy(u, dt, k3));
        for (std::size_t i = 0; i < size; ++i)
            state.coeffs[i] += (k1[i] + (k2[i] + k3[i]) * 2L + k4[i]) * sixth;
        state.t += dt;
        if (!initial_norm.is_zero() && state_norm(state.coeffs, bits) > limit)
            throw InstabilityError("rk4_advance: solution norm grew by more than 1e10 at step " +
                                   std::to_string(step + 1));
        observer(state);
    }
    return state;
}

inline SimState rk4_advance(const FrOperators& ops, const Mesh& mesh, SimState state, const BigReal& dt, long steps)
{
    return rk4_advance(ops, mesh, std::move(state), dt, steps, [](const SimState&) {});
}

/// 0.05 |Omega_k| / (2p+1)
inline Rational default_time_step(const FrOperators& ops, const Mesh& mesh)
{
    Rational dt = Rational(1, 20) * mesh.element_size() / Rational(2 * ops.p + 1);
    dt.canonicalize();
    return dt;
}

/// Observed temporal order of RK4 from runs with dt, dt/2 and dt/4.
inline BigReal rk4_order_probe(const FrOperators& ops, const Mesh& mesh, const SimState& initial, const BigReal& dt,
                               long steps)
{
    const Bits bits = initial.t.precision();
    auto run = [&](long refine) {
        return rk4_advance(ops, mesh, initial, dt / refine, steps * refine).coeffs;
    };
    const auto coarse = run(1);
    const auto mid = run(2);
    const auto fine = run(4);
    std::vector<BigComplex> d1(coarse.size(), BigComplex(bits)), d2(coarse.size(), BigComplex(bits));
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        d1[i] = coarse[i] - mid[i];
        d2[i] = mid[i] - fine[i];
    }
    return log2(state_norm(d1, bits) / state_norm(d2, bits));
}

struct BlochSample {
    BigReal t;
    BigReal amplitude;
    BigReal phase;  ///< unwrapped
    BigReal energy;
};

struct BlochResult {
    BigComplex measured_omega;   ///< |Omega_k| times the physical angular frequency
    BigComplex predicted_omega;  ///< omega^h(theta)
    BigReal contamination;       ///< relative non-Bloch content at the final time
    std::vector<BlochSample> history;
    std::vector<std::string> warnings;
};

/// Eigenvector of H(theta) for the eigenvalue nearest `shift`, by inverse iteration.
inline std::vector<BigComplex> bloch_vector(const FrOperators& ops, const BigReal& theta, const BigComplex& shift,
                                            Bits bits)
{
    const std::size_t n = ops.size();
    BigComplexMatrix a = von_neumann_H(ops, theta, bits);
    for (std::size_t i = 0; i < n; ++i) a.set(i, i, a(i, i) - shift);
    std::vector<BigComplex> x(n, BigComplex(BigReal(1L, bits)));
    for (int it = 0; it < 4; ++it) {
        x = solve(a, x);
        const BigReal nx = state_norm(x, bits);
        for (auto& xi : x) xi = xi / nx;
    }
    return x;
}

/// Propagates the Bloch mode of wavenumber theta (theta N must be a multiple
/// of 2 pi) to time T and extracts its complex frequency from the modal
/// projection. Samples the history every `sample_every` steps.
inline BlochResult bloch_experiment(const FrOperators& ops, const Mesh& mesh, const BigReal& theta, const BigReal& T,
                                    const BigReal& dt, Bits bits, long sample_every = 1)
{
    const BigReal two_pi = BigReal::pi(bits) * 2L;
    const BigReal periods = theta.rounded(bits) * static_cast<long>(mesh.N) / two_pi;
    BigReal nearest(std::round(periods.to_double()), bits);
    if (abs(periods - nearest) > ldexp(BigReal(1L, bits), -bits / 2))
        throw PreconditionError("theta * N must be a multiple of 2 pi for a periodic Bloch mode");
    if (!(T.sign() > 0) || !(dt.sign() > 0)) throw PreconditionError("T and dt must be positive");

    const std::size_t n = ops.size();
    const BigReal th = theta.rounded(bits);
    BlochResult out{BigComplex(bits), BigComplex(bits), BigReal(bits), {}, {}};
    out.predicted_omega = physical_eigenvalue(ops, {th}, bits)[0].omega_h;
    const auto v = bloch_vector(ops, th, out.predicted_omega, bits);

    BigReal vv(bits);
    for (const auto& vi : v) vv += norm(vi);

    SimState state{BigReal(bits), std::vector<BigComplex>(n * mesh.N, BigComplex(bits))};
    std::vector<BigComplex> phases(mesh.N, BigComplex(bits));
    for (std::size_t k = 0; k < mesh.N; ++k) {
        phases[k] = BigComplex::polar(th * static_cast<long>(k));
        for (std::size_t j = 0; j < n; ++j) state.coeffs[k * n + j] = phases[k] * v[j];
    }

    auto project = [&](const SimState& s) {
        BigComplex acc(bits);
        for (std::size_t k = 0; k < mesh.N; ++k) {
            BigComplex dot(bits);
            for (std::size_t j = 0; j < n; ++j) dot += conj(v[j]) * s.coeffs[k * n + j];
            acc += conj(phases[k]) * dot;
        }
        return acc / (vv * static_cast<long>(mesh.N));
    };

    const BigComplex a0 = project(state);
    BigComplex a_prev = a0;
    BigReal phase(bits);
    long step = 0;
    out.history.push_back({state.t, abs(a0), phase, energy(ops, mesh, state)});

    const long steps = std::max(1L, static_cast<long>(std::ceil((T / dt).to_double() - 1e-9)));
    const BigReal step_dt = T / steps;
    SimState final_state = rk4_advance(ops, mesh, state, step_dt, steps, [&](const SimState& s) {
        ++step;
        const BigComplex a = project(s);
        phase += arg(a / a_prev);
        a_prev = a;
        if (step % sample_every == 0 || step == steps)
            out.history.push_back({s.t, abs(a), phase, energy(ops, mesh, s)});
    });

    // a(T) = a(0) exp(-i omega T)
    const BigReal log_ratio = log(abs(a_prev) / abs(a0));
    const BigComplex omega_phys((-phase) / T, log_ratio / T);
    out.measured_omega = omega_phys * to_big(mesh.element_size(), bits);

    std::vector<BigComplex> residual(final_state.coeffs.size(), BigComplex(bits));
    for (std::size_t k = 0; k < mesh.N; ++k)
        for (std::size_t j = 0; j < n; ++j)
            residual[k * n + j] = final_state.coeffs[k * n + j] - a_prev * phases[k] * v[j];
    out.contamination = state_norm(residual, bits) / state_norm(final_state.coeffs, bits);
    if (out.contamination > ldexp(BigReal(1L, bits), -bits / 2))
        out.warnings.push_back("non-Bloch contamination " + out.contamination.to_string(4) +
                               " exceeds tolerance; eigenvector may be inaccurate");
    return out;
}

}  // namespace esfr
