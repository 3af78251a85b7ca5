#pragma once

// Configurable-precision real and complex scalars on top of MPFR.
//
// Every value owns its own precision. The result of a binary operation is
// computed at the larger precision of the two operands; there is no global
// default precision anywhere in the library.

#include "esfr/numerics/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace esfr {

using Bits = long;
inline constexpr Bits kDefaultPrecision = 192;
inline constexpr Bits kMinPrecision = 64;

class BigReal {
public:
    explicit BigReal(Bits bits = kDefaultPrecision)
    {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }
    BigReal(double x, Bits bits)
    {
        mpfr_init2(v_, bits);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    BigReal(long x, Bits bits)
    {
        mpfr_init2(v_, bits);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    BigReal(int x, Bits bits) : BigReal(static_cast<long>(x), bits) {}
    /// Correctly rounded conversion of an exact rational.
    BigReal(const Rational& q, Bits bits)
    {
        mpfr_init2(v_, bits);
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }

    static BigReal from_string(const std::string& text, Bits bits)
    {
        BigReal out(bits);
        if (mpfr_set_str(out.v_, text.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("malformed decimal '" + text + "'");
        return out;
    }
    static BigReal pi(Bits bits)
    {
        BigReal out(bits);
        mpfr_const_pi(out.v_, MPFR_RNDN);
        return out;
    }
    static BigReal nan(Bits bits)
    {
        BigReal out(bits);
        mpfr_set_nan(out.v_);
        return out;
    }

    BigReal(const BigReal& other)
    {
        mpfr_init2(v_, other.precision());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    BigReal(BigReal&& other) noexcept
    {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, other.v_);
    }
    BigReal& operator=(const BigReal& other)
    {
        if (this != &other) {
            mpfr_set_prec(v_, other.precision());
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigReal& operator=(BigReal&& other) noexcept
    {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~BigReal() { mpfr_clear(v_); }

    Bits precision() const { return mpfr_get_prec(v_); }
    /// Same value rounded to a new precision.
    BigReal rounded(Bits bits) const
    {
        BigReal out(bits);
        mpfr_set(out.v_, v_, MPFR_RNDN);
        return out;
    }

    mpfr_srcptr get() const { return v_; }
    mpfr_ptr get() { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    /// Shortest decimal that reads back to the identical value at this precision.
    std::string to_string() const
    {
        if (is_nan()) return "nan";
        if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
        if (is_zero()) return "0";
        mpfr_exp_t exp10 = 0;
        char* raw = mpfr_get_str(nullptr, &exp10, 10, 0, v_, MPFR_RNDN);
        std::string digits(raw);
        mpfr_free_str(raw);
        std::string sign_str;
        if (!digits.empty() && digits.front() == '-') {
            sign_str = "-";
            digits.erase(0, 1);
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        std::string out = sign_str + digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e" + std::to_string(static_cast<long>(exp10) - 1);
        return out;
    }
    /// Fixed number of significant digits, for human-readable reports.
    std::string to_string(int significant) const
    {
        std::string buf(static_cast<std::size_t>(significant) + 32, '\0');
        int n = mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", significant, v_);
        buf.resize(static_cast<std::size_t>(std::max(n, 0)));
        return buf;
    }

    BigReal operator-() const
    {
        BigReal out(precision());
        mpfr_neg(out.v_, v_, MPFR_RNDN);
        return out;
    }

    BigReal& operator+=(const BigReal& b) { return *this = *this + b; }
    BigReal& operator-=(const BigReal& b) { return *this = *this - b; }
    BigReal& operator*=(const BigReal& b) { return *this = *this * b; }
    BigReal& operator/=(const BigReal& b) { return *this = *this / b; }

#define ESFR_BIGREAL_BINOP(op, fn)                                        \
    friend BigReal operator op(const BigReal& a, const BigReal& b)       \
    {                                                                     \
        BigReal out(std::max(a.precision(), b.precision()));             \
        fn(out.v_, a.v_, b.v_, MPFR_RNDN);                                \
        return out;                                                       \
    }
    ESFR_BIGREAL_BINOP(+, mpfr_add)
    ESFR_BIGREAL_BINOP(-, mpfr_sub)
    ESFR_BIGREAL_BINOP(*, mpfr_mul)
    ESFR_BIGREAL_BINOP(/, mpfr_div)
#undef ESFR_BIGREAL_BINOP

    friend BigReal operator*(const BigReal& a, long k)
    {
        BigReal out(a.precision());
        mpfr_mul_si(out.v_, a.v_, k, MPFR_RNDN);
        return out;
    }
    friend BigReal operator*(long k, const BigReal& a) { return a * k; }
    friend BigReal operator/(const BigReal& a, long k)
    {
        BigReal out(a.precision());
        mpfr_div_si(out.v_, a.v_, k, MPFR_RNDN);
        return out;
    }

    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b)
    {
        if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
        int c = mpfr_cmp(a.v_, b.v_);
        if (c < 0) return std::partial_ordering::less;
        if (c > 0) return std::partial_ordering::greater;
        return std::partial_ordering::equivalent;
    }

    friend std::ostream& operator<<(std::ostream& os, const BigReal& x) { return os << x.to_string(); }

private:
    mpfr_t v_;
};

#define ESFR_BIGREAL_UNARY(name, fn)                 \
    inline BigReal name(const BigReal& x)            \
    {                                                \
        BigReal out(x.precision());                  \
        fn(out.get(), x.get(), MPFR_RNDN);           \
        return out;                                  \
    }
ESFR_BIGREAL_UNARY(abs, mpfr_abs)
ESFR_BIGREAL_UNARY(sqrt, mpfr_sqrt)
ESFR_BIGREAL_UNARY(log, mpfr_log)
ESFR_BIGREAL_UNARY(exp, mpfr_exp)
ESFR_BIGREAL_UNARY(sin, mpfr_sin)
ESFR_BIGREAL_UNARY(cos, mpfr_cos)
ESFR_BIGREAL_UNARY(log2, mpfr_log2)
#undef ESFR_BIGREAL_UNARY

inline BigReal atan2(const BigReal& y, const BigReal& x)
{
    BigReal out(std::max(x.precision(), y.precision()));
    mpfr_atan2(out.get(), y.get(), x.get(), MPFR_RNDN);
    return out;
}

inline BigReal hypot(const BigReal& x, const BigReal& y)
{
    BigReal out(std::max(x.precision(), y.precision()));
    mpfr_hypot(out.get(), x.get(), y.get(), MPFR_RNDN);
    return out;
}

inline BigReal pow(const BigReal& x, long n)
{
    BigReal out(x.precision());
    mpfr_pow_si(out.get(), x.get(), n, MPFR_RNDN);
    return out;
}

inline BigReal pow(const BigReal& x, const BigReal& y)
{
    BigReal out(std::max(x.precision(), y.precision()));
    mpfr_pow(out.get(), x.get(), y.get(), MPFR_RNDN);
    return out;
}

/// x * 2^k, exact.
inline BigReal ldexp(const BigReal& x, long k)
{
    BigReal out(x.precision());
    mpfr_mul_2si(out.get(), x.get(), k, MPFR_RNDN);
    return out;
}

inline const BigReal& max(const BigReal& a, const BigReal& b) { return (a < b) ? b : a; }
inline const BigReal& min(const BigReal& a, const BigReal& b) { return (b < a) ? b : a; }

/// Unit roundoff 2^-bits.
inline BigReal epsilon(Bits bits) { return ldexp(BigReal(1L, bits), -bits); }

inline BigReal to_big(const Rational& x, Bits bits)
{
    if (bits < kMinPrecision) throw std::invalid_argument("precision must be at least 64 bits");
    return BigReal(x, bits);
}

class BigComplex {
public:
    explicit BigComplex(Bits bits = kDefaultPrecision) : re_(bits), im_(bits) {}
    explicit BigComplex(BigReal re) : re_(std::move(re)), im_(re_.precision()) {}
    BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im))
    {
        Bits p = std::max(re_.precision(), im_.precision());
        if (re_.precision() != p) re_ = re_.rounded(p);
        if (im_.precision() != p) im_ = im_.rounded(p);
    }
    BigComplex(const Rational& re, Bits bits) : re_(re, bits), im_(bits) {}

    static BigComplex i(Bits bits) { return BigComplex(BigReal(bits), BigReal(1L, bits)); }
    /// e^{i phi}
    static BigComplex polar(const BigReal& phi) { return BigComplex(cos(phi), sin(phi)); }

    const BigReal& real() const { return re_; }
    const BigReal& imag() const { return im_; }
    Bits precision() const { return re_.precision(); }
    BigComplex rounded(Bits bits) const { return BigComplex(re_.rounded(bits), im_.rounded(bits)); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    BigComplex operator-() const { return BigComplex(-re_, -im_); }
    BigComplex& operator+=(const BigComplex& b) { return *this = *this + b; }
    BigComplex& operator-=(const BigComplex& b) { return *this = *this - b; }
    BigComplex& operator*=(const BigComplex& b) { return *this = *this * b; }
    BigComplex& operator/=(const BigComplex& b) { return *this = *this / b; }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b)
    {
        return BigComplex(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b)
    {
        return BigComplex(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b)
    {
        return BigComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b)
    {
        // Smith's algorithm keeps intermediate magnitudes bounded.
        if (abs(b.im_) <= abs(b.re_)) {
            BigReal r = b.im_ / b.re_;
            BigReal d = b.re_ + b.im_ * r;
            return BigComplex((a.re_ + a.im_ * r) / d, (a.im_ - a.re_ * r) / d);
        }
        BigReal r = b.re_ / b.im_;
        BigReal d = b.re_ * r + b.im_;
        return BigComplex((a.re_ * r + a.im_) / d, (a.im_ * r - a.re_) / d);
    }
    friend BigComplex operator*(const BigComplex& a, const BigReal& s) { return BigComplex(a.re_ * s, a.im_ * s); }
    friend BigComplex operator*(const BigReal& s, const BigComplex& a) { return a * s; }
    friend BigComplex operator/(const BigComplex& a, const BigReal& s) { return BigComplex(a.re_ / s, a.im_ / s); }
    friend BigComplex operator*(const BigComplex& a, long k) { return BigComplex(a.re_ * k, a.im_ * k); }
    friend BigComplex operator*(long k, const BigComplex& a) { return a * k; }

    friend bool operator==(const BigComplex& a, const BigComplex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    friend std::ostream& operator<<(std::ostream& os, const BigComplex& z)
    {
        return os << '(' << z.re_ << ',' << z.im_ << ')';
    }

private:
    BigReal re_;
    BigReal im_;
};

inline BigReal abs(const BigComplex& z) { return hypot(z.real(), z.imag()); }
inline BigReal norm(const BigComplex& z) { return z.real() * z.real() + z.imag() * z.imag(); }
inline BigReal arg(const BigComplex& z) { return atan2(z.imag(), z.real()); }
inline BigComplex conj(const BigComplex& z) { return BigComplex(z.real(), -z.imag()); }
inline BigComplex exp(const BigComplex& z) { return BigComplex::polar(z.imag()) * exp(z.real()); }
/// Principal branch.
inline BigComplex log(const BigComplex& z) { return BigComplex(log(abs(z)), arg(z)); }
inline BigComplex sqrt(const BigComplex& z)
{
    if (z.is_zero()) return z;
    BigReal r = abs(z);
    BigReal re = sqrt((r + z.real()) / 2L);
    BigReal im = sqrt((r - z.real()) / 2L);
    if (z.imag().sign() < 0) im = -im;
    return BigComplex(re, im);
}
inline BigComplex pow(const BigComplex& z, unsigned n)
{
    BigComplex out(BigReal(1L, z.precision()));
    BigComplex base = z;
    while (n > 0) {
        if (n & 1U) out *= base;
        base *= base;
        n >>= 1U;
    }
    return out;
}

}  // namespace esfr
