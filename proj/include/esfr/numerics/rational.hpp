#pragma once

// Exact rational scalars backed by GMP's C++ interface.

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace esfr {

using Integer = mpz_class;
using Rational = mpq_class;  // always kept canonical (lowest terms, den > 0)

inline Rational make_rational(long num, long den = 1)
{
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r{Integer(num), Integer(den)};
    r.canonicalize();
    return r;
}

inline Integer factorial(unsigned long n)
{
    Integer out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

/// 2^k for any integer k, exactly.
inline Rational pow2(long k)
{
    Integer one = 1;
    Rational out;
    if (k >= 0) {
        Integer big;
        mpz_mul_2exp(big.get_mpz_t(), one.get_mpz_t(), static_cast<unsigned long>(k));
        out = Rational(big);
    } else {
        Integer big;
        mpz_mul_2exp(big.get_mpz_t(), one.get_mpz_t(), static_cast<unsigned long>(-k));
        out = Rational(Integer(1), big);
    }
    out.canonicalize();
    return out;
}

inline Rational pow(const Rational& base, unsigned n)
{
    Rational out = 1;
    for (unsigned i = 0; i < n; ++i) out *= base;
    return out;
}

/// (-1)^n
inline int sign_power(long n) { return (n % 2 == 0) ? 1 : -1; }

/// "num/den", or just "num" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "a/b", "-12", "0.125", "1e-3", "2.5E+4" into an exact rational.
/// Decimal strings are read as exact decimal fractions, never via binary floats.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    };
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) return fail();

    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) return fail();
        Rational out = num / den;
        out.canonicalize();
        return out;
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    std::string digits;
    long exponent = 0;
    bool seen_digit = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
        digits += s[i];
        seen_digit = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
            digits += s[i];
            --exponent;
            seen_digit = true;
        }
    }
    if (!seen_digit) return fail();
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            exp_negative = s[i] == '-';
            ++i;
        }
        if (i >= s.size()) return fail();
        long e = 0;
        for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
            e = e * 10 + (s[i] - '0');
            if (e > 100000) return fail();
        }
        exponent += exp_negative ? -e : e;
    }
    if (i != s.size()) return fail();

    Integer mantissa(digits, 10);
    Integer ten_power;
    mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational out = exponent >= 0 ? Rational(mantissa * ten_power) : Rational(mantissa, ten_power);
    out.canonicalize();
    return negative ? Rational(-out) : out;
}

inline std::vector<std::string> to_strings(const std::vector<Rational>& values)
{
    std::vector<std::string> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(to_string(v));
    return out;
}

}  // namespace esfr
