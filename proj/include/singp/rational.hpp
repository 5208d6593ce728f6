#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "singp/errors.hpp"

namespace singp {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "num", "num/den" or a plain decimal like "0.25" into an exact rational.
inline Rational rat_from_string(const std::string& s) {
    auto dot = s.find('.');
    if (dot != std::string::npos && s.find('/') == std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac_len = s.size() - dot - 1;
        Integer num(digits, 10);
        Integer den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0) throw DomainError("invalid rational: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rational& q) { return q.get_str(); }

inline Rational rat_pow(const Rational& base, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
    // num/den already coprime, so the power is canonical.
    return r;
}

inline bool rat_is_integer(const Rational& q) { return q.get_den() == 1; }

// Formats q in fixed-point decimal with `digits` significant digits,
// rounding toward zero. Exact arithmetic until the final string.
inline std::string rat_to_decimal(const Rational& q, int digits) {
    if (q == 0) return "0";
    std::string sign = q < 0 ? "-" : "";
    Rational a = abs(q);
    // scale = number of digits before the decimal point
    int scale = 0;
    Rational t = a;
    while (t >= 1) { t /= 10; ++scale; }
    while (t < Rational(1, 10)) { t *= 10; --scale; }
    int frac_digits = digits - scale;
    Integer shifted;
    if (frac_digits >= 0) {
        Integer pow10;
        mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
        shifted = (a.get_num() * pow10) / a.get_den();
        std::string ds = shifted.get_str();
        if (frac_digits == 0) return sign + ds;
        if (static_cast<int>(ds.size()) <= frac_digits)
            ds.insert(0, static_cast<std::size_t>(frac_digits) - ds.size() + 1, '0');
        ds.insert(ds.size() - static_cast<std::size_t>(frac_digits), ".");
        return sign + ds;
    }
    Integer pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(-frac_digits));
    shifted = (a.get_num() / a.get_den() / pow10) * pow10;
    return sign + shifted.get_str();
}

// ceil(sqrt(n)) for a nonnegative integer.
inline Integer isqrt_ceil(const Integer& n) {
    Integer r = sqrt(n);
    if (r * r < n) r += 1;
    return r;
}

// Smallest prime strictly greater than n.
inline Integer next_prime_above(const Integer& n) {
    Integer p;
    mpz_nextprime(p.get_mpz_t(), n.get_mpz_t());
    return p;
}

// Best rational approximation to x with |x - p/q| <= tol, by continued fractions.
inline Rational rationalize(double x, double tol = 1e-12) {
    if (!std::isfinite(x)) throw DomainError("rationalize: non-finite input");
    bool neg = x < 0;
    double a = std::fabs(x);
    // convergents p/q of the continued-fraction expansion
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = a;
    for (int it = 0; it < 64; ++it) {
        double ip = std::floor(frac);
        Integer ai(static_cast<unsigned long>(ip));
        Integer p2 = ai * p1 + p0;
        Integer q2 = ai * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Rational approx(p1, q1);
        approx.canonicalize();
        if (std::fabs(approx.get_d() - a) <= tol) {
            return neg ? Rational(-approx) : approx;
        }
        double rem = frac - ip;
        if (rem < 1e-18) break;
        frac = 1.0 / rem;
    }
    Rational approx(p1, q1);
    approx.canonicalize();
    return neg ? Rational(-approx) : approx;
}

} // namespace singp
