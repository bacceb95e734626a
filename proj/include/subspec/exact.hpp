#ifndef SUBSPEC_EXACT_HPP
#define SUBSPEC_EXACT_HPP

#include <cmath>
#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace subspec {

using BigInt = mpz_class;
using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline Rational rational_of(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p/q", plain integers, and decimal literals ("0.21", "-3.5e-2")
// into an exact rational.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational q(s);
        q.canonicalize();
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
        return q;
    }
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') { neg = s[i] == '-'; ++i; }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    long exponent = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad decimal: " + s);
            seen_dot = true;
        } else if (c == 'e' || c == 'E') {
            exponent = std::stol(s.substr(i + 1));
            break;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw std::invalid_argument("bad decimal: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("bad decimal: " + s);
    BigInt mant(digits.empty() ? "0" : digits, 10);
    if (neg) mant = -mant;
    long ten_pow = exponent - frac_digits;
    Rational q(mant);
    BigInt p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(ten_pow < 0 ? -ten_pow : ten_pow));
    if (ten_pow >= 0) q *= Rational(p10);
    else q /= Rational(p10);
    q.canonicalize();
    return q;
}

// Exact square root of a rational, when it is one.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    const BigInt num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
        BigInt rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        Rational r(rn, rd);
        r.canonicalize();
        return r;
    }
    return std::nullopt;
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

// log(q) for q > 0, overflow-free even when q has thousands of bits.
inline double log_of(const Rational& q) {
    if (!(q > 0)) throw std::domain_error("log_of: nonpositive rational");
    signed long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, mpq_numref(q.get_mpq_t()));
    double md = mpz_get_d_2exp(&ed, mpq_denref(q.get_mpq_t()));
    constexpr double ln2 = 0.6931471805599453094;
    return std::log(mn) - std::log(md) + (static_cast<double>(en - ed)) * ln2;
}

}  // namespace subspec

#endif
