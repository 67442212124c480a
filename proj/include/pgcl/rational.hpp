#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "pgcl/errors.hpp"

namespace pgcl {

/// Arbitrary-precision rational. All arithmetic in the toolkit is exact; no
/// operation anywhere introduces rounding.
using Rational = mpq_class;

/// Canonicalized rational from numerator and denominator.
inline Rational rat(long num, long den = 1) {
    if (den == 0) throw SemanticError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat_zero() { return Rational(0); }
inline Rational rat_one() { return Rational(1); }

/// 2^-k as an exact rational.
inline Rational pow2_inv(unsigned k) {
    mpz_class d(1);
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), k);
    return Rational(mpz_class(1), d);  // already in lowest terms
}

/// Parses "n", "n/d", or a plain decimal like "0.25" (exact, no rounding).
/// A leading '-' is accepted.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    // strip surrounding whitespace
    const auto first = s.find_first_not_of(" \t");
    const auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos) throw ParseError(1, 1, "empty rational literal");
    s = s.substr(first, last - first + 1);

    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '-') {
        neg = true;
        ++i;
    }
    auto is_digits = [](std::string_view v) {
        if (v.empty()) return false;
        for (char c : v)
            if (c < '0' || c > '9') return false;
        return true;
    };

    const auto slash = s.find('/', i);
    const auto dot = s.find('.', i);
    Rational q;
    if (slash != std::string::npos) {
        std::string num = s.substr(i, slash - i), den = s.substr(slash + 1);
        if (!is_digits(num) || !is_digits(den)) throw ParseError(1, 1, "malformed rational '" + s + "'");
        q = Rational(mpz_class(num), mpz_class(den));
        if (q.get_den() == 0) throw ParseError(1, 1, "rational with zero denominator: '" + s + "'");
        q.canonicalize();
    } else if (dot != std::string::npos) {
        std::string whole = s.substr(i, dot - i), frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!is_digits(whole) || !is_digits(frac)) throw ParseError(1, 1, "malformed decimal '" + s + "'");
        mpz_class scale(1);
        for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
        q = Rational(mpz_class(whole) * scale + mpz_class(frac.empty() ? "0" : frac), scale);
        q.canonicalize();
    } else {
        if (!is_digits(s.substr(i))) throw ParseError(1, 1, "malformed integer '" + s + "'");
        q = Rational(mpz_class(s.substr(i)));
    }
    if (neg) q = -q;
    return q;
}

/// Lowest-terms rendering: "2/3", or "2" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Decimal approximation with the given number of fractional digits, rounded
/// to nearest (ties away from zero). For display only.
inline std::string decimal_string(const Rational& q, unsigned digits) {
    mpz_class scale(1);
    for (unsigned k = 0; k < digits; ++k) scale *= 10;
    const bool neg = sgn(q) < 0;
    mpz_class num = abs(q.get_num()) * scale;
    // round(num/den) = floor((2*num + den) / (2*den))
    mpz_class mag = (2 * num + q.get_den()) / (2 * q.get_den());
    mpz_class whole = mag / scale, frac = mag % scale;
    std::string fs = frac.get_str();
    fs.insert(fs.begin(), digits - fs.size(), '0');
    std::string out = whole.get_str();
    if (digits > 0) out += "." + fs;
    return neg && mag != 0 ? "-" + out : out;
}

}  // namespace pgcl
