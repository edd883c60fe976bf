#pragma once

// Exact rationals and integers backed by GMP.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ssm {

using Integer = mpz_class;
using Rational = mpq_class;

// Canonical num/den (mpq_class(num, den) does not reduce).
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", "p", or a finite decimal such as "0.49" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Rational pow(const Rational& base, unsigned long exp);
Rational dyadic(const Integer& numerator, long level);  // numerator * 2^-level
Integer floor(const Rational& q);
Integer ceil(const Rational& q);
Rational abs(const Rational& q);
int sign(const Rational& q);

// Exact value of a finite double.
Rational from_double(double x);
// Round to nearest double (may lose precision).
double to_double(const Rational& q);
// Outward-rounded double bounds: lo <= q <= hi.
double to_double_down(const Rational& q);
double to_double_up(const Rational& q);

bool fits_int64(const Integer& z);
std::int64_t to_int64(const Integer& z);
Integer from_int64(std::int64_t v);

// Rational with denominator 2^bits close to sqrt(x) from above.
Rational sqrt_upper(const Rational& x, int bits = 80);

}  // namespace ssm
