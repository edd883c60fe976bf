#include "ssm/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) fail(ErrorCode::parse, "not an integer: '" + std::string(s) + "'");
  Integer z(std::string(s), 10);
  return neg ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) fail(ErrorCode::parse, "empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)));
    Integer den = parse_integer(trim(s.substr(slash + 1)));
    if (den == 0) fail(ErrorCode::parse, "zero denominator in '" + std::string(s) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exp10 = to_int64(parse_integer(s.substr(e + 1)));
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      fail(ErrorCode::parse, "malformed decimal '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) fail(ErrorCode::parse, "malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  }
  Integer mant(digits, 10);
  Integer p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational q = exp10 >= 0 ? Rational(mant * p10) : Rational(mant, p10);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

Rational pow(const Rational& base, unsigned long exp) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  r.canonicalize();
  return r;
}

Rational dyadic(const Integer& numerator, long level) {
  Rational r(numerator);
  if (level >= 0) mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(level));
  else mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-level));
  return r;
}

Integer floor(const Rational& q) {
  Integer z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

Integer ceil(const Rational& q) {
  Integer z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }
int sign(const Rational& q) { return sgn(q); }

Rational from_double(double x) {
  require(std::isfinite(x), ErrorCode::argument, "non-finite double");
  return Rational(x);
}

double to_double(const Rational& q) { return q.get_d(); }

double to_double_down(const Rational& q) {
  double d = q.get_d();  // truncates toward zero
  if (std::isinf(d)) return d > 0 ? std::numeric_limits<double>::max() : d;
  if (cmp(Rational(d), q) <= 0) return d;
  return std::nextafter(d, -std::numeric_limits<double>::infinity());
}

double to_double_up(const Rational& q) {
  double d = q.get_d();
  if (std::isinf(d)) return d < 0 ? -std::numeric_limits<double>::max() : d;
  if (cmp(Rational(d), q) >= 0) return d;
  return std::nextafter(d, std::numeric_limits<double>::infinity());
}

static_assert(sizeof(long) == sizeof(std::int64_t), "64-bit long required");

bool fits_int64(const Integer& z) { return z.fits_slong_p(); }

std::int64_t to_int64(const Integer& z) {
  require(fits_int64(z), ErrorCode::argument, "integer does not fit in 64 bits");
  return z.get_si();
}

Integer from_int64(std::int64_t v) { return Integer(static_cast<long>(v)); }

Rational sqrt_upper(const Rational& x, int bits) {
  require(sgn(x) >= 0, ErrorCode::argument, "sqrt of a negative rational");
  Rational scaled = x;
  mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), static_cast<unsigned long>(2 * bits));
  Integer f = floor(scaled), s;
  mpz_sqrt(s.get_mpz_t(), f.get_mpz_t());
  return dyadic(Integer(s + 1), bits);
}

}  // namespace ssm
