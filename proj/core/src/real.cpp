#include "ssm/real.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

bool has_rational_root(const Polynomial& p) {
  // Rational root test; only practical for moderate coefficients.
  Integer a0 = p.coeff(0).get_num(), ad = p.leading().get_num();
  if (a0 == 0) return true;
  auto divisors = [](Integer n) {
    std::vector<Integer> d;
    n = abs(n);
    if (n > Integer("1000000000000")) return d;
    for (Integer i = 1; i * i <= n; ++i)
      if (n % i == 0) {
        d.push_back(i);
        if (i * i != n) d.push_back(Integer(n / i));
      }
    return d;
  };
  auto num = divisors(a0), den = divisors(ad);
  for (const auto& a : num)
    for (const auto& b : den)
      for (int s : {1, -1})
        if (sgn(p(ratio(Integer(s * a), b))) == 0) return true;
  return false;
}

}  // namespace

NumberField::NumberField(Polynomial minpoly, Interval<Rational> isolating)
    : minpoly_(std::move(minpoly)), monic_(minpoly_.monic()), initial_(isolating), iso_(isolating) {}

std::shared_ptr<const NumberField> NumberField::make(const Polynomial& minpoly, const Interval<Rational>& isolating) {
  require(minpoly.degree() >= 1, ErrorCode::argument, "minimal polynomial must have degree >= 1");
  for (const auto& c : minpoly.coeffs())
    require(c.get_den() == 1, ErrorCode::argument, "minimal polynomial must have integer coefficients");
  require(gcd(minpoly, minpoly.derivative()).degree() == 0, ErrorCode::argument,
          "minimal polynomial is not squarefree");
  if (minpoly.degree() >= 2)
    require(!has_rational_root(minpoly), ErrorCode::argument, "minimal polynomial has a rational root");
  int roots = count_roots(sturm_chain(minpoly), isolating.lo, isolating.hi) + (sgn(minpoly(isolating.lo)) == 0 ? 1 : 0);
  require(roots == 1, ErrorCode::argument,
          "isolating interval contains " + std::to_string(roots) + " roots of " + minpoly.to_string("x"));
  Interval<Rational> iso = isolating;
  if (sgn(minpoly(iso.lo)) == 0) iso = {iso.lo, iso.lo};
  else if (sgn(minpoly(iso.hi)) == 0) iso = {iso.hi, iso.hi};
  return std::shared_ptr<const NumberField>(new NumberField(minpoly, iso));
}

void NumberField::refine_to(const Rational& width) const {
  while (iso_.width() > width) {
    Rational m = iso_.mid();
    int sm = sgn(minpoly_(m));
    if (sm == 0) {
      iso_ = {m, m};
      return;
    }
    if (sgn(minpoly_(iso_.lo)) != sm) iso_ = {iso_.lo, m};
    else iso_ = {m, iso_.hi};
  }
}

Interval<Rational> NumberField::generator_enclosure(const Rational& width) const {
  std::lock_guard lock(mutex_);
  refine_to(width);
  return iso_;
}

Interval<double> NumberField::generator_double() const {
  std::lock_guard lock(mutex_);
  if (!has_double_) {
    Rational scale = abs(iso_.lo) + 1;
    refine_to(Rational(scale / Rational(Integer(1) << 62)));
    double_ = to_double_interval(iso_);
    has_double_ = true;
  }
  return double_;
}

std::vector<std::pair<double, double>> NumberField::conjugates() const {
  using C = std::complex<long double>;
  const auto& c = monic_.coeffs();
  int d = monic_.degree();
  std::vector<C> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = std::pow(C(0.4L, 0.9L), i);
  auto eval = [&](C z) {
    C acc = 0;
    for (int i = d; i >= 0; --i) acc = acc * z + C(c[i].get_d());
    return acc;
  };
  for (int it = 0; it < 2000; ++it) {
    long double change = 0;
    for (int i = 0; i < d; ++i) {
      C den = 1;
      for (int j = 0; j < d; ++j)
        if (j != i) den *= roots[i] - roots[j];
      C delta = eval(roots[i]) / den;
      roots[i] -= delta;
      change = std::max(change, std::abs(delta));
    }
    if (change < 1e-19L) break;
  }
  std::vector<std::pair<double, double>> out;
  for (auto& z : roots) out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  return out;
}

bool NumberField::same_as(const NumberField& o) const {
  return this == &o || (minpoly_ == o.minpoly_ && initial_.lo == o.initial_.lo && initial_.hi == o.initial_.hi);
}

Real::Real(const Rational& q) {
  if (sgn(q) != 0) c_.push_back(q);
}

Real Real::generator(const FieldPtr& field) {
  require(field != nullptr, ErrorCode::argument, "generator of a null field");
  return from_coeffs(field, {Rational(0), Rational(1)});
}

Real Real::from_coeffs(const FieldPtr& field, std::vector<Rational> coeffs) {
  Real r;
  r.field_ = field;
  r.c_ = std::move(coeffs);
  r.trim();
  if (!field) {
    require(r.c_.size() <= 1, ErrorCode::argument, "non-constant element without a number field");
    return r;
  }
  if (static_cast<int>(r.c_.size()) > field->degree()) {
    r.c_ = (Polynomial(r.c_) % field->monic_minpoly()).coeffs();
  }
  return r;
}

void Real::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rational Real::as_rational() const {
  require(is_rational(), ErrorCode::argument, "element is not rational");
  return c_.empty() ? Rational(0) : c_[0];
}

FieldPtr Real::common_field(const Real& a, const Real& b) {
  if (a.field_ == b.field_) return a.field_;
  if (!a.field_) return b.field_;
  if (!b.field_) return a.field_;
  if (a.field_->same_as(*b.field_)) return a.field_;
  if (b.is_rational()) return a.field_;
  if (a.is_rational()) return b.field_;
  fail(ErrorCode::unsupported, "arithmetic between different number fields");
}

Real Real::operator-() const {
  Real r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Real& Real::operator+=(const Real& o) {
  field_ = common_field(*this, o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Real& Real::operator-=(const Real& o) {
  field_ = common_field(*this, o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Real& Real::operator*=(const Real& o) {
  FieldPtr f = common_field(*this, o);
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    field_ = f;
    return *this;
  }
  if (c_.size() == 1 && o.c_.size() == 1) {
    c_[0] *= o.c_[0];
    field_ = f;
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  *this = from_coeffs(f, std::move(r));
  return *this;
}

Real Real::inverse() const {
  require(!is_zero(), ErrorCode::argument, "division by zero");
  if (is_rational()) {
    Real r(Rational(1 / c_[0]));
    r.field_ = field_;
    return r;
  }
  Polynomial r0 = field_->monic_minpoly(), r1(c_);
  Polynomial s0, s1(Rational(1));
  while (!r1.is_zero()) {
    auto [q, rem] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    Polynomial ns = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(ns);
  }
  require(r0.degree() == 0, ErrorCode::argument, "element is not invertible (minimal polynomial reducible?)");
  s0 *= Rational(1 / r0.coeff(0));
  return from_coeffs(field_, s0.coeffs());
}

Real& Real::operator/=(const Real& o) { return *this *= o.inverse(); }

Real Real::pow(unsigned long e) const {
  Real result(Rational(1)), base = *this;
  result.field_ = field_;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

bool operator==(const Real& a, const Real& b) {
  if (a.c_.size() != b.c_.size()) return false;
  if (a.c_.size() > 1) Real::common_field(a, b);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

Interval<double> Real::enclosure_double() const {
  if (c_.empty()) return {0.0, 0.0};
  if (c_.size() == 1) return {to_double_down(c_[0]), to_double_up(c_[0])};
  Interval<double> a = field_->generator_double();
  Interval<double> acc(0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * a + Interval<double>(to_double_down(*it), to_double_up(*it));
  return acc;
}

Interval<Rational> Real::enclosure(const Rational& width) const {
  if (is_rational()) return Interval<Rational>(as_rational());
  Polynomial p(c_);
  Rational w = width;
  for (;;) {
    Interval<Rational> e = p.eval_centered(field_->generator_enclosure(w));
    if (e.width() <= width) return e;
    w /= 1024;
  }
}

int Real::sign() const {
  if (c_.empty()) return 0;
  if (c_.size() == 1) return sgn(c_[0]);
  Interval<double> e = enclosure_double();
  if (e.positive()) return 1;
  if (e.negative()) return -1;
  Polynomial p(c_);
  Rational w(1, Integer(1) << 64);
  for (;;) {
    Interval<Rational> r = p.eval_centered(field_->generator_enclosure(w));
    if (r.positive()) return 1;
    if (r.negative()) return -1;
    w *= w;
  }
}

double Real::to_double() const {
  if (is_rational()) return ssm::to_double(as_rational());
  Interval<double> e = enclosure_double();
  if (!e.contains_zero() && e.width() <= 1e-14 * e.mag_lower()) return e.mid();
  Rational w(1, Integer(1) << 64);
  for (;;) {
    Interval<Rational> r = enclosure(w);
    if (!r.contains_zero() && r.width() * Rational(Integer(1) << 52) <= r.mag_lower())
      return ssm::to_double(r.mid());
    w *= w;
  }
}

Integer Real::floor_scaled(long m) const {
  if (is_rational()) {
    Rational q = as_rational();
    if (m >= 0) mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(m));
    else mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-m));
    return floor(q);
  }
  Interval<double> e = enclosure_double();
  double lo = std::floor(std::ldexp(e.lo, static_cast<int>(m)));
  double hi = std::floor(std::ldexp(e.hi, static_cast<int>(m)));
  if (lo == hi && std::abs(lo) < 9.0e15) return Integer(static_cast<long>(lo));
  Rational w = dyadic(Integer(1), m + 8);
  for (;;) {
    Interval<Rational> r = enclosure(w);
    Integer a = floor(Rational(r.lo * dyadic(Integer(1), -m)));
    Integer b = floor(Rational(r.hi * dyadic(Integer(1), -m)));
    if (a == b) return a;
    w *= w;
  }
}

std::string Real::to_string(const std::string& var) const {
  if (is_rational()) return as_rational().get_str();
  return Polynomial(c_).to_string(var);
}

bool canonical_less(const Real& a, const Real& b) {
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    int c = cmp(x[i], y[i]);
    if (c) return c < 0;
  }
  return false;
}

Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

}  // namespace ssm
