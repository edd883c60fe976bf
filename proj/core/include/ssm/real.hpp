#pragma once

// Exact real numbers in Q or in a simple algebraic extension Q(a), where a
// is given by an irreducible integer polynomial and an isolating interval.
// Zero tests are exact (polynomial remainder); signs come from certified
// interval evaluation with refinement of the generator.

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ssm/interval.hpp"
#include "ssm/polynomial.hpp"
#include "ssm/rational.hpp"

namespace ssm {

class NumberField {
 public:
  // minpoly must be irreducible over Q with integer coefficients and have
  // exactly one real root in the closed isolating interval.
  static std::shared_ptr<const NumberField> make(const Polynomial& minpoly, const Interval<Rational>& isolating);

  int degree() const { return minpoly_.degree(); }
  const Polynomial& minpoly() const { return minpoly_; }
  const Polynomial& monic_minpoly() const { return monic_; }
  const Interval<Rational>& initial_interval() const { return initial_; }

  // Rational enclosure of the generator of width <= width (cached refinement).
  Interval<Rational> generator_enclosure(const Rational& width) const;
  // Tight double enclosure of the generator.
  Interval<double> generator_double() const;
  // Numerical approximations of all complex roots of the minimal polynomial.
  std::vector<std::pair<double, double>> conjugates() const;

  bool same_as(const NumberField& o) const;

 private:
  NumberField(Polynomial minpoly, Interval<Rational> isolating);
  void refine_to(const Rational& width) const;

  Polynomial minpoly_;
  Polynomial monic_;
  Interval<Rational> initial_;
  mutable std::mutex mutex_;
  mutable Interval<Rational> iso_;
  mutable bool has_double_ = false;
  mutable Interval<double> double_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

class Real {
 public:
  Real() = default;
  Real(const Rational& q);
  Real(long v) : Real(Rational(v)) {}
  Real(int v) : Real(Rational(v)) {}

  static Real generator(const FieldPtr& field);
  // Sum of coeffs[i] * a^i, reduced modulo the minimal polynomial.
  static Real from_coeffs(const FieldPtr& field, std::vector<Rational> coeffs);

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_rational() const { return c_.size() <= 1; }
  Rational as_rational() const;  // throws unless is_rational()
  bool is_zero() const { return c_.empty(); }

  int sign() const;
  Real abs() const { return sign() < 0 ? -*this : *this; }
  Interval<double> enclosure_double() const;
  Interval<Rational> enclosure(const Rational& width) const;
  double to_double() const;
  // floor(x * 2^m), exact.
  Integer floor_scaled(long m) const;

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  Real inverse() const;
  Real pow(unsigned long e) const;

  // Exact value comparisons.
  friend bool operator==(const Real& a, const Real& b);
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, const Real& b) { return (b - a).sign() > 0; }
  friend bool operator>(const Real& a, const Real& b) { return b < a; }
  friend bool operator<=(const Real& a, const Real& b) { return !(b < a); }
  friend bool operator>=(const Real& a, const Real& b) { return !(a < b); }

  std::string to_string(const std::string& var = "a") const;

 private:
  static FieldPtr common_field(const Real& a, const Real& b);
  void trim();
  FieldPtr field_;
  std::vector<Rational> c_;
};

// A total order on representations: equal values compare equivalent.
// Cheap; not the numerical order.
bool canonical_less(const Real& a, const Real& b);

Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

}  // namespace ssm
