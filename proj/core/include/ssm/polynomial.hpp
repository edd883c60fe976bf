#pragma once

// Dense univariate polynomials over Q with root isolation.

#include <string>
#include <utility>
#include <vector>

#include "ssm/interval.hpp"
#include "ssm/rational.hpp"

namespace ssm {

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);  // coeffs[i] multiplies t^i
  Polynomial(const Rational& constant);
  static Polynomial monomial(const Rational& coeff, unsigned degree);
  static Polynomial identity() { return monomial(Rational(1), 1); }

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& t) const;
  // Naive Horner enclosure.
  Interval<Rational> eval(const Interval<Rational>& t) const;
  Interval<double> eval(const Interval<double>& t) const;
  // Centered (mean value) form: f(m) + f'(X)(X - m); tighter on narrow boxes.
  Interval<Rational> eval_centered(const Interval<Rational>& t) const;
  double eval_double(double t) const;

  Polynomial derivative(unsigned order = 1) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  // Euclidean division: *this = q*d + r with deg r < deg d.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;
  Polynomial operator%(const Polynomial& d) const { return divmod(d).second; }
  Polynomial monic() const;
  Polynomial compose(const Polynomial& inner) const;

  std::string to_string(const std::string& var = "t") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

Polynomial gcd(Polynomial a, Polynomial b);
Polynomial squarefree_part(const Polynomial& p);

// Sturm chain of a squarefree polynomial.
std::vector<Polynomial> sturm_chain(const Polynomial& p);
int sign_variations(const std::vector<Polynomial>& chain, const Rational& t);
// Number of distinct real roots in (a, b].
int count_roots(const std::vector<Polynomial>& chain, const Rational& a, const Rational& b);

// Disjoint isolating intervals [lo, hi] for the distinct real roots of p in
// the closed interval [a, b], each refined to width <= maxWidth. Intervals
// are ordered left to right. A root at a dyadic point may be returned as a
// degenerate interval.
std::vector<Interval<Rational>> isolate_roots(const Polynomial& p, const Rational& a, const Rational& b,
                                              const Rational& maxWidth);

// Certified bound: max over t in [a, b] of |p(t)| (upper) via subdivision.
Rational abs_max_upper(const Polynomial& p, const Interval<Rational>& range, int pieces = 16);

}  // namespace ssm
