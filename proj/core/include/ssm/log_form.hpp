#pragma once

// Exact linear combinations sum_i c_i * log2(n_i) with rational c_i and
// positive integers n_i. Entropies of measures with rational masses are
// of this form, so equalities and inequalities between them can be decided
// exactly: zero tests reduce to a coprime factor base, and nonzero signs
// are resolved by certified multiprecision evaluation.

#include <map>
#include <string>

#include "ssm/rational.hpp"

namespace ssm {

class LogForm {
 public:
  LogForm() = default;

  // Adds coeff * log2(n) for an integer n >= 1.
  void add_log(const Integer& n, const Rational& coeff);
  // Adds coeff * log2(x) for a rational x > 0.
  void add_log(const Rational& x, const Rational& coeff);
  // Adds -p*log2(p) for 0 < p <= 1.
  void add_plogp(const Rational& p);

  LogForm& operator+=(const LogForm& o);
  LogForm& operator-=(const LogForm& o);
  LogForm& operator*=(const Rational& s);
  friend LogForm operator+(LogForm a, const LogForm& b) { return a += b; }
  friend LogForm operator-(LogForm a, const LogForm& b) { return a -= b; }
  friend LogForm operator*(LogForm a, const Rational& s) { return a *= s; }

  // Exact sign (-1, 0, 1).
  int sign() const;
  bool is_zero() const { return sign() == 0; }
  double to_double() const;
  std::size_t size() const { return terms_.size(); }
  std::string to_string() const;

 private:
  bool symbolic_zero() const;
  struct IntegerLess {
    bool operator()(const Integer& a, const Integer& b) const { return cmp(a, b) < 0; }
  };
  std::map<Integer, Rational, IntegerLess> terms_;
};

// Exact comparison helpers.
inline bool operator<(const LogForm& a, const LogForm& b) { return (b - a).sign() > 0; }
inline bool operator<=(const LogForm& a, const LogForm& b) { return (b - a).sign() >= 0; }
inline bool operator==(const LogForm& a, const LogForm& b) { return (a - b).sign() == 0; }

}  // namespace ssm
