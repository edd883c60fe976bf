#pragma once

// Closed intervals [lo, hi]. Interval<double> rounds outward after every
// operation; Interval<Rational> is exact.

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "ssm/errors.hpp"
#include "ssm/rational.hpp"

namespace ssm {

namespace detail {
inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
}  // namespace detail

template <class T>
struct Interval {
  T lo{};
  T hi{};

  Interval() = default;
  Interval(T point) : lo(point), hi(point) {}
  Interval(T l, T h) : lo(std::move(l)), hi(std::move(h)) {
    require(!(hi < lo), ErrorCode::argument, "interval with lo > hi");
  }

  bool contains(const T& x) const { return !(x < lo) && !(hi < x); }
  bool contains_zero() const { return !(T(0) < lo) && !(hi < T(0)); }
  bool positive() const { return T(0) < lo; }
  bool negative() const { return hi < T(0); }
  T width() const { return rounded_sub_up(hi, lo); }
  T mid() const {
    if constexpr (std::is_same_v<T, double>) return lo + (hi - lo) / 2;
    else return T((lo + hi) / 2);
  }
  // Lower bound on |x| over the interval.
  T mag_lower() const {
    if (contains_zero()) return T(0);
    return positive() ? lo : T(-hi);
  }
  T mag_upper() const {
    T a = lo < T(0) ? T(-lo) : lo;
    T b = hi < T(0) ? T(-hi) : hi;
    return a < b ? b : a;
  }

  static T rounded_sub_up(const T& a, const T& b) {
    if constexpr (std::is_same_v<T, double>) return detail::up(a - b);
    else return T(a - b);
  }
};

template <class T>
Interval<T> hull(const Interval<T>& a, const Interval<T>& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

template <class T>
Interval<T> operator+(const Interval<T>& a, const Interval<T>& b) {
  if constexpr (std::is_same_v<T, double>) return {detail::down(a.lo + b.lo), detail::up(a.hi + b.hi)};
  else return {T(a.lo + b.lo), T(a.hi + b.hi)};
}

template <class T>
Interval<T> operator-(const Interval<T>& a) {
  return {T(-a.hi), T(-a.lo)};
}

template <class T>
Interval<T> operator-(const Interval<T>& a, const Interval<T>& b) {
  if constexpr (std::is_same_v<T, double>) return {detail::down(a.lo - b.hi), detail::up(a.hi - b.lo)};
  else return {T(a.lo - b.hi), T(a.hi - b.lo)};
}

template <class T>
Interval<T> operator*(const Interval<T>& a, const Interval<T>& b) {
  T p[4] = {T(a.lo * b.lo), T(a.lo * b.hi), T(a.hi * b.lo), T(a.hi * b.hi)};
  T lo = *std::min_element(p, p + 4);
  T hi = *std::max_element(p, p + 4);
  if constexpr (std::is_same_v<T, double>) return {detail::down(lo), detail::up(hi)};
  else return {lo, hi};
}

// Division by an interval that excludes zero.
template <class T>
Interval<T> operator/(const Interval<T>& a, const Interval<T>& b) {
  require(!b.contains_zero(), ErrorCode::uncertain_zero, "interval division by an interval containing 0");
  if constexpr (std::is_same_v<T, double>) {
    double q[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return {detail::down(*std::min_element(q, q + 4)), detail::up(*std::max_element(q, q + 4))};
  } else {
    T q[4] = {T(a.lo / b.lo), T(a.lo / b.hi), T(a.hi / b.lo), T(a.hi / b.hi)};
    return {*std::min_element(q, q + 4), *std::max_element(q, q + 4)};
  }
}

template <class T>
Interval<T> abs(const Interval<T>& a) {
  return {a.mag_lower(), a.mag_upper()};
}

inline Interval<double> to_double_interval(const Interval<Rational>& x) {
  return {to_double_down(x.lo), to_double_up(x.hi)};
}

}  // namespace ssm
