#include "ssm/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "ssm/errors.hpp"

namespace ssm {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(const Rational& constant) {
  if (sgn(constant) != 0) c_.push_back(constant);
}

Polynomial Polynomial::monomial(const Rational& coeff, unsigned degree) {
  std::vector<Rational> c(degree + 1);
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rational Polynomial::operator()(const Rational& t) const {
  Rational acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Interval<Rational> Polynomial::eval(const Interval<Rational>& t) const {
  Interval<Rational> acc(Rational(0));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + Interval<Rational>(*it);
  return acc;
}

Interval<double> Polynomial::eval(const Interval<double>& t) const {
  Interval<double> acc(0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * t + Interval<double>(to_double_down(*it), to_double_up(*it));
  return acc;
}

Interval<Rational> Polynomial::eval_centered(const Interval<Rational>& t) const {
  if (degree() <= 0) return Interval<Rational>(coeff(0));
  Rational m = t.mid();
  Interval<Rational> centered =
      Interval<Rational>((*this)(m)) + derivative().eval(t) * (t - Interval<Rational>(m));
  Interval<Rational> naive = eval(t);
  return {std::max(centered.lo, naive.lo), std::min(centered.hi, naive.hi)};
}

double Polynomial::eval_double(double t) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + it->get_d();
  return acc;
}

Polynomial Polynomial::derivative(unsigned order) const {
  Polynomial p = *this;
  for (unsigned k = 0; k < order; ++k) {
    if (p.c_.size() <= 1) return Polynomial();
    std::vector<Rational> d(p.c_.size() - 1);
    for (std::size_t i = 1; i < p.c_.size(); ++i) d[i - 1] = p.c_[i] * static_cast<long>(i);
    p = Polynomial(std::move(d));
  }
  return p;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& c : p.c_) c = -c;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
  for (auto& c : c_) c *= s;
  trim();
  return *this;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  require(!d.is_zero(), ErrorCode::argument, "polynomial division by zero");
  if (degree() < d.degree()) return {Polynomial(), *this};
  std::vector<Rational> r = c_;
  std::vector<Rational> q(c_.size() - d.c_.size() + 1);
  const Rational& lead = d.c_.back();
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    Rational f = r[k + d.c_.size() - 1] / lead;
    q[k] = f;
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] -= f * d.c_[j];
  }
  r.resize(d.c_.size() - 1);
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  Polynomial p = *this;
  Rational inv = 1 / c_.back();
  return p *= inv;
}

Polynomial Polynomial::compose(const Polynomial& inner) const {
  Polynomial acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Polynomial(*it);
  return acc;
}

std::string Polynomial::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    if (!first) os << (sgn(c_[i]) < 0 ? " - " : " + ");
    else if (sgn(c_[i]) < 0) os << "-";
    first = false;
    Rational a = abs(c_[i]);
    if (i == 0 || a != 1) os << a.get_str() << (i ? "*" : "");
    if (i >= 1) os << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial squarefree_part(const Polynomial& p) {
  if (p.degree() <= 0) return p;
  Polynomial g = gcd(p, p.derivative());
  return p.divmod(g).first;
}

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain{p};
  if (p.degree() <= 0) return chain;
  chain.push_back(p.derivative());
  while (chain.back().degree() > 0) {
    Polynomial r = chain[chain.size() - 2] % chain.back();
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return chain;
}

int sign_variations(const std::vector<Polynomial>& chain, const Rational& t) {
  int count = 0, prev = 0;
  for (const auto& q : chain) {
    int s = sgn(q(t));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

int count_roots(const std::vector<Polynomial>& chain, const Rational& a, const Rational& b) {
  return sign_variations(chain, a) - sign_variations(chain, b);
}

namespace {

void isolate_rec(const Polynomial& q, const std::vector<Polynomial>& chain, const Rational& lo, const Rational& hi,
                 int count, const Rational& maxWidth, std::vector<Interval<Rational>>& out) {
  if (count <= 0) return;
  if (count == 1) {
    Rational l = lo, h = hi;
    if (sgn(q(h)) == 0) {
      out.emplace_back(h, h);
      return;
    }
    while (h - l > maxWidth) {
      Rational m = (l + h) / 2;
      int sm = sgn(q(m));
      if (sm == 0) {
        out.emplace_back(m, m);
        return;
      }
      if (sgn(q(h)) != sm) l = m;
      else h = m;
    }
    out.emplace_back(l, h);
    return;
  }
  Rational m = (lo + hi) / 2;
  int left = count_roots(chain, lo, m);
  isolate_rec(q, chain, lo, m, left, maxWidth, out);
  isolate_rec(q, chain, m, hi, count - left, maxWidth, out);
}

}  // namespace

std::vector<Interval<Rational>> isolate_roots(const Polynomial& p, const Rational& a, const Rational& b,
                                              const Rational& maxWidth) {
  require(!p.is_zero(), ErrorCode::argument, "root isolation of the zero polynomial");
  require(a <= b, ErrorCode::argument, "root isolation on an empty interval");
  std::vector<Interval<Rational>> out;
  if (p.degree() == 0) return out;
  Polynomial q = squarefree_part(p);
  auto chain = sturm_chain(q);
  if (sgn(q(a)) == 0) out.emplace_back(a, a);
  if (a == b) return out;
  int n = count_roots(chain, a, b);
  isolate_rec(q, chain, a, b, n, maxWidth, out);
  return out;
}

Rational abs_max_upper(const Polynomial& p, const Interval<Rational>& range, int pieces) {
  Rational best = 0;
  Rational step = range.width() / pieces;
  for (int i = 0; i < pieces; ++i) {
    Rational lo = range.lo + step * i;
    Rational hi = i + 1 == pieces ? range.hi : Rational(lo + step);
    Rational m = p.eval_centered({lo, hi}).mag_upper();
    if (m > best) best = m;
  }
  return best;
}

}  // namespace ssm
