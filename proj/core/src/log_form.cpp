#include "ssm/log_form.hpp"

#include <mpfr.h>

#include <sstream>
#include <vector>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

class MpfrVar {
 public:
  explicit MpfrVar(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  ~MpfrVar() { mpfr_clear(v_); }
  MpfrVar(const MpfrVar&) = delete;
  MpfrVar& operator=(const MpfrVar&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Pairwise coprime factor base; every inserted integer factors over it.
void coprime_insert(std::vector<Integer>& base, Integer y) {
  if (y <= 1) return;
  for (std::size_t i = 0; i < base.size(); ++i) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), y.get_mpz_t(), base[i].get_mpz_t());
    if (g == 1) continue;
    Integer b = base[i];
    base.erase(base.begin() + static_cast<long>(i));
    coprime_insert(base, g);
    coprime_insert(base, Integer(b / g));
    coprime_insert(base, Integer(y / g));
    return;
  }
  base.push_back(std::move(y));
}

}  // namespace

void LogForm::add_log(const Integer& n, const Rational& coeff) {
  require(n >= 1, ErrorCode::argument, "log of a non-positive integer");
  if (n == 1 || sgn(coeff) == 0) return;
  auto [it, inserted] = terms_.try_emplace(n, coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void LogForm::add_log(const Rational& x, const Rational& coeff) {
  require(sgn(x) > 0, ErrorCode::argument, "log of a non-positive rational");
  add_log(x.get_num(), coeff);
  add_log(x.get_den(), Rational(-coeff));
}

void LogForm::add_plogp(const Rational& p) { add_log(p, Rational(-p)); }

LogForm& LogForm::operator+=(const LogForm& o) {
  for (const auto& [n, c] : o.terms_) add_log(n, c);
  return *this;
}

LogForm& LogForm::operator-=(const LogForm& o) {
  for (const auto& [n, c] : o.terms_) add_log(n, Rational(-c));
  return *this;
}

LogForm& LogForm::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [n, c] : terms_) c *= s;
  return *this;
}

bool LogForm::symbolic_zero() const {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> ps;
    for (unsigned long p = 2; p < 1024; ++p) {
      bool prime = true;
      for (unsigned long q : ps) {
        if (q * q > p) break;
        if (p % q == 0) {
          prime = false;
          break;
        }
      }
      if (prime) ps.push_back(p);
    }
    return ps;
  }();
  std::vector<Rational> small(primes.size());
  std::vector<std::pair<Integer, Rational>> rough;
  for (const auto& [n, c] : terms_) {
    Integer rest = n;
    Integer p;
    for (std::size_t i = 0; i < primes.size() && rest > 1; ++i) {
      p = primes[i];
      unsigned long e = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
      if (e) small[i] += c * static_cast<long>(e);
    }
    if (rest > 1) rough.emplace_back(std::move(rest), c);
  }
  for (const auto& t : small)
    if (sgn(t) != 0) return false;
  std::vector<Integer> base;
  for (const auto& [n, c] : rough) coprime_insert(base, n);
  std::vector<Rational> total(base.size());
  for (const auto& [n, c] : rough) {
    Integer rest = n;
    for (std::size_t i = 0; i < base.size() && rest > 1; ++i) {
      unsigned long e = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), base[i].get_mpz_t());
      if (e) total[i] += c * static_cast<long>(e);
    }
  }
  for (const auto& t : total)
    if (sgn(t) != 0) return false;
  return true;
}

int LogForm::sign() const {
  if (terms_.empty()) return 0;
  bool checked_zero = false;
  for (mpfr_prec_t prec = 128;; prec *= 2) {
    MpfrVar acc(prec), mag(prec), lg(prec), cf(prec), err(prec);
    for (const auto& [n, c] : terms_) {
      mpfr_set_z(lg.get(), n.get_mpz_t(), MPFR_RNDN);
      mpfr_log2(lg.get(), lg.get(), MPFR_RNDN);
      mpfr_set_q(cf.get(), c.get_mpq_t(), MPFR_RNDN);
      mpfr_mul(cf.get(), cf.get(), lg.get(), MPFR_RNDN);
      mpfr_add(acc.get(), acc.get(), cf.get(), MPFR_RNDN);
      mpfr_abs(cf.get(), cf.get(), MPFR_RNDN);
      mpfr_add(mag.get(), mag.get(), cf.get(), MPFR_RNDU);
    }
    // Each term carries relative error below 4u and the running sum adds at
    // most T*u*mag; bound everything by (T + 8) * 4u * mag.
    mpfr_mul_ui(err.get(), mag.get(), static_cast<unsigned long>(terms_.size() + 8), MPFR_RNDU);
    mpfr_mul_2si(err.get(), err.get(), 2 - static_cast<long>(prec), MPFR_RNDU);
    if (mpfr_cmpabs(acc.get(), err.get()) > 0) return mpfr_sgn(acc.get()) > 0 ? 1 : -1;
    if (!checked_zero) {
      if (symbolic_zero()) return 0;
      checked_zero = true;
    }
  }
}

double LogForm::to_double() const {
  MpfrVar acc(160), lg(160), cf(160);
  for (const auto& [n, c] : terms_) {
    mpfr_set_z(lg.get(), n.get_mpz_t(), MPFR_RNDN);
    mpfr_log2(lg.get(), lg.get(), MPFR_RNDN);
    mpfr_set_q(cf.get(), c.get_mpq_t(), MPFR_RNDN);
    mpfr_mul(cf.get(), cf.get(), lg.get(), MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), cf.get(), MPFR_RNDN);
  }
  return mpfr_get_d(acc.get(), MPFR_RNDN);
}

std::string LogForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str() << "*log2(" << n.get_str() << ")";
  }
  return first ? "0" : os.str();
}

}  // namespace ssm
