#pragma once

// One-parameter families of similarity systems x -> r_i(t) x + a_i(t) with
// polynomial coefficients: cylinder differences Delta_{i,j}(t), higher-order
// transversality, the sublevel covering recursion, covers of the
// exceptional sets E_{eps,n}, and separation bounds for algebraic
// parameters.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssm/ifs.hpp"
#include "ssm/interval.hpp"
#include "ssm/polynomial.hpp"
#include "ssm/real.hpp"

namespace ssm {

struct ParamSymbol {
  Polynomial r;
  Polynomial a;
};

class ParamFamily {
 public:
  // Needs two symbols, r_i without zeros on the interval and either
  // max |r_i| < 1 there or, with contract_on_average, prod |r_i|^{p_i} < 1.
  // Empty probs means equal weights.
  ParamFamily(Interval<Rational> interval, std::vector<ParamSymbol> symbols, std::vector<Rational> probs = {},
              bool contract_on_average = false);

  const Interval<Rational>& interval() const { return interval_; }
  const std::vector<ParamSymbol>& symbols() const { return symbols_; }
  const std::vector<Rational>& probs() const { return probs_; }
  std::size_t size() const { return symbols_.size(); }
  bool contract_on_average() const { return contract_on_average_; }
  // Certified bounds over the interval: r_min <= |r_i(t)| <= r_max.
  const Rational& r_min() const { return r_min_; }
  const Rational& r_max() const { return r_max_; }
  // max_i max_t |a_i(t)|, upper bound.
  const Rational& a_max() const { return a_max_; }

  Ifs<Rational> at(const Real& t) const;

 private:
  Interval<Rational> interval_;
  std::vector<ParamSymbol> symbols_;
  std::vector<Rational> probs_;
  bool contract_on_average_ = false;
  Rational r_min_, r_max_, a_max_;
};

// Composed ratio r_w(t) and base point phi_w(0)(t) of a word.
std::pair<Polynomial, Polynomial> word_polys(const ParamFamily& family, const Word& w);

struct DeltaPoly {
  Word i, j;
  Polynomial poly;     // phi_i(0) - phi_j(0)
  int split_depth = 0; // |i ^ j|
  Polynomial prefix;   // r_{i ^ j}
  Polynomial reduced;  // Delta_{u,v} for the words without the common prefix
  bool is_zero() const { return poly.is_zero(); }
};

DeltaPoly delta_poly(const ParamFamily& family, const Word& i, const Word& j);

// |Delta_{i,j} - Delta_{i|n, j|n}| for infinite words whose prefix ratios
// obey |r_{w_1..w_m}| <= prefix_constant * rate^m: 2 a_max C rate^n / (1 - rate).
Rational delta_tail_bound(const ParamFamily& family, int n, const Rational& rate, const Rational& prefix_constant = 1);
// Ratio bound for words alternating between the first two symbols:
// an upper bound on sqrt(max_t |r_0(t) r_1(t)|).
Rational alternating_rate(const ParamFamily& family);

enum class Verdict { certified, failed, inconclusive };
std::string_view to_string(Verdict v);

inline constexpr int kSubdivisionDepth = 60;

struct TransversalityWitness {
  Word i, j;
  Interval<Rational> t;  // a point (failed) or the unresolved interval (inconclusive)
  bool zero_polynomial = false;
};

struct TransversalityReport {
  Verdict verdict = Verdict::certified;
  int n = 0, k = 0;
  Rational c;
  std::size_t pairs = 0;     // distinct (Delta, prefix) classes checked
  std::size_t boxes = 0;     // subdivision boxes evaluated
  int max_depth = 0;
  std::optional<TransversalityWitness> witness;
};

// For all distinct i, j in Lambda^n and all t some p <= k has
// |Delta^{(p)}_{i,j}(t)| >= c * max(1,|i^j|)^{-p} * |r_{i^j}(t)|.
TransversalityReport check_transversality(const ParamFamily& family, int n, int k, const Rational& c,
                                          std::uint64_t budget = kDefaultAtomBudget, int depth_limit = kSubdivisionDepth);

struct CoverReport {
  Rational rho, c;
  int k = 0;
  Interval<Rational> domain;
  std::vector<Interval<Rational>> intervals;  // sorted
  std::size_t count = 0;
  double max_length = 0;
  double length_bound = 0;  // 2 (rho/c)^{1/2^k}
  double count_bound = 0;   // prod_{q=1..k} (2 M |J| / c + 1) (2 N_{q-1} + 1)
  double slack = 0;         // total width of root enclosures that may widen an interval
  bool certified = false;   // |F| >= rho on every piece of the complement, by exact root counting
  std::size_t complement_pieces = 0;
  double residual = 0;      // min over a dense rational sample of the complement of |F| - rho
  bool degenerate = false;  // rho outside the lemma range; the whole domain is returned
};

// Cover of F^{-1}(-rho, rho) n J by the inductive construction: maximal
// intervals of F^{-1}[-c, c], the cover of F' at level sqrt(c rho), and the
// monotone remainder. Requires 0 < rho < c / 2^k. Throws hypothesis_not_met
// with the offending point when no derivative of order <= k exceeds c.
CoverReport cover_sublevel(const Polynomial& F, const Interval<Rational>& J, const Rational& rho, const Rational& c,
                           int k);

struct ExceptionalCover {
  Rational epsilon;
  int n = 0, k = 0;
  Rational c;
  bool assumed = false;  // transversality assumed rather than certified
  std::size_t pairs = 0; // distinct Delta classes
  std::size_t degenerate_pairs = 0;
  std::vector<Interval<Rational>> intervals;  // per-pair cover intervals, deduplicated, sorted
  std::vector<Interval<Rational>> merged;     // their union
  std::size_t count = 0;
  double max_length = 0;
  double boxdim = 0;      // log(count) / log(1/max_length)
  bool certified = false; // every per-pair cover certified
  bool contains(const Rational& t) const;
  bool contains(const Real& t) const;
};

// Union over distinct i, j in Lambda^n of covers of
// Delta_{i,j}^{-1}(-eps^n, eps^n). Each pair uses
// c_{ij} = c max(1,|i^j|)^{-k} r_min^{|i^j|}. Unless assume is set,
// transversality at (n, k, c) is checked first and the call is refused
// when it is not certified.
ExceptionalCover exceptional_cover(const ParamFamily& family, const Rational& epsilon, int n, int k, const Rational& c,
                                   bool assume = false, std::uint64_t budget = kDefaultAtomBudget);

struct LiouvilleFloor {
  int n = 0;
  Integer height;    // coefficient bound N
  int degree = 1;    // of the field
  double log2_floor = 0;
  double value = 0;  // nonzero expressions have |x| >= value
  double log2_s = 0; // per-degree rate: value ~ poly(n) * s^n
};

// Lower bound on |x| for nonzero integer polynomial expressions x of total
// degree <= n in the elements of A with coefficients bounded by height.
// Elements must be rational or lie in one common number field.
LiouvilleFloor liouville_floor(const std::vector<Real>& A, int n, const Integer& height = 1);

struct NearRootRow {
  int n = 0;
  double min_abs = 0;             // min |p(t)| over nonzero p with coefficients in {0,+-1}, deg <= n
  std::vector<int> coeffs;        // a minimizer, coeffs[k] multiplies t^k
  bool exact_zero = false;
  double theta_n = 0;
  bool below = false;             // min_abs < theta^n
  std::uint64_t nodes = 0;
};

std::vector<NearRootRow> near_root_scan(const Real& t, double theta, int n_first, int n_last,
                                        std::uint64_t budget = std::uint64_t{1} << 32);

namespace presets {
// r = t, a = -1, +1.
ParamFamily bernoulli_family(const Interval<Rational>& I);
// r = 1/3, a = 0, 1/3, t/3.
ParamFamily gasket_family(const Interval<Rational>& I);
// r = 1 - t, 1 + t, a = -1, +1, contracting on average.
ParamFamily sinai_family(const Interval<Rational>& I);
}  // namespace presets

// {"interval":["1/2","9/10"],"symbols":[{"r":[c0,c1,..],"a":[..]}],
//  "probs":[..],"contractOnAverage":false}
ParamFamily family_from_json(std::string_view text);
std::string to_json(const ParamFamily& family);
std::string to_json(const CoverReport& report);

}  // namespace ssm
