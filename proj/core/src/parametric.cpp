#include "ssm/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "ssm/parallel.hpp"

namespace ssm {

namespace {

using nlohmann::json;

constexpr int kRootBits = 64;

Rational two_pow_neg(int bits) { return ratio(1, Integer(1) << bits); }

double log2_of(const Integer& z) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

double log2_of(const Rational& q) { return log2_of(q.get_num()) - log2_of(q.get_den()); }

Polynomial poly_pow(const Polynomial& p, unsigned e) {
  Polynomial out(Rational(1));
  for (unsigned i = 0; i < e; ++i) out *= p;
  return out;
}

Real eval_real(const Polynomial& p, const Real& t) {
  Real acc(0);
  const auto& c = p.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + Real(c[i]);
  return acc;
}

struct AbsRange {
  Rational lo, hi;
};

// Bounds on |p| over J from the endpoints and enclosures of the critical
// points; lo is 0 when p has a root in J.
AbsRange abs_range(const Polynomial& p, const Interval<Rational>& J) {
  Rational a = abs(p(J.lo)), b = abs(p(J.hi));
  AbsRange out{std::min(a, b), std::max(a, b)};
  if (p.degree() <= 0) return out;
  Rational width = J.width() * two_pow_neg(48);
  if (width == 0) return out;
  Polynomial dp = p.derivative();
  if (!dp.is_zero())
    for (const auto& e : isolate_roots(dp, J.lo, J.hi, width)) {
      auto v = p.eval_centered(e);
      out.lo = std::min(out.lo, v.mag_lower());
      out.hi = std::max(out.hi, v.mag_upper());
    }
  if (!isolate_roots(p, J.lo, J.hi, J.width()).empty()) out.lo = 0;
  return out;
}

Polynomial canonical_sign(const Polynomial& p) { return p.leading() < 0 ? -p : p; }

std::string poly_key(const Polynomial& p) {
  std::string s;
  for (const auto& c : p.coeffs()) {
    s += to_string(c);
    s += ',';
  }
  return s;
}

struct Piece {
  Interval<Rational> hull;
  Rational inside;
};

// Maximal intervals of {t in J : |F(t)| < level} (or <= level when closed),
// each widened to the enclosures of its boundary roots.
std::vector<Piece> level_pieces(const Polynomial& F, const Interval<Rational>& J, const Rational& level, bool closed) {
  Polynomial P = F * F - Polynomial(Rational(level * level));
  auto in = [&](const Rational& x) {
    int s = sign(P(x));
    return closed ? s <= 0 : s < 0;
  };
  if (P.is_zero()) {
    if (closed) return {Piece{J, J.lo}};
    return {};
  }
  if (J.lo == J.hi) {
    if (in(J.lo)) return {Piece{J, J.lo}};
    return {};
  }
  auto roots = isolate_roots(P, J.lo, J.hi, J.width() * two_pow_neg(kRootBits));
  std::vector<Piece> out;
  std::optional<Piece> cur;
  std::optional<Interval<Rational>> pending;
  auto gap = [&](const Rational& a, const Rational& b) {
    Rational x = a == b ? a : Rational((a + b) / 2);
    if (in(x)) {
      if (cur) {
        cur->hull.hi = b;
      } else {
        cur = Piece{{pending ? pending->lo : a, b}, x};
      }
    } else if (cur) {
      out.push_back(*cur);
      cur.reset();
    }
    pending.reset();
  };
  Rational prev = J.lo;
  for (const auto& e : roots) {
    gap(prev, e.lo);
    if (cur) {
      cur->hull.hi = e.hi;
    } else if (closed) {
      cur = Piece{e, e.mid()};
    } else {
      pending = e;
    }
    prev = e.hi;
  }
  gap(prev, J.hi);
  if (cur) out.push_back(*cur);
  return out;
}

std::optional<Interval<Rational>> sublevel_hull(const Polynomial& F, const Interval<Rational>& J, const Rational& rho) {
  auto s = level_pieces(F, J, rho, false);
  if (s.empty()) return std::nullopt;
  return Interval<Rational>{s.front().hull.lo, s.back().hull.hi};
}

// Closed pieces of J not covered by the sorted, disjoint intervals.
std::vector<Interval<Rational>> complement(const Interval<Rational>& J, const std::vector<Interval<Rational>>& cover) {
  std::vector<Interval<Rational>> out;
  Rational at = J.lo;
  for (const auto& u : cover) {
    if (u.lo > at) out.push_back({at, std::min(u.lo, J.hi)});
    at = std::max(at, u.hi);
  }
  if (at < J.hi) out.push_back({at, J.hi});
  return out;
}

void cover_rec(const Polynomial& F, const Interval<Rational>& J, const Rational& rho, const Rational& c, int k,
               std::vector<Interval<Rational>>& out) {
  auto s = level_pieces(F, J, rho, false);
  if (s.empty()) return;
  if (k == 0)
    fail(ErrorCode::hypothesis_not_met,
         "no derivative of order <= k has |F^(p)| >= c near t = " + to_string(s.front().inside) + " (~" +
             std::to_string(to_double(s.front().inside)) + ")");
  Polynomial dF = F.derivative();
  Rational rho2 = sqrt_upper(c * rho);
  for (const auto& jp : level_pieces(F, J, c, true)) {
    if (level_pieces(F, jp.hull, rho, false).empty()) continue;
    std::vector<Interval<Rational>> inner;
    cover_rec(dF, jp.hull, rho2, c, k - 1, inner);
    std::sort(inner.begin(), inner.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    std::vector<Interval<Rational>> found;
    for (const auto& u : inner)
      if (auto h = sublevel_hull(F, u, rho)) found.push_back(*h);
    for (const auto& piece : complement(jp.hull, inner))
      if (auto h = sublevel_hull(F, piece, rho)) found.push_back(*h);
    out.insert(out.end(), found.begin(), found.end());
  }
}

std::vector<Interval<Rational>> merge(std::vector<Interval<Rational>> v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  std::vector<Interval<Rational>> out;
  for (const auto& u : v) {
    if (!out.empty() && u.lo <= out.back().hi) out.back().hi = std::max(out.back().hi, u.hi);
    else out.push_back(u);
  }
  return out;
}

struct WordPoly {
  Word w;
  Polynomial r, b;
};

std::vector<WordPoly> all_words(const ParamFamily& family, int n, std::uint64_t budget) {
  require(n >= 1, ErrorCode::argument, "word length must be >= 1");
  std::uint64_t count = word_count(family.size(), n);
  check_budget(count, budget, "words");
  std::uint64_t pairs = count > (std::uint64_t{1} << 32) ? std::numeric_limits<std::uint64_t>::max() : count * (count - 1) / 2;
  check_budget(pairs, budget, "word pairs");
  std::vector<WordPoly> out;
  out.reserve(count);
  std::function<void(WordPoly&)> rec = [&](WordPoly& cur) {
    if (static_cast<int>(cur.w.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t s = 0; s < family.size(); ++s) {
      WordPoly next{cur.w, cur.r * family.symbols()[s].r, cur.b + cur.r * family.symbols()[s].a};
      next.w.push_back(static_cast<int>(s));
      rec(next);
    }
  };
  WordPoly root{{}, Polynomial(Rational(1)), Polynomial()};
  rec(root);
  return out;
}

int common_prefix(const Word& i, const Word& j) {
  std::size_t l = 0;
  while (l < i.size() && l < j.size() && i[l] == j[l]) ++l;
  return static_cast<int>(l);
}

struct PairClass {
  std::size_t i, j;
  Polynomial delta;  // sign-normalized
  int split;
  Polynomial prefix;
};

// Distinct (Delta up to sign, |i^j|) over pairs of words.
std::vector<PairClass> pair_classes(const std::vector<WordPoly>& words) {
  std::vector<PairClass> out;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t a = 0; a < words.size(); ++a)
    for (std::size_t b = a + 1; b < words.size(); ++b) {
      int L = common_prefix(words[a].w, words[b].w);
      Polynomial d = canonical_sign(words[a].b - words[b].b);
      if (seen.emplace(poly_key(d) + "|" + std::to_string(L), out.size()).second) out.push_back({a, b, d, L, {}});
    }
  return out;
}

Polynomial prefix_ratio(const ParamFamily& family, const Word& w, int L) {
  Polynomial r(Rational(1));
  for (int l = 0; l < L; ++l) r *= family.symbols()[w[l]].r;
  return r;
}

}  // namespace

ParamFamily::ParamFamily(Interval<Rational> interval, std::vector<ParamSymbol> symbols, std::vector<Rational> probs,
                         bool contract_on_average)
    : interval_(std::move(interval)),
      symbols_(std::move(symbols)),
      probs_(std::move(probs)),
      contract_on_average_(contract_on_average) {
  require(symbols_.size() >= 2, ErrorCode::argument, "a parametric family needs at least two symbols");
  if (probs_.empty()) probs_.assign(symbols_.size(), ratio(1, static_cast<long>(symbols_.size())));
  require(probs_.size() == symbols_.size(), ErrorCode::argument, "probability vector has the wrong length");
  Rational total = 0;
  for (const auto& p : probs_) {
    require(p > 0, ErrorCode::argument, "probabilities must be positive");
    total += p;
  }
  require(total == 1, ErrorCode::normalization_required, "probabilities must sum to 1");
  bool first = true;
  a_max_ = 0;
  for (const auto& s : symbols_) {
    require(!s.r.is_zero(), ErrorCode::argument, "ratio polynomial is zero");
    AbsRange rr = abs_range(s.r, interval_);
    require(rr.lo > 0, ErrorCode::argument, "ratio polynomial " + s.r.to_string() + " vanishes on the interval");
    if (first || rr.lo < r_min_) r_min_ = rr.lo;
    if (first || rr.hi > r_max_) r_max_ = rr.hi;
    first = false;
    if (!s.a.is_zero()) a_max_ = std::max(a_max_, abs_range(s.a, interval_).hi);
  }
  if (!contract_on_average_) {
    require(r_max_ < 1, ErrorCode::argument, "ratios must satisfy max |r_i(t)| < 1 on the interval");
  } else {
    Integer den = 1;
    for (const auto& p : probs_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.get_den().get_mpz_t());
    Polynomial q(Rational(1));
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      Integer e = probs_[i].get_num() * (den / probs_[i].get_den());
      require(e.fits_uint_p() && e.get_ui() <= 64, ErrorCode::argument, "probabilities too fine for the contraction check");
      q *= poly_pow(symbols_[i].r, static_cast<unsigned>(e.get_ui()));
    }
    require(abs_range(q, interval_).hi < 1, ErrorCode::argument,
            "family does not contract on average: prod |r_i|^{p_i} >= 1 somewhere on the interval");
  }
}

Ifs<Rational> ParamFamily::at(const Real& t) const {
  std::vector<SimilarityMap<Rational>> maps;
  for (const auto& s : symbols_) maps.push_back({eval_real(s.r, t), eval_real(s.a, t)});
  return Ifs<Rational>(std::move(maps), probs_, contract_on_average_);
}

std::pair<Polynomial, Polynomial> word_polys(const ParamFamily& family, const Word& w) {
  Polynomial r(Rational(1)), b;
  for (int s : w) {
    require(s >= 0 && static_cast<std::size_t>(s) < family.size(), ErrorCode::argument, "symbol out of range");
    b += r * family.symbols()[s].a;
    r *= family.symbols()[s].r;
  }
  return {r, b};
}

DeltaPoly delta_poly(const ParamFamily& family, const Word& i, const Word& j) {
  DeltaPoly d;
  d.i = i;
  d.j = j;
  d.poly = word_polys(family, i).second - word_polys(family, j).second;
  d.split_depth = common_prefix(i, j);
  d.prefix = prefix_ratio(family, i, d.split_depth);
  Word u(i.begin() + d.split_depth, i.end()), v(j.begin() + d.split_depth, j.end());
  d.reduced = word_polys(family, u).second - word_polys(family, v).second;
  return d;
}

Rational delta_tail_bound(const ParamFamily& family, int n, const Rational& rate, const Rational& prefix_constant) {
  require(rate > 0 && rate < 1, ErrorCode::argument, "tail rate must lie in (0, 1)");
  require(n >= 0, ErrorCode::argument, "n must be >= 0");
  return 2 * family.a_max() * prefix_constant * pow(rate, static_cast<unsigned long>(n)) / (1 - rate);
}

Rational alternating_rate(const ParamFamily& family) {
  Polynomial q = family.symbols()[0].r * family.symbols()[1].r;
  return sqrt_upper(abs_range(q, family.interval()).hi);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::certified:
      return "certified";
    case Verdict::failed:
      return "failed";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

TransversalityReport check_transversality(const ParamFamily& family, int n, int k, const Rational& c,
                                          std::uint64_t budget, int depth_limit) {
  require(k >= 0, ErrorCode::argument, "k must be >= 0");
  require(c > 0, ErrorCode::argument, "c must be positive");
  auto words = all_words(family, n, budget);
  // Classes keyed on (Delta, |i^j|, r_{i^j}).
  std::vector<PairClass> classes;
  {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t a = 0; a < words.size(); ++a)
      for (std::size_t b = a + 1; b < words.size(); ++b) {
        int L = common_prefix(words[a].w, words[b].w);
        Polynomial d = canonical_sign(words[a].b - words[b].b);
        Polynomial prefix = prefix_ratio(family, words[a].w, L);
        std::string key = poly_key(d) + "|" + std::to_string(L) + "|" + poly_key(prefix);
        if (seen.emplace(key, classes.size()).second) classes.push_back({a, b, d, L, prefix});
      }
  }

  struct Result {
    Verdict verdict = Verdict::certified;
    std::optional<TransversalityWitness> witness;
    std::size_t boxes = 0;
    int depth = 0;
  };
  std::vector<Result> results(classes.size());
  const Interval<Rational>& I = family.interval();
  parallel_for(classes.size(), [&](std::size_t idx) {
    const PairClass& pc = classes[idx];
    Result& res = results[idx];
    TransversalityWitness wit{words[pc.i].w, words[pc.j].w, I, false};
    if (pc.delta.is_zero()) {
      res.verdict = Verdict::failed;
      wit.t = Interval<Rational>(I.lo);
      wit.zero_polynomial = true;
      res.witness = wit;
      return;
    }
    Rational Lp = std::max(1, pc.split);
    std::vector<Polynomial> D{pc.delta};
    std::vector<Rational> cp{c};
    std::vector<double> cp_up{to_double_up(c)};
    for (int p = 1; p <= k; ++p) {
      D.push_back(D.back().derivative());
      cp.push_back(cp.back() / Lp);
      cp_up.push_back(to_double_up(cp.back()));
    }
    std::vector<std::pair<Interval<Rational>, int>> stack{{I, 0}};
    while (!stack.empty()) {
      auto [box, depth] = stack.back();
      stack.pop_back();
      ++res.boxes;
      res.depth = std::max(res.depth, depth);
      Interval<double> bd = to_double_interval(box);
      double rw = pc.prefix.eval(bd).mag_upper();
      bool ok = false;
      for (int p = 0; p <= k && !ok; ++p) {
        double rhs = detail::up(cp_up[p] * rw);
        ok = D[p].eval(bd).mag_lower() >= rhs;
      }
      if (ok) continue;
      Rational m = box.mid();
      Rational rwm = abs(pc.prefix(m));
      bool some = false;
      for (int p = 0; p <= k && !some; ++p) some = abs(D[p](m)) >= cp[p] * rwm;
      if (!some) {
        res.verdict = Verdict::failed;
        wit.t = Interval<Rational>(m);
        res.witness = wit;
        return;
      }
      if (depth >= depth_limit) {
        res.verdict = Verdict::inconclusive;
        wit.t = box;
        res.witness = wit;
        return;
      }
      stack.push_back({{m, box.hi}, depth + 1});
      stack.push_back({{box.lo, m}, depth + 1});
    }
  });

  TransversalityReport rep;
  rep.n = n;
  rep.k = k;
  rep.c = c;
  rep.pairs = classes.size();
  for (const auto& r : results) {
    rep.boxes += r.boxes;
    rep.max_depth = std::max(rep.max_depth, r.depth);
  }
  for (const auto& r : results)
    if (r.verdict == Verdict::failed) {
      rep.verdict = Verdict::failed;
      rep.witness = r.witness;
      return rep;
    }
  for (const auto& r : results)
    if (r.verdict == Verdict::inconclusive) {
      rep.verdict = Verdict::inconclusive;
      rep.witness = r.witness;
      return rep;
    }
  return rep;
}

CoverReport cover_sublevel(const Polynomial& F, const Interval<Rational>& J, const Rational& rho, const Rational& c,
                           int k) {
  require(k >= 0, ErrorCode::argument, "k must be >= 0");
  require(c > 0 && rho > 0, ErrorCode::argument, "rho and c must be positive");
  require(rho * pow(Rational(2), static_cast<unsigned long>(k)) < c, ErrorCode::argument,
          "cover_sublevel needs rho < c / 2^k");
  CoverReport rep;
  rep.rho = rho;
  rep.c = c;
  rep.k = k;
  rep.domain = J;
  std::vector<Interval<Rational>> raw;
  cover_rec(F, J, rho, c, k, raw);
  rep.intervals = merge(std::move(raw));
  rep.count = rep.intervals.size();
  for (const auto& u : rep.intervals) rep.max_length = std::max(rep.max_length, to_double(u.hi - u.lo));
  rep.length_bound = 2 * std::exp2((log2_of(rho) - log2_of(c)) / std::ldexp(1.0, k));

  double M = 0;
  Polynomial d = F;
  for (int p = 0; p <= k; ++p) {
    if (!d.is_zero()) M = std::max(M, to_double(abs_range(d, J).hi));
    d = d.derivative();
  }
  double per = 2 * M * to_double(J.width()) / to_double(c) + 1;
  double N = 0;
  for (int q = 1; q <= k; ++q) N = per * (2 * N + 1);
  rep.count_bound = N;
  rep.slack = 2.0 * (k + 1) * to_double(J.width() * two_pow_neg(kRootBits));

  auto rest = complement(J, rep.intervals);
  rep.complement_pieces = rest.size();
  rep.certified = true;
  rep.residual = std::numeric_limits<double>::infinity();
  std::size_t per_piece = rest.empty() ? 0 : std::max<std::size_t>(2, 2048 / rest.size());
  for (const auto& piece : rest) {
    if (!level_pieces(F, piece, rho, false).empty()) rep.certified = false;
    for (std::size_t s = 0; s <= per_piece; ++s) {
      Rational t = piece.lo + (piece.hi - piece.lo) * static_cast<long>(s) / static_cast<long>(per_piece);
      rep.residual = std::min(rep.residual, to_double(Rational(abs(F(t)) - rho)));
    }
  }
  if (rest.empty()) rep.residual = 0;
  return rep;
}

bool ExceptionalCover::contains(const Rational& t) const {
  return std::any_of(merged.begin(), merged.end(), [&](const auto& u) { return u.contains(t); });
}

bool ExceptionalCover::contains(const Real& t) const {
  return std::any_of(merged.begin(), merged.end(), [&](const auto& u) { return Real(u.lo) <= t && t <= Real(u.hi); });
}

ExceptionalCover exceptional_cover(const ParamFamily& family, const Rational& epsilon, int n, int k, const Rational& c,
                                   bool assume, std::uint64_t budget) {
  require(epsilon > 0 && epsilon < 1, ErrorCode::argument, "epsilon must lie in (0, 1)");
  require(k >= 0 && c > 0, ErrorCode::argument, "need k >= 0 and c > 0");
  if (!assume) {
    auto tr = check_transversality(family, n, k, c, budget);
    require(tr.verdict == Verdict::certified, ErrorCode::hypothesis_not_met,
            std::string("transversality at the requested (n, k, c) is ") + std::string(to_string(tr.verdict)));
  }
  auto words = all_words(family, n, budget);
  auto classes = pair_classes(words);
  ExceptionalCover out;
  out.epsilon = epsilon;
  out.n = n;
  out.k = k;
  out.c = c;
  out.assumed = assume;
  out.pairs = classes.size();
  const Interval<Rational>& I = family.interval();
  Rational rho = pow(epsilon, static_cast<unsigned long>(n));
  double rho_up = to_double_up(rho);
  Rational two_k = pow(Rational(2), static_cast<unsigned long>(k));

  struct Result {
    std::vector<Interval<Rational>> intervals;
    bool degenerate = false;
    bool certified = true;
  };
  std::vector<Result> results(classes.size());
  parallel_for(classes.size(), [&](std::size_t idx) {
    const PairClass& pc = classes[idx];
    Result& res = results[idx];
    Rational Lp = std::max(1, pc.split);
    Rational cij = c / pow(Lp, static_cast<unsigned long>(k)) * pow(family.r_min(), static_cast<unsigned long>(pc.split));
    if (rho * two_k >= cij) {
      res.degenerate = true;
      res.intervals.push_back(I);
      return;
    }
    // Quick exclusion by interval evaluation on a few pieces.
    if (!pc.delta.is_zero()) {
      bool clear = true;
      const int pieces = 16;
      for (int s = 0; s < pieces && clear; ++s) {
        Interval<Rational> sub{I.lo + (I.hi - I.lo) * s / pieces, I.lo + (I.hi - I.lo) * (s + 1) / pieces};
        clear = pc.delta.eval(to_double_interval(sub)).mag_lower() > rho_up;
      }
      if (clear) return;
    }
    auto rep = cover_sublevel(pc.delta, I, rho, cij, k);
    res.intervals = std::move(rep.intervals);
    res.certified = rep.certified;
  });

  out.certified = true;
  for (auto& r : results) {
    out.degenerate_pairs += r.degenerate ? 1 : 0;
    out.certified = out.certified && r.certified;
    out.intervals.insert(out.intervals.end(), r.intervals.begin(), r.intervals.end());
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  out.intervals.erase(std::unique(out.intervals.begin(), out.intervals.end(),
                                  [](const auto& a, const auto& b) { return a.lo == b.lo && a.hi == b.hi; }),
                      out.intervals.end());
  out.merged = merge(out.intervals);
  out.count = out.intervals.size();
  for (const auto& u : out.intervals) out.max_length = std::max(out.max_length, to_double(u.hi - u.lo));
  if (out.count > 1 && out.max_length > 0 && out.max_length < 1)
    out.boxdim = std::log(static_cast<double>(out.count)) / std::log(1 / out.max_length);
  return out;
}

LiouvilleFloor liouville_floor(const std::vector<Real>& A, int n, const Integer& height) {
  require(!A.empty(), ErrorCode::argument, "liouville_floor needs at least one element");
  require(n >= 1, ErrorCode::argument, "degree n must be >= 1");
  require(height >= 1, ErrorCode::argument, "height must be >= 1");
  FieldPtr field;
  for (const auto& a : A)
    if (!a.is_rational()) {
      if (!field) field = a.field();
      require(field->same_as(*a.field()), ErrorCode::unsupported, "elements must lie in one number field");
    }
  LiouvilleFloor out;
  out.n = n;
  out.height = height;
  Integer D = 1;
  for (const auto& a : A)
    for (const auto& q : a.coeffs()) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), q.get_den().get_mpz_t());
  if (!field) {
    out.degree = 1;
    out.log2_s = -log2_of(D);
    out.log2_floor = n * out.log2_s;
    out.value = std::exp2(out.log2_floor) * (1 - 1e-12);
    return out;
  }
  int d = field->degree();
  out.degree = d;
  Integer lead = abs(field->minpoly().leading()).get_num();
  Integer K = D;
  for (int i = 1; i < d; ++i) K *= lead;
  double log2K = log2_of(K);

  auto conj = field->conjugates();
  double alpha = field->generator_double().mid();
  std::size_t self = 0;
  for (std::size_t i = 1; i < conj.size(); ++i)
    if (std::hypot(conj[i].first - alpha, conj[i].second) < std::hypot(conj[self].first - alpha, conj[self].second))
      self = i;
  Integer mons;
  mpz_bin_uiui(mons.get_mpz_t(), static_cast<unsigned long>(n + A.size()), static_cast<unsigned long>(A.size()));
  double per_conj = log2_of(height) + log2_of(mons);
  double sum_log2B = 0;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    if (i == self) continue;
    std::complex<long double> z(conj[i].first, conj[i].second);
    long double mx = 1;
    for (const auto& a : A) {
      std::complex<long double> acc = 0;
      const auto& c = a.coeffs();
      for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + std::complex<long double>(c[j].get_d());
      mx = std::max(mx, std::abs(acc));
    }
    sum_log2B += log2K + std::log2(static_cast<double>(mx) * (1 + 1e-9));
  }
  out.log2_s = -log2K - sum_log2B;
  out.log2_floor = -n * log2K - (d - 1) * per_conj - n * sum_log2B;
  out.value = std::exp2(out.log2_floor) * (1 - 1e-12);
  return out;
}

std::vector<NearRootRow> near_root_scan(const Real& t, double theta, int n_first, int n_last, std::uint64_t budget) {
  require(theta > 0, ErrorCode::argument, "theta must be positive");
  require(n_first >= 0 && n_first <= n_last && n_last <= 62, ErrorCode::argument, "need 0 <= n_first <= n_last <= 62");
  double td = t.to_double();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_coeffs;
  bool zero = false;
  std::vector<NearRootRow> rows;
  for (int n = 1; n <= n_last; ++n) {
    NearRootRow row;
    row.n = n;
    if (!zero) {
      std::vector<double> val(n + 1), w(n + 1);
      for (int i = 0; i <= n; ++i) {
        val[i] = std::pow(td, i);
        w[i] = std::fabs(val[i]);
      }
      std::vector<int> order(n + 1);
      for (int i = 0; i <= n; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
      std::vector<double> R(n + 2, 0);
      for (int j = n; j >= 0; --j) R[j] = R[j + 1] + w[order[j]];
      double tol = 1e-12 * R[0];
      std::vector<int> coeffs(n + 1, 0);
      bool stop = false;
      std::function<void(int, double, bool)> dfs = [&](int j, double S, bool nonzero) {
        if (stop) return;
        if (++row.nodes > budget) fail(ErrorCode::budget_exceeded, "near_root_scan exceeded its node budget");
        if (j == n + 1) {
          if (!nonzero) return;
          double v = std::fabs(S);
          if (v < best) {
            if (v < 1e-9 * R[0]) {
              Polynomial p(std::vector<Rational>(coeffs.begin(), coeffs.end()));
              if (eval_real(p, t).is_zero()) {
                best = 0;
                best_coeffs = coeffs;
                zero = stop = true;
                return;
              }
            }
            best = v;
            best_coeffs = coeffs;
          }
          return;
        }
        if (std::fabs(S) - R[j] > best + tol) return;
        int idx = order[j];
        int toward = S > 0 ? (val[idx] > 0 ? -1 : 1) : (val[idx] > 0 ? 1 : -1);
        int choices[3] = {0, toward, -toward};
        for (int ch : choices) {
          if (!nonzero && ch == -1) continue;
          coeffs[idx] = ch;
          dfs(j + 1, S + ch * val[idx], nonzero || ch != 0);
          if (stop) return;
        }
        coeffs[idx] = 0;
      };
      dfs(0, 0.0, false);
    }
    if (n < n_first) continue;
    row.coeffs = best_coeffs;
    row.coeffs.resize(n + 1, 0);
    row.exact_zero = zero;
    if (zero) {
      row.min_abs = 0;
    } else {
      Polynomial p(std::vector<Rational>(best_coeffs.begin(), best_coeffs.end()));
      row.min_abs = std::fabs(eval_real(p, t).to_double());
    }
    row.theta_n = std::pow(theta, n);
    row.below = row.min_abs < row.theta_n;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace presets {

ParamFamily bernoulli_family(const Interval<Rational>& I) {
  Polynomial t = Polynomial::identity();
  return ParamFamily(I, {{t, Polynomial(Rational(-1))}, {t, Polynomial(Rational(1))}});
}

ParamFamily gasket_family(const Interval<Rational>& I) {
  Rational third = ratio(1, 3);
  Polynomial r(third);
  return ParamFamily(I, {{r, Polynomial()}, {r, Polynomial(third)}, {r, Polynomial::identity() * third}});
}

ParamFamily sinai_family(const Interval<Rational>& I) {
  Polynomial t = Polynomial::identity();
  return ParamFamily(I, {{Polynomial(Rational(1)) - t, Polynomial(Rational(-1))}, {Polynomial(Rational(1)) + t, Polynomial(Rational(1))}},
                     {}, true);
}

}  // namespace presets

namespace {

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
}

Rational rational_of(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (j.is_number_float()) return parse_rational(j.dump());
  fail(ErrorCode::parse, "expected a rational, got " + j.dump());
}

Polynomial poly_of(const json& j) {
  if (!j.is_array()) return Polynomial(rational_of(j));
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(rational_of(x));
  return Polynomial(std::move(c));
}

json poly_json(const Polynomial& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_string(c));
  return a;
}

json interval_json(const Interval<Rational>& u) { return json::array({to_string(u.lo), to_string(u.hi)}); }

}  // namespace

ParamFamily family_from_json(std::string_view text) {
  json j = parse_json_text(text);
  try {
    const json& iv = j.at("interval");
    require(iv.is_array() && iv.size() == 2, ErrorCode::parse, "interval must be [lo, hi]");
    std::vector<ParamSymbol> symbols;
    for (const auto& s : j.at("symbols")) symbols.push_back({poly_of(s.at("r")), poly_of(s.at("a"))});
    std::vector<Rational> probs;
    if (j.contains("probs"))
      for (const auto& p : j.at("probs")) probs.push_back(rational_of(p));
    bool avg = j.value("contractOnAverage", false);
    return ParamFamily({rational_of(iv[0]), rational_of(iv[1])}, std::move(symbols), std::move(probs), avg);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("malformed family: ") + e.what());
  }
}

std::string to_json(const ParamFamily& family) {
  json symbols = json::array();
  for (const auto& s : family.symbols()) symbols.push_back(json{{"r", poly_json(s.r)}, {"a", poly_json(s.a)}});
  json probs = json::array();
  for (const auto& p : family.probs()) probs.push_back(to_string(p));
  return json{{"interval", interval_json(family.interval())},
              {"symbols", symbols},
              {"probs", probs},
              {"contractOnAverage", family.contract_on_average()}}
      .dump();
}

std::string to_json(const CoverReport& r) {
  json iv = json::array();
  for (const auto& u : r.intervals) iv.push_back(interval_json(u));
  return json{{"rho", to_string(r.rho)},
              {"c", to_string(r.c)},
              {"k", r.k},
              {"domain", interval_json(r.domain)},
              {"intervals", iv},
              {"count", r.count},
              {"maxLength", r.max_length},
              {"lengthBound", r.length_bound},
              {"countBound", r.count_bound},
              {"slack", r.slack},
              {"certified", r.certified},
              {"complementPieces", r.complement_pieces},
              {"residual", r.residual},
              {"degenerate", r.degenerate}}
      .dump();
}

}  // namespace ssm
