#include "ssm/ifs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <json.hpp>

namespace ssm {

using nlohmann::json;

namespace {

double dbl(const Rational& q) { return q.get_d(); }
double dbl(double x) { return x; }
double dbl(const Real& x) { return x.to_double(); }

int sign_of(const Real& x) { return x.sign(); }
int sign_of(double x) { return (x > 0) - (x < 0); }

Real abs_of(const Real& x) { return x.abs(); }
double abs_of(double x) { return std::fabs(x); }

std::int64_t floor_at(const Real& x, int m) {
  Integer z = x.floor_scaled(m);
  require(fits_int64(z), ErrorCode::resolution_exceeded, "cell index out of range");
  return to_int64(z);
}
std::int64_t floor_at(double x, int m) { return static_cast<std::int64_t>(std::floor(std::ldexp(x, m))); }
template <class C>
std::int64_t ceil_at(const C& x, int m) {
  return -floor_at(C(-x), m);
}

bool canon_less(const Real& a, const Real& b) { return canonical_less(a, b); }
bool canon_less(double a, double b) { return a < b; }
bool canon_equal(const Real& a, const Real& b) { return !canonical_less(a, b) && !canonical_less(b, a); }
bool canon_equal(double a, double b) { return a == b; }

template <class M>
M sum_of(const std::vector<M>& v) {
  M s(0);
  for (const auto& x : v) s += x;
  return s;
}

template <class M>
struct State {
  CoordOf<M> r;
  CoordOf<M> x;
  M p;
};

// One level deeper: phi_w o phi_i has ratio r_w r_i and base point phi_w(a_i).
template <class M>
std::vector<State<M>> expand(const Ifs<M>& ifs, const std::vector<State<M>>& level) {
  std::vector<State<M>> next;
  next.reserve(level.size() * ifs.size());
  for (const auto& s : level)
    for (std::size_t i = 0; i < ifs.size(); ++i) {
      const auto& f = ifs.map(i);
      next.push_back({s.r * f.r, s.x + s.r * f.a, s.p * ifs.probs()[i]});
    }
  return next;
}

template <class M>
void merge_states(std::vector<State<M>>& v) {
  std::sort(v.begin(), v.end(), [](const State<M>& a, const State<M>& b) {
    if (canon_less(a.r, b.r)) return true;
    if (canon_less(b.r, a.r)) return false;
    return canon_less(a.x, b.x);
  });
  std::vector<State<M>> out;
  out.reserve(v.size());
  for (auto& s : v) {
    if (!out.empty() && canon_equal(out.back().r, s.r) && canon_equal(out.back().x, s.x)) out.back().p += s.p;
    else out.push_back(std::move(s));
  }
  v = std::move(out);
}

template <class M>
std::vector<State<M>> merged_generation(const Ifs<M>& ifs, int n, std::uint64_t budget) {
  require(n >= 1, ErrorCode::argument, "generation measure needs n >= 1");
  check_budget(word_count(ifs.size(), n), budget, "generation measure");
  std::vector<State<M>> level{{CoordOf<M>(1), CoordOf<M>(0), M(1)}};
  for (int k = 0; k < n; ++k) {
    level = expand(ifs, level);
    merge_states(level);
  }
  return level;
}

Word decode(std::uint64_t code, std::size_t alphabet, int n) {
  Word w(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    w[static_cast<std::size_t>(k)] = static_cast<int>(code % alphabet);
    code /= alphabet;
  }
  return w;
}

double log2_abs(const Real& x) {
  if (x.is_rational()) {
    Rational q = abs(x.as_rational());
    long e1 = 0, e2 = 0;
    double m1 = mpz_get_d_2exp(&e1, q.get_num_mpz_t());
    double m2 = mpz_get_d_2exp(&e2, q.get_den_mpz_t());
    return std::log2(m1) - std::log2(m2) + static_cast<double>(e1 - e2);
  }
  return std::log2(std::fabs(x.to_double()));
}

template <class C>
struct Cylinder {
  C lo, hi;
};

template <class M>
Cylinder<CoordOf<M>> image(const CoordOf<M>& r, const CoordOf<M>& a, int sign, const CoordOf<M>& lo,
                           const CoordOf<M>& hi) {
  CoordOf<M> x = r * lo + a;
  CoordOf<M> y = r * hi + a;
  if (sign < 0) std::swap(x, y);
  return {x, y};
}

template <class M>
void require_unit_hull(const Ifs<M>& ifs, CoordOf<M>& lo, CoordOf<M>& hi) {
  require(ifs.is_contracting(), ErrorCode::unsupported, "rasterization needs a contracting IFS");
  auto h = attractor_hull(ifs);
  lo = h.first;
  hi = h.second;
  if constexpr (!Backend<M>::exact) {
    if (lo < 0 && lo > -1e-12) lo = 0;
    if (hi > 1 && hi < 1 + 1e-12) hi = 1;
  }
  require(sign_of(lo) >= 0 && sign_of(CoordOf<M>(hi - 1)) <= 0, ErrorCode::argument,
          "attractor is not inside [0,1]; normalize first");
}

template <class M>
int raster_depth(const Ifs<M>& ifs, int resolution, double diam, int guard) {
  double rate = -std::log2(ifs.max_abs_ratio());
  double d = std::ceil((resolution + std::log2(diam)) / rate);
  return std::max(0, static_cast<int>(d)) + guard;
}

template <class M>
struct RasterNode {
  CoordOf<M> r;
  CoordOf<M> a;
  M p;
  int depth;
  int sign;
};

// Depth-first rasterization of the subtree below `root`.
template <class M>
void raster_subtree(const Ifs<M>& ifs, RasterNode<M> root, int resolution, int max_depth, const CoordOf<M>& lo,
                    const CoordOf<M>& hi, std::vector<DyadicCell<M>>& out, double& straddle, std::uint64_t& nodes,
                    std::uint64_t budget) {
  const std::int64_t last = (std::int64_t{1} << resolution) - 1;
  std::vector<RasterNode<M>> stack{std::move(root)};
  while (!stack.empty()) {
    RasterNode<M> node = std::move(stack.back());
    stack.pop_back();
    if (++nodes > budget) fail(ErrorCode::budget_exceeded, "rasterization exceeded the node budget");
    auto cyl = image<M>(node.r, node.a, node.sign, lo, hi);
    std::int64_t c = std::clamp(floor_at(cyl.lo, resolution), std::int64_t{0}, last);
    if (ceil_at(cyl.hi, resolution) <= c + 1) {
      out.push_back({c, node.p});
      continue;
    }
    if (node.depth >= max_depth) {
      CoordOf<M> base = node.r * lo + node.a;
      out.push_back({std::clamp(floor_at(base, resolution), std::int64_t{0}, last), node.p});
      straddle += dbl(node.p);
      continue;
    }
    for (std::size_t i = ifs.size(); i-- > 0;) {
      const auto& f = ifs.map(i);
      stack.push_back({node.r * f.r, node.a + node.r * f.a, node.p * ifs.probs()[i], node.depth + 1,
                       node.sign * sign_of(f.r)});
    }
  }
}

}  // namespace

std::uint64_t word_count(std::size_t alphabet, int n) {
  std::uint64_t c = 1;
  for (int k = 0; k < n; ++k) {
    if (alphabet != 0 && c > std::numeric_limits<std::uint64_t>::max() / alphabet)
      return std::numeric_limits<std::uint64_t>::max();
    c *= alphabet;
  }
  return c;
}

void check_budget(std::uint64_t needed, std::uint64_t budget, const char* what) {
  if (needed > budget)
    fail(ErrorCode::budget_exceeded, std::string(what) + ": needs " + std::to_string(needed) +
                                         " atoms, budget is " + std::to_string(budget));
}

template <class M>
Ifs<M>::Ifs(std::vector<Map> maps, std::vector<M> probs, bool contract_on_average)
    : maps_(std::move(maps)), probs_(std::move(probs)), contract_on_average_(contract_on_average) {
  require(maps_.size() >= 2, ErrorCode::argument, "an IFS needs at least two maps");
  require(probs_.size() == maps_.size(), ErrorCode::argument, "one probability per map");
  for (const auto& p : probs_) require(p > 0, ErrorCode::argument, "probabilities must be positive");
  require(is_unit_mass(sum_of(probs_)), ErrorCode::normalization_required, "probabilities must sum to 1");
  bool distinct = false;
  for (const auto& f : maps_) {
    require(sign_of(f.r) != 0, ErrorCode::argument, "contraction ratio must be nonzero");
    if (!(f == maps_.front())) distinct = true;
    if (!(abs_of(f.r) < CoordOf<M>(1))) contracting_ = false;
  }
  require(distinct, ErrorCode::argument, "an IFS needs two distinct maps");
  if (!contract_on_average_) {
    require(contracting_, ErrorCode::argument, "every |r_i| must be < 1");
  } else {
    double s = 0;
    for (std::size_t i = 0; i < maps_.size(); ++i) s += dbl(probs_[i]) * std::log(std::fabs(dbl(maps_[i].r)));
    require(s < 0, ErrorCode::argument, "the system does not contract on average");
  }
}

template <class M>
bool Ifs<M>::uniform_ratio() const {
  for (const auto& f : maps_)
    if (!(f.r == maps_.front().r)) return false;
  return true;
}

template <class M>
double Ifs<M>::max_abs_ratio() const {
  double m = 0;
  for (const auto& f : maps_) m = std::max(m, std::fabs(dbl(f.r)));
  return m;
}

template <class M>
double Ifs<M>::min_abs_ratio() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : maps_) m = std::min(m, std::fabs(dbl(f.r)));
  return m;
}

Ifs<double> to_float(const Ifs<Rational>& ifs) {
  std::vector<SimilarityMap<double>> maps;
  std::vector<double> probs;
  for (const auto& f : ifs.maps()) maps.push_back({f.r.to_double(), f.a.to_double()});
  for (const auto& p : ifs.probs()) probs.push_back(p.get_d());
  return Ifs<double>(std::move(maps), std::move(probs), ifs.contract_on_average());
}

template <class M>
SimilarityMap<M> compose(const Ifs<M>& ifs, const Word& word) {
  require(!word.empty(), ErrorCode::argument, "empty word");
  for (int s : word)
    require(s >= 0 && static_cast<std::size_t>(s) < ifs.size(), ErrorCode::argument, "symbol out of range");
  SimilarityMap<M> out = ifs.map(static_cast<std::size_t>(word.back()));
  for (std::size_t k = word.size() - 1; k-- > 0;) out = compose(ifs.map(static_cast<std::size_t>(word[k])), out);
  return out;
}

template <class M>
AtomicMeasure<M> generation_measure(const Ifs<M>& ifs, int n, std::uint64_t budget) {
  auto level = merged_generation(ifs, n, budget);
  std::vector<Atom<M>> atoms;
  atoms.reserve(level.size());
  for (auto& s : level) atoms.push_back({std::move(s.x), std::move(s.p), std::nullopt});
  return AtomicMeasure<M>(std::move(atoms)).canonicalize();
}

template <class M>
AtomicMeasure<M> tagged_generation_measure(const Ifs<M>& ifs, int n, std::uint64_t budget) {
  auto level = merged_generation(ifs, n, budget);
  std::vector<Atom<M>> atoms;
  atoms.reserve(level.size());
  for (auto& s : level) atoms.push_back({std::move(s.x), std::move(s.p), std::move(s.r)});
  return AtomicMeasure<M>(std::move(atoms)).canonicalize();
}

OverlapReport<Rational> delta_n(const Ifs<Rational>& ifs, int n, std::uint64_t budget) {
  require(n >= 1, ErrorCode::argument, "delta_n needs n >= 1");
  const std::size_t k = ifs.size();
  check_budget(word_count(k, n), budget, "delta_n");
  struct Entry {
    std::uint64_t code;
    Real r;
    Real x;
  };
  std::vector<Entry> level{{0, Real(1), Real(0)}};
  for (int d = 0; d < n; ++d) {
    std::vector<Entry> next;
    next.reserve(level.size() * k);
    for (const auto& e : level)
      for (std::size_t i = 0; i < k; ++i)
        next.push_back({e.code * k + i, e.r * ifs.map(i).r, e.x + e.r * ifs.map(i).a});
    level = std::move(next);
  }
  std::sort(level.begin(), level.end(), [](const Entry& a, const Entry& b) {
    if (canonical_less(a.r, b.r)) return true;
    if (canonical_less(b.r, a.r)) return false;
    if (canonical_less(a.x, b.x)) return true;
    if (canonical_less(b.x, a.x)) return false;
    return a.code < b.code;
  });

  OverlapReport<Rational> rep;
  rep.n = n;
  auto record = [&](const Entry& a, const Entry& b, Real gap) {
    if (rep.delta && !(gap < *rep.delta)) return;
    rep.delta = std::move(gap);
    rep.first = decode(a.code, k, n);
    rep.second = decode(b.code, k, n);
  };
  for (std::size_t g = 0; g < level.size();) {
    std::size_t end = g + 1;
    while (end < level.size() && canon_equal(level[end].r, level[g].r)) ++end;
    for (std::size_t j = g + 1; j < end && !rep.exact_overlap; ++j)
      if (canon_equal(level[j].x, level[j - 1].x)) {
        rep.delta.reset();
        record(level[j - 1], level[j], Real(0));
        rep.exact_overlap = true;
      }
    if (rep.exact_overlap) break;
    std::sort(level.begin() + static_cast<std::ptrdiff_t>(g), level.begin() + static_cast<std::ptrdiff_t>(end),
              [](const Entry& a, const Entry& b) { return a.x < b.x; });
    for (std::size_t j = g + 1; j < end; ++j) record(level[j - 1], level[j], level[j].x - level[j - 1].x);
    g = end;
  }
  if (rep.exact_overlap) rep.log_rate = std::numeric_limits<double>::infinity();
  else if (rep.delta) rep.log_rate = -log2_abs(*rep.delta) / n;
  else rep.log_rate = std::numeric_limits<double>::quiet_NaN();
  return rep;
}

OverlapReport<double> delta_n(const Ifs<double>& ifs, int n, std::uint64_t budget) {
  require(n >= 1, ErrorCode::argument, "delta_n needs n >= 1");
  const std::size_t k = ifs.size();
  check_budget(word_count(k, n), budget, "delta_n");
  using I = Interval<double>;
  struct Entry {
    std::uint64_t code;
    I ratio;  // product over the sorted symbols, so equal multisets give identical enclosures
    I x;
  };
  std::vector<Entry> entries;
  entries.reserve(word_count(k, n));
  for (std::uint64_t code = 0; code < word_count(k, n); ++code) {
    Word w = decode(code, k, n);
    I r(1.0), x(0.0);
    for (int s : w) {
      x = x + r * I(ifs.map(static_cast<std::size_t>(s)).a);
      r = r * I(ifs.map(static_cast<std::size_t>(s)).r);
    }
    std::sort(w.begin(), w.end());
    I rs(1.0);
    for (int s : w) rs = rs * I(ifs.map(static_cast<std::size_t>(s)).r);
    entries.push_back({code, rs, x});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.ratio.lo != b.ratio.lo) return a.ratio.lo < b.ratio.lo;
    if (a.ratio.hi != b.ratio.hi) return a.ratio.hi < b.ratio.hi;
    return a.x.mid() < b.x.mid();
  });

  OverlapReport<double> rep;
  rep.n = n;
  I best(0.0);
  bool have = false;
  for (std::size_t g = 0; g < entries.size();) {
    std::size_t end = g + 1;
    double reach = entries[g].ratio.hi;
    while (end < entries.size() && entries[end].ratio.lo <= reach) {
      if (entries[end].ratio.lo != entries[g].ratio.lo || entries[end].ratio.hi != entries[g].ratio.hi)
        fail(ErrorCode::uncertain_zero,
             "delta_n: ratio equality cannot be decided in floating point; use the exact backend");
      reach = std::max(reach, entries[end].ratio.hi);
      ++end;
    }
    for (std::size_t j = g + 1; j < end; ++j) {
      I gap = entries[j].x - entries[j - 1].x;
      if (!gap.positive())
        fail(ErrorCode::uncertain_zero,
             "delta_n: a cylinder distance is not certified nonzero in floating point; use exact/algebraic "
             "evaluation");
      if (!have || gap.mid() < best.mid()) {
        best = gap;
        have = true;
        rep.first = decode(entries[j - 1].code, k, n);
        rep.second = decode(entries[j].code, k, n);
      }
    }
    g = end;
  }
  if (have) {
    rep.delta = best.mid();
    rep.log_rate = -std::log2(best.mid()) / n;
  } else {
    rep.log_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

template <class M>
double sdim_set(const Ifs<M>& ifs) {
  require(ifs.is_contracting(), ErrorCode::unsupported, "similarity dimension of a set needs a contracting IFS");
  std::vector<double> r;
  for (const auto& f : ifs.maps()) r.push_back(std::fabs(dbl(f.r)));
  auto g = [&](double s) {
    double t = -1;
    for (double x : r) t += std::pow(x, s);
    return t;
  };
  double lo = 0, hi = 1;
  while (g(hi) > 0) hi *= 2;
  while (hi - lo > 1e-13) {
    double mid = lo + (hi - lo) / 2;
    if (g(mid) > 0) lo = mid;
    else hi = mid;
  }
  return lo + (hi - lo) / 2;
}

template <class M>
double sdim_measure(const Ifs<M>& ifs) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    double p = dbl(ifs.probs()[i]);
    num += p * std::log(p);
    den += p * std::log(std::fabs(dbl(ifs.map(i).r)));
  }
  require(den < 0, ErrorCode::unsupported, "sdim of a measure needs sum p_i log|r_i| < 0");
  return num / den;
}

template <class M>
AffineImage<M> translate_to_attractor(const Ifs<M>& ifs) {
  using C = CoordOf<M>;
  require(ifs.is_contracting(), ErrorCode::unsupported, "translate_to_attractor needs a contracting IFS");
  const auto& f0 = ifs.map(0);
  C fixed = f0.a / (C(1) - f0.r);
  std::vector<SimilarityMap<M>> maps;
  C amax(0), rmax(0);
  for (const auto& f : ifs.maps()) {
    SimilarityMap<M> g{f.r, f.a + (f.r - C(1)) * fixed};
    if (amax < abs_of(g.a)) amax = abs_of(g.a);
    if (rmax < abs_of(g.r)) rmax = abs_of(g.r);
    maps.push_back(std::move(g));
  }
  C bound = amax / (C(1) - rmax);
  return {Ifs<M>(std::move(maps), ifs.probs(), ifs.contract_on_average()), fixed, C(1), C(-bound), bound};
}

template <class M>
std::pair<CoordOf<M>, CoordOf<M>> attractor_hull(const Ifs<M>& ifs) {
  using C = CoordOf<M>;
  require(ifs.is_contracting(), ErrorCode::unsupported, "attractor hull needs a contracting IFS");
  auto fits = [&](const C& lo, const C& hi) {
    if (hi < lo) return false;
    for (const auto& f : ifs.maps()) {
      C x = f(lo), y = f(hi);
      if (x < lo || y < lo || hi < x || hi < y) return false;
    }
    return true;
  };
  // Each endpoint is attained by some map applied to some endpoint; try all pairs.
  for (const auto& fu : ifs.maps()) {
    for (const auto& fl : ifs.maps()) {
      bool pu = sign_of(fu.r) > 0, pl = sign_of(fl.r) > 0;
      C lo, hi;
      if (pu && pl) {
        hi = fu.a / (C(1) - fu.r);
        lo = fl.a / (C(1) - fl.r);
      } else if (pu) {
        hi = fu.a / (C(1) - fu.r);
        lo = fl.r * hi + fl.a;
      } else if (pl) {
        lo = fl.a / (C(1) - fl.r);
        hi = fu.r * lo + fu.a;
      } else {
        hi = (fu.r * fl.a + fu.a) / (C(1) - fu.r * fl.r);
        lo = fl.r * hi + fl.a;
      }
      if (fits(lo, hi)) return {lo, hi};
    }
  }
  fail(ErrorCode::degenerate, "attractor hull not found");
}

template <class M>
AffineImage<M> normalize_to_unit(const Ifs<M>& ifs) {
  using C = CoordOf<M>;
  auto [lo, hi] = attractor_hull(ifs);
  C scale = hi - lo;
  require(sign_of(scale) > 0, ErrorCode::degenerate, "the attractor is a single point");
  std::vector<SimilarityMap<M>> maps;
  for (const auto& f : ifs.maps()) maps.push_back({f.r, (f.a + (f.r - C(1)) * lo) / scale});
  return {Ifs<M>(std::move(maps), ifs.probs(), ifs.contract_on_average()), lo, scale, C(0), C(1)};
}

template <class M>
RasterReport<M> rasterize_self_similar(const Ifs<M>& ifs, int resolution, int guard, std::uint64_t budget) {
  using C = CoordOf<M>;
  require(resolution >= 0 && resolution <= 40, ErrorCode::argument, "resolution must be in [0, 40]");
  require(guard >= 0, ErrorCode::argument, "guard must be nonnegative");
  C lo, hi;
  require_unit_hull(ifs, lo, hi);
  RasterReport<M> rep;
  rep.depth = raster_depth(ifs, resolution, dbl(C(hi - lo)), guard);
  std::vector<DyadicCell<M>> cells;
  raster_subtree<M>(ifs, {C(1), C(0), M(1), 0, 1}, resolution, rep.depth, lo, hi, cells, rep.straddle_mass,
                    rep.nodes, budget);
  rep.measure = DyadicMeasure<M>(resolution, std::move(cells));
  return rep;
}

template <class M>
std::vector<Word> stopping_section(const Ifs<M>& ifs, const CoordOf<M>& threshold, std::uint64_t budget) {
  using C = CoordOf<M>;
  require(ifs.is_contracting(), ErrorCode::unsupported, "stopping section needs a contracting IFS");
  require(sign_of(threshold) > 0 && !(C(1) < threshold), ErrorCode::argument, "threshold must be in (0, 1]");
  std::vector<Word> out;
  struct Node {
    Word w;
    C r;
  };
  std::vector<Node> stack{{Word{}, C(1)}};
  std::uint64_t visited = 0;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    for (std::size_t i = ifs.size(); i-- > 0;) {
      if (++visited > budget) fail(ErrorCode::budget_exceeded, "stopping section exceeded the budget");
      Word w = node.w;
      w.push_back(static_cast<int>(i));
      C r = node.r * abs_of(ifs.map(i).r);
      if (r < threshold) out.push_back(std::move(w));
      else stack.push_back({std::move(w), std::move(r)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class M>
CylinderTvReport cylinder_component_tv(const Ifs<M>& ifs, int resolution, int level, int depth, double epsilon,
                                       std::uint64_t budget) {
  using C = CoordOf<M>;
  require(level >= 0 && level <= resolution, ErrorCode::argument, "need 0 <= level <= resolution");
  require(depth >= 0, ErrorCode::argument, "depth must be nonnegative");
  require(resolution <= 40, ErrorCode::argument, "resolution must be <= 40");
  C lo, hi;
  require_unit_hull(ifs, lo, hi);
  check_budget(word_count(ifs.size(), depth), budget, "cylinder_component_tv");
  const int max_depth = std::max(depth, raster_depth(ifs, resolution, dbl(C(hi - lo)), 2));
  const std::int64_t last_k = (std::int64_t{1} << level) - 1;

  struct Cell {
    double weight = 0;
    double selected = 0;
    std::map<std::int64_t, double> mu, sel;
  };
  std::map<std::int64_t, Cell> table;

  std::vector<RasterNode<M>> frontier{{C(1), C(0), M(1), 0, 1}};
  for (int d = 0; d < depth; ++d) {
    std::vector<RasterNode<M>> next;
    for (const auto& node : frontier)
      for (std::size_t i = 0; i < ifs.size(); ++i) {
        const auto& f = ifs.map(i);
        next.push_back(
            {node.r * f.r, node.a + node.r * f.a, node.p * ifs.probs()[i], d + 1, node.sign * sign_of(f.r)});
      }
    frontier = std::move(next);
  }
  double straddle = 0;
  std::uint64_t nodes = 0;
  for (auto& node : frontier) {
    C base = node.r * lo + node.a;
    std::int64_t b = std::clamp(floor_at(base, level), std::int64_t{0}, last_k);
    double p = dbl(node.p);
    std::vector<DyadicCell<M>> cells;
    raster_subtree<M>(ifs, std::move(node), resolution, max_depth, lo, hi, cells, straddle, nodes, budget);
    Cell& sel = table[b];
    sel.selected += p;
    for (const auto& c : cells) {
      double m = dbl(c.mass);
      sel.sel[c.index] += m;
      Cell& home = table[c.index >> (resolution - level)];
      home.weight += m;
      home.mu[c.index] += m;
    }
  }

  CylinderTvReport rep;
  rep.level = level;
  rep.depth = depth;
  double total = 0, good = 0;
  for (const auto& [index, cell] : table) {
    if (cell.weight <= 0) continue;
    double tv = 1;
    if (cell.selected > 0) {
      double l1 = 0;
      auto a = cell.mu.begin();
      auto b = cell.sel.begin();
      while (a != cell.mu.end() || b != cell.sel.end()) {
        if (b == cell.sel.end() || (a != cell.mu.end() && a->first < b->first)) {
          l1 += a->second / cell.weight;
          ++a;
        } else if (a == cell.mu.end() || b->first < a->first) {
          l1 += b->second / cell.selected;
          ++b;
        } else {
          l1 += std::fabs(a->second / cell.weight - b->second / cell.selected);
          ++a;
          ++b;
        }
      }
      tv = std::min(1.0, l1 / 2);
    }
    rep.cells.push_back({index, cell.weight, tv});
    total += cell.weight;
    if (tv < epsilon) good += cell.weight;
  }
  rep.good_fraction = total > 0 ? good / total : 0;
  return rep;
}

namespace presets {

namespace {
Ifs<Rational> make(std::vector<SimilarityMap<Rational>> maps, bool average = false) {
  std::vector<Rational> probs(maps.size(), ratio(1, static_cast<long>(maps.size())));
  return Ifs<Rational>(std::move(maps), std::move(probs), average);
}
}  // namespace

Ifs<Rational> bernoulli(const Real& lambda) { return make({{lambda, Real(-1)}, {lambda, Real(1)}}); }

Ifs<Rational> gasket(const Real& t) {
  Real third(ratio(1, 3));
  return make({{third, Real(0)}, {third, third}, {third, t * third}});
}

Ifs<Rational> sinai(const Real& alpha) {
  return make({{Real(1) - alpha, Real(-1)}, {Real(1) + alpha, Real(1)}}, true);
}

Ifs<Rational> cantor() {
  Real third(ratio(1, 3));
  return make({{third, Real(0)}, {third, Real(ratio(2, 3))}});
}

Ifs<Rational> full_branch() {
  Real half(ratio(1, 2));
  return make({{half, Real(0)}, {half, half}});
}

Ifs<double> natural_weights(const Ifs<Rational>& ifs) {
  double s = sdim_set(ifs);
  Ifs<double> f = to_float(ifs);
  std::vector<double> p;
  double total = 0;
  for (const auto& m : f.maps()) total += p.emplace_back(std::pow(std::fabs(m.r), s));
  for (auto& x : p) x /= total;
  return Ifs<double>(f.maps(), std::move(p), false);
}

}  // namespace presets

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
}

Rational rational_from(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(from_int64(j.get<std::int64_t>()));
  if (j.is_number_float()) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>());
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }
  fail(ErrorCode::parse, "expected a number, got " + j.dump());
}

json rational_json(const Rational& q) { return json(to_string(q)); }

json integer_json(const Rational& z) {
  if (fits_int64(z.get_num())) return json(to_int64(z.get_num()));
  return json(z.get_num().get_str());
}

using FieldCache = std::map<std::string, FieldPtr>;

Real real_from(const json& j, FieldCache& cache) {
  if (!j.is_object()) return Real(rational_from(j));
  require(j.contains("minpoly") && j.contains("interval"), ErrorCode::parse,
          "algebraic scalar needs minpoly and interval: " + j.dump());
  const json& mp = j.at("minpoly");
  const json& iv = j.at("interval");
  require(mp.is_array() && iv.is_array() && iv.size() == 2, ErrorCode::parse, "malformed algebraic scalar");
  std::string key = mp.dump() + iv.dump();
  FieldPtr& field = cache[key];
  if (!field) {
    std::vector<Rational> c;
    for (const auto& x : mp) {
      Rational q = rational_from(x);
      require(q.get_den() == 1, ErrorCode::parse, "minimal polynomial coefficients must be integers");
      c.push_back(q);
    }
    field = NumberField::make(Polynomial(std::move(c)), Interval<Rational>(rational_from(iv[0]), rational_from(iv[1])));
  }
  std::vector<Rational> coeffs{Rational(0), Rational(1)};
  if (j.contains("coeffs")) {
    coeffs.clear();
    for (const auto& x : j.at("coeffs")) coeffs.push_back(rational_from(x));
  }
  return Real::from_coeffs(field, std::move(coeffs));
}

json real_json(const Real& x) {
  if (x.is_rational()) return rational_json(x.as_rational());
  const auto& f = *x.field();
  json mp = json::array();
  for (const auto& c : f.minpoly().coeffs()) mp.push_back(integer_json(c));
  json coeffs = json::array();
  for (const auto& c : x.coeffs()) coeffs.push_back(rational_json(c));
  return json{{"minpoly", mp},
              {"interval", json::array({rational_json(f.initial_interval().lo), rational_json(f.initial_interval().hi)})},
              {"coeffs", coeffs}};
}

}  // namespace

Real real_from_json(std::string_view text) {
  FieldCache cache;
  return real_from(parse_json(text), cache);
}

std::string real_to_json(const Real& x) { return real_json(x).dump(); }

Ifs<Rational> ifs_from_json(std::string_view text) {
  json j = parse_json(text);
  require(j.is_object() && j.contains("maps") && j.at("maps").is_array(), ErrorCode::parse, "IFS config needs maps");
  FieldCache cache;
  std::vector<SimilarityMap<Rational>> maps;
  for (const auto& m : j.at("maps")) {
    require(m.is_object() && m.contains("r") && m.contains("a"), ErrorCode::parse, "each map needs r and a");
    maps.push_back({real_from(m.at("r"), cache), real_from(m.at("a"), cache)});
  }
  std::vector<Rational> probs;
  if (j.contains("probs")) {
    for (const auto& p : j.at("probs")) probs.push_back(rational_from(p));
  } else {
    probs.assign(maps.size(), ratio(1, static_cast<long>(maps.size())));
  }
  bool average = j.value("contractOnAverage", false);
  return Ifs<Rational>(std::move(maps), std::move(probs), average);
}

std::string to_json(const Ifs<Rational>& ifs) {
  json maps = json::array();
  for (const auto& f : ifs.maps()) maps.push_back(json{{"r", real_json(f.r)}, {"a", real_json(f.a)}});
  json probs = json::array();
  for (const auto& p : ifs.probs()) probs.push_back(rational_json(p));
  return json{{"maps", maps}, {"probs", probs}, {"contractOnAverage", ifs.contract_on_average()}}.dump();
}

#define SSM_INSTANTIATE(M)                                                                                      \
  template class Ifs<M>;                                                                                        \
  template SimilarityMap<M> compose(const Ifs<M>&, const Word&);                                                \
  template AtomicMeasure<M> generation_measure(const Ifs<M>&, int, std::uint64_t);                              \
  template AtomicMeasure<M> tagged_generation_measure(const Ifs<M>&, int, std::uint64_t);                       \
  template double sdim_set(const Ifs<M>&);                                                                      \
  template double sdim_measure(const Ifs<M>&);                                                                  \
  template AffineImage<M> translate_to_attractor(const Ifs<M>&);                                                \
  template std::pair<CoordOf<M>, CoordOf<M>> attractor_hull(const Ifs<M>&);                                    \
  template AffineImage<M> normalize_to_unit(const Ifs<M>&);                                                     \
  template RasterReport<M> rasterize_self_similar(const Ifs<M>&, int, int, std::uint64_t);                      \
  template std::vector<Word> stopping_section(const Ifs<M>&, const CoordOf<M>&, std::uint64_t);                 \
  template CylinderTvReport cylinder_component_tv(const Ifs<M>&, int, int, int, double, std::uint64_t);

SSM_INSTANTIATE(Rational)
SSM_INSTANTIATE(double)

}  // namespace ssm
