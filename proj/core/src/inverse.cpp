#include "ssm/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssm/parallel.hpp"
#include "ssm/measure_ops.hpp"

namespace ssm {

namespace {

template <class M>
double as_double(const M& m) {
  if constexpr (Backend<M>::exact) return m.get_d();
  else return m;
}

inline double plogp(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

inline std::int64_t shift_down(std::int64_t k, int s) {
  if (s <= 0) return k;
  if (s >= 63) return k < 0 ? -1 : 0;
  return k >> s;
}

void require_window(int resolution, int first, int last, int m) {
  require(m >= 1, ErrorCode::argument, "window m must be positive");
  require(first >= 0 && first <= last, ErrorCode::argument, "empty or negative level range");
  require(last + m <= resolution, ErrorCode::resolution_exceeded,
          "levels up to " + std::to_string(last) + " with window " + std::to_string(m) + " exceed resolution " +
              std::to_string(resolution));
}

// Points x_j (sorted) with masses p_j: is there a closed window of length
// width (in index units) carrying more than threshold?
template <class Pos, class Mass, class Fits>
bool heavy_window(const std::vector<Pos>& pos, const std::vector<Mass>& mass, const Mass& threshold, Fits fits) {
  Mass acc(0);
  for (std::size_t lo = 0, hi = 0; lo < pos.size(); ++lo) {
    while (hi < pos.size() && fits(pos[lo], pos[hi])) acc += mass[hi++];
    if (acc > threshold) return true;
    acc -= mass[lo];
  }
  return false;
}

// 1 - eps, exact on the exact backend.
template <class M>
M one_minus(double eps) {
  if constexpr (Backend<M>::exact) return Rational(1 - from_double(eps));
  else return 1 - eps;
}

struct ComponentView {
  double weight;
  double hm;
  double variance;
  bool interval_atomic;
};

// Normalized masses and local positions of one component, in doubles.
template <class M>
ComponentView view_component(std::span<const DyadicCell<M>> cs, std::int64_t cell, int resolution, int level, int m,
                             double eps) {
  int depth = resolution - level;
  int s = depth - m;
  std::int64_t base = cell * (std::int64_t{1} << depth);
  M w(0);
  for (const auto& c : cs) w += c.mass;
  double wd = as_double(w);
  std::vector<double> p(cs.size());
  std::vector<std::int64_t> x(cs.size());
  for (std::size_t a = 0; a < cs.size(); ++a) {
    if constexpr (Backend<M>::exact) p[a] = Rational(cs[a].mass / w).get_d();
    else p[a] = cs[a].mass / wd;
    x[a] = cs[a].index - base;
  }
  double h = 0;
  for (std::size_t a = 0; a < cs.size();) {
    std::int64_t k = shift_down(x[a], s);
    double q = 0;
    while (a < cs.size() && shift_down(x[a], s) == k) q += p[a++];
    h += plogp(q);
  }
  double scale = std::ldexp(1.0, -depth);
  double mean = 0, var = 0;
  for (std::size_t a = 0; a < cs.size(); ++a) mean += p[a] * static_cast<double>(x[a]) * scale;
  for (std::size_t a = 0; a < cs.size(); ++a) {
    double d = static_cast<double>(x[a]) * scale - mean;
    var += p[a] * d * d;
  }
  double width = std::ldexp(eps, depth);
  auto fits = [&](std::int64_t a, std::int64_t b) { return static_cast<double>(b - a) <= width; };
  bool atomic;
  if constexpr (Backend<M>::exact) {
    std::vector<Rational> q(cs.size());
    for (std::size_t a = 0; a < cs.size(); ++a) q[a] = cs[a].mass;
    atomic = heavy_window(x, q, Rational(one_minus<M>(eps) * w), fits);
  } else {
    atomic = heavy_window(x, p, one_minus<M>(eps), fits);
  }
  return {wd, h / m, var, atomic};
}

template <class Fn>
void parallel_levels(int first, int last, Fn fn) {
  parallel_for(static_cast<std::size_t>(last - first + 1), [&](std::size_t j) { fn(first + static_cast<int>(j)); });
}

double level_average(const std::vector<LevelStats>& levels, double LevelStats::*field) {
  if (levels.empty()) return 0;
  double s = 0;
  for (const auto& l : levels) s += l.*field;
  return s / static_cast<double>(levels.size());
}

IntSet normalized(IntSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

IntSet set_minus(const IntSet& a, const IntSet& b) {
  IntSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IntSet set_union(const IntSet& a, const IntSet& b) {
  IntSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IntSet set_intersection(const IntSet& a, const IntSet& b) {
  IntSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t count_in(const IntSet& s, long lo, long hi) {
  auto a = std::lower_bound(s.begin(), s.end(), lo);
  auto b = std::upper_bound(s.begin(), s.end(), hi);
  return static_cast<std::size_t>(b - a);
}

// J n (union of [i, i+m] over i in cover)
IntSet within_windows(const IntSet& J, const IntSet& cover, int m) {
  IntSet out;
  for (int j : J) {
    auto it = std::upper_bound(cover.begin(), cover.end(), j);
    if (it != cover.begin() && j - *std::prev(it) <= m) out.push_back(j);
  }
  return out;
}

}  // namespace

template <class M>
bool is_uniform(const DyadicMeasure<M>& mu, double eps, int m) {
  return normalized_entropy(mu, m) > 1 - eps;
}

template <class M>
bool is_atomic_entropy(const DyadicMeasure<M>& mu, double eps, int m) {
  return normalized_entropy(mu, m) < eps;
}

template <class M>
bool is_atomic_interval(const DyadicMeasure<M>& mu, double eps) {
  require(eps >= 0, ErrorCode::argument, "negative interval length");
  std::vector<std::int64_t> x;
  std::vector<M> p;
  for (const auto& c : mu.cells()) {
    x.push_back(c.index);
    p.push_back(c.mass);
  }
  double width = std::ldexp(eps, mu.resolution());
  M threshold = one_minus<M>(eps) * mu.total_mass();
  return heavy_window(x, p, threshold, [&](std::int64_t a, std::int64_t b) {
    return static_cast<double>(b - a) <= width;
  });
}

template <class M>
bool is_atomic_interval(const AtomicMeasure<M>& mu, double eps) {
  require(eps >= 0, ErrorCode::argument, "negative interval length");
  std::vector<std::pair<CoordOf<M>, M>> pts;
  for (const auto& a : mu.atoms()) pts.emplace_back(a.location, a.mass);
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<CoordOf<M>> x;
  std::vector<M> p;
  for (auto& [loc, mass] : pts) {
    x.push_back(loc);
    p.push_back(mass);
  }
  CoordOf<M> width;
  if constexpr (Backend<M>::exact) width = Real(from_double(eps));
  else width = eps;
  M threshold = one_minus<M>(eps) * mu.total_mass();
  return heavy_window(x, p, threshold, [&](const CoordOf<M>& a, const CoordOf<M>& b) { return b - a <= width; });
}

double ComponentStats::mean_hm() const { return level_average(levels, &LevelStats::mean_hm); }
double ComponentStats::uniform_frac() const { return level_average(levels, &LevelStats::uniform_frac); }
double ComponentStats::atomic_frac() const { return level_average(levels, &LevelStats::atomic_frac); }
double ComponentStats::interval_frac() const { return level_average(levels, &LevelStats::interval_frac); }

template <class M>
ComponentStats component_stats(const DyadicMeasure<M>& mu, int first, int last, int m, double eps,
                               bool keep_samples) {
  require_window(mu.resolution(), first, last, m);
  ComponentStats out;
  out.m = m;
  out.epsilon = eps;
  out.first = first;
  out.last = last;
  std::size_t count = static_cast<std::size_t>(last - first + 1);
  out.levels.resize(count);
  std::vector<std::vector<ComponentSample>> samples(keep_samples ? count : 0);
  parallel_levels(first, last, [&](int i) {
    LevelStats st{i, 0, 0, 0, 0, 0, 0, 0};
    std::vector<ComponentSample> local;
    for_each_component<M>(mu, i, [&](std::int64_t cell, std::span<const DyadicCell<M>> cs) {
      auto v = view_component<M>(cs, cell, mu.resolution(), i, m, eps);
      bool uni = v.hm > 1 - eps, atom = v.hm < eps;
      ++st.count;
      st.weight_sum += v.weight;
      st.mean_hm += v.weight * v.hm;
      st.mean_var += v.weight * v.variance;
      if (uni) st.uniform_frac += v.weight;
      if (atom) st.atomic_frac += v.weight;
      if (v.interval_atomic) st.interval_frac += v.weight;
      if (keep_samples) local.push_back({i, cell, v.weight, v.hm, v.variance, uni, atom, v.interval_atomic});
    });
    if (st.weight_sum > 0) {
      st.mean_hm /= st.weight_sum;
      st.mean_var /= st.weight_sum;
      st.uniform_frac = std::min(1.0, st.uniform_frac / st.weight_sum);
      st.atomic_frac = std::min(1.0, st.atomic_frac / st.weight_sum);
      st.interval_frac = std::min(1.0, st.interval_frac / st.weight_sum);
    }
    out.levels[static_cast<std::size_t>(i - first)] = st;
    if (keep_samples) samples[static_cast<std::size_t>(i - first)] = std::move(local);
  });
  for (auto& s : samples) out.samples.insert(out.samples.end(), s.begin(), s.end());
  return out;
}

template <class M>
double component_fraction(const DyadicMeasure<M>& mu, int first, int last, int m,
                          const std::function<bool(double)>& pred) {
  require_window(mu.resolution(), first, last, m);
  std::vector<double> per(static_cast<std::size_t>(last - first + 1), 0.0);
  parallel_levels(first, last, [&](int i) {
    double total = 0, hit = 0;
    for (const auto& [w, h] : component_entropies(mu, i, m)) {
      double wd = as_double(w);
      total += wd;
      if (pred(h / m)) hit += wd;
    }
    per[static_cast<std::size_t>(i - first)] = total > 0 ? std::min(1.0, hit / total) : 0.0;
  });
  double s = 0;
  for (double v : per) s += v;
  return s / static_cast<double>(per.size());
}

DecompositionReport find_decomposition(const ComponentStats& mu, const ComponentStats& nu, double eps,
                                       std::optional<double> gap) {
  require(mu.first == nu.first && mu.last == nu.last && mu.m == nu.m, ErrorCode::argument,
          "component statistics over different level ranges or windows");
  DecompositionReport r;
  r.first = mu.first;
  r.last = mu.last;
  r.m = mu.m;
  r.epsilon = eps;
  r.gap = gap;
  for (std::size_t j = 0; j < mu.levels.size(); ++j) {
    int level = mu.first + static_cast<int>(j);
    if (mu.levels[j].uniform_frac > 1 - eps) {
      r.I.push_back(level);
      r.assignment.push_back(LevelAssignment::uniform);
    } else if (nu.levels[j].atomic_frac > 1 - eps) {
      r.J.push_back(level);
      r.assignment.push_back(LevelAssignment::atomic);
    } else {
      r.assignment.push_back(LevelAssignment::none);
    }
  }
  r.coverage = mu.levels.empty() ? 0.0
                                 : static_cast<double>(r.I.size() + r.J.size()) / static_cast<double>(mu.levels.size());
  return r;
}

template <class M>
DecompositionReport decompose(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu, int first, int last, int m,
                              double eps, int n) {
  auto a = component_stats(mu, first, last, m, eps);
  auto b = component_stats(nu, first, last, m, eps);
  double gap = normalized_entropy(convolve(mu, nu), n) - normalized_entropy(mu, n);
  return find_decomposition(a, b, eps, gap);
}

namespace {

void finish_kv(KvSeries& s) {
  for (std::size_t k = 0; k + 1 < s.H.size(); ++k) s.delta.push_back(s.H[k + 1] - s.H[k]);
  for (std::size_t k = 0; k + 1 < s.delta.size(); ++k) s.max_increase = std::max(s.max_increase, s.delta[k + 1] - s.delta[k]);
  s.bound_residual = std::numeric_limits<double>::infinity();
  double c = 0;
  for (std::size_t k = 0; k < s.H.size(); ++k) {
    double slack = s.H[0] + static_cast<double>(k) * (s.H.size() > 1 ? s.H[1] - s.H[0] : 0.0) - s.H[k];
    s.bound_residual = std::min(s.bound_residual, slack);
    if (k > 0 && s.level > 0) c = std::max(c, -slack * s.level / static_cast<double>(k));
  }
  s.empirical_c = c;
}

}  // namespace

KvSeries kv_series_exact(const DyadicMeasure<Rational>& mu, const DyadicMeasure<Rational>& nu, int kmax) {
  require(kmax >= 1, ErrorCode::argument, "kv series needs kmax >= 1");
  require(mu.resolution() == nu.resolution(), ErrorCode::argument, "kv series of measures with different resolutions");
  KvSeries s;
  s.level = mu.resolution();
  DyadicMeasure<Rational> cur = mu;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) cur = convolve(cur, nu);
    s.exact_H.push_back(exact_entropy(cur, cur.resolution()));
    s.H.push_back(s.exact_H.back().to_double());
  }
  for (std::size_t k = 0; k + 1 < s.exact_H.size(); ++k) s.exact_delta.push_back(s.exact_H[k + 1] - s.exact_H[k]);
  for (std::size_t k = 0; k + 1 < s.exact_delta.size(); ++k)
    if ((s.exact_delta[k] - s.exact_delta[k + 1]).sign() < 0) s.monotone = false;
  finish_kv(s);
  s.delta.clear();
  for (const auto& d : s.exact_delta) s.delta.push_back(d.to_double());
  return s;
}

template <class M>
KvSeries kv_series(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu, int kmax, int n) {
  require(kmax >= 1, ErrorCode::argument, "kv series needs kmax >= 1");
  require(mu.resolution() == nu.resolution(), ErrorCode::argument, "kv series of measures with different resolutions");
  KvSeries s;
  s.level = n;
  DyadicMeasure<M> cur = mu;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) cur = convolve(cur, nu);
    s.H.push_back(normalized_entropy(cur, n));
  }
  finish_kv(s);
  for (std::size_t k = 0; k + 1 < s.delta.size(); ++k)
    if (s.delta[k + 1] > s.delta[k]) s.monotone = false;
  return s;
}

double erfc_approx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0) return 2 - erfc_approx(-x);
  constexpr double inv_sqrt_pi = 0.56418958354775628695;
  if (x < 2.5) {
    // erf x = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!
    double term = x, sum = x, x2 = x * x;
    for (int n = 1; n < 500; ++n) {
      term *= 2 * x2 / (2 * n + 1);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return 1 - 2 * inv_sqrt_pi * std::exp(-x2) * sum;
  }
  if (x > 27) return 0;
  // erfc x = e^{-x^2} / (sqrt(pi) f),  f = x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))
  constexpr double tiny = 1e-300;
  double f = x, c = x, d = 0;
  for (int n = 1; n < 5000; ++n) {
    double a = 0.5 * n;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1) < 1e-16) break;
  }
  return inv_sqrt_pi * std::exp(-x * x) / f;
}

double gaussian_cdf(double x, double mean, double sd) {
  require(sd > 0, ErrorCode::degenerate, "gaussian with non-positive standard deviation");
  return 0.5 * erfc_approx(-(x - mean) / (sd * 1.41421356237309504880));
}

template <class M>
BerryEsseenReport berry_esseen_check(const std::vector<DyadicMeasure<M>>& factors, double scale) {
  require(!factors.empty(), ErrorCode::argument, "berry-esseen needs at least one factor");
  require(scale > 0, ErrorCode::argument, "interval scale must be positive");
  BerryEsseenReport r;
  r.factors = factors.size();
  r.scale = scale;
  for (const auto& f : factors) {
    require(f.is_probability(), ErrorCode::normalization_required, "berry-esseen factor is not a probability");
    r.rho_sum += as_double(moments(f).central_third_abs);
  }
  DyadicMeasure<M> mu = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) mu = convolve(mu, factors[i]);
  auto mo = moments(mu);
  r.mean = as_double(mo.mean);
  r.variance = as_double(mo.variance);
  require(r.variance > 0, ErrorCode::degenerate, "convolution has zero variance");
  double sd = std::sqrt(r.variance);
  r.bound = kBerryEsseenC1 * r.rho_sum / std::pow(r.variance, 1.5);

  auto bin = [&](std::int64_t idx) {
    return static_cast<std::int64_t>(std::floor(std::ldexp(static_cast<double>(idx), -mu.resolution()) / scale));
  };
  std::int64_t jlo = bin(mu.cells().front().index) - 4, jhi = bin(mu.cells().back().index) + 4;
  std::vector<double> mass(static_cast<std::size_t>(jhi - jlo + 1), 0.0);
  for (const auto& c : mu.cells()) mass[static_cast<std::size_t>(bin(c.index) - jlo)] += as_double(c.mass);
  for (std::int64_t j = jlo; j <= jhi; ++j) {
    double a = static_cast<double>(j) * scale, b = static_cast<double>(j + 1) * scale;
    double g = gaussian_cdf(b, r.mean, sd) - gaussian_cdf(a, r.mean, sd);
    double d = std::abs(mass[static_cast<std::size_t>(j - jlo)] - g);
    if (d > r.discrepancy) {
      r.discrepancy = d;
      r.worst = j;
    }
  }
  r.ratio = r.bound > 0 ? r.discrepancy / r.bound : std::numeric_limits<double>::infinity();
  return r;
}

template <class M>
SaturationReport saturation_check(const DyadicMeasure<M>& mu, int k, int m, double delta, int first, int last) {
  require(k >= 1, ErrorCode::argument, "saturation needs k >= 1");
  auto nu = convolution_power(mu, k);
  auto ns = component_stats(nu, first, last, m, delta);
  auto ms = component_stats(mu, first, last, m, delta);
  SaturationReport r;
  r.k = k;
  r.m = m;
  r.delta = delta;
  std::size_t covered = 0;
  for (std::size_t j = 0; j < ns.levels.size(); ++j) {
    LevelAssignment a = LevelAssignment::none;
    if (ns.levels[j].uniform_frac > 1 - delta) a = LevelAssignment::uniform;
    else if (ms.levels[j].atomic_frac > 1 - delta) a = LevelAssignment::atomic;
    if (a != LevelAssignment::none) ++covered;
    r.levels.push_back({first + static_cast<int>(j), ns.levels[j].uniform_frac, ms.levels[j].atomic_frac,
                        ms.levels[j].mean_var, a});
  }
  r.coverage = static_cast<double>(covered) / static_cast<double>(r.levels.size());
  return r;
}

double binary_entropy(double p) { return plogp(p) + plogp(1 - p); }
double variance_threshold(int m) { return std::ldexp(1.0, -2 * m - 4); }
double entropy_threshold(int m) { return binary_entropy(std::ldexp(1.0, -m - 1)) / m; }
double atomic_consistency_threshold(int m) { return binary_entropy(std::ldexp(1.0, -m)) / m; }

template <class M>
VarianceEntropyLink variance_entropy_link(const DyadicMeasure<M>& mu, int m) {
  require(m >= 1, ErrorCode::argument, "variance link needs m >= 1");
  VarianceEntropyLink r;
  r.m = m;
  r.variance = as_double(moments(mu).variance);
  r.hm = normalized_entropy(mu, m);
  r.small_variance = r.variance < variance_threshold(m);
  r.low_entropy_implied = !r.small_variance || r.hm <= 2.0 / m;
  r.low_entropy = r.hm < entropy_threshold(m);
  r.small_variance_implied = !r.low_entropy || r.variance < std::ldexp(1.0, -m);
  return r;
}

IntSet interval_cover(const IntSet& I, int m) {
  require(m >= 0, ErrorCode::argument, "negative window");
  IntSet out;
  for (int i : normalized(I))
    if (out.empty() || static_cast<long>(i) > static_cast<long>(out.back()) + m) out.push_back(i);
  return out;
}

bool window_hypothesis(const IntSet& I, const IntSet& J, int m, double delta) {
  IntSet js = normalized(J);
  double need = (1 - delta) * (m + 1);
  for (int i : I)
    if (static_cast<double>(count_in(js, i, static_cast<long>(i) + m)) < need) return false;
  return true;
}

ShiftedCover shifted_cover(const IntSet& I, const IntSet& J, int m, double delta) {
  require(m >= 1, ErrorCode::argument, "shifted cover needs m >= 1");
  IntSet is = normalized(I), js = normalized(J);
  ShiftedCover r;
  r.hypothesis = window_hypothesis(is, js, m, delta);
  r.J = within_windows(js, interval_cover(is, m), m);
  r.conclusion = true;
  for (int l = 0; l <= m; ++l) {
    std::size_t pairs = 0;
    for (int j : r.J)
      if (std::binary_search(r.J.begin(), r.J.end(), j + l)) ++pairs;
    double need = (1 - delta - static_cast<double>(l) / m) * static_cast<double>(is.size());
    if (static_cast<double>(pairs) < need) r.conclusion = false;
  }
  return r;
}

PairCover pair_cover(const IntSet& I1, const IntSet& J1, const IntSet& I2, const IntSet& J2, int m, double delta) {
  IntSet i1 = normalized(I1), j1 = normalized(J1), i2 = normalized(I2), j2 = normalized(J2);
  PairCover r;
  r.hypothesis = window_hypothesis(i1, j1, m, delta) && window_hypothesis(i2, j2, m, delta) &&
                 set_intersection(i1, i2).empty();
  IntSet j1p = within_windows(j1, interval_cover(i1, m), m);
  IntSet j2p = within_windows(j2, interval_cover(set_minus(i2, j1p), m), m);
  r.J1 = set_minus(j1p, j2p);
  r.J2 = std::move(j2p);
  double need = (1 - delta) * (1 - delta) * static_cast<double>(set_union(i1, i2).size());
  r.conclusion = set_intersection(r.J1, r.J2).empty() && static_cast<double>(set_union(r.J1, r.J2).size()) >= need;
  return r;
}

ChebyshevLevels chebyshev_levels(const std::vector<double>& fractions, int first, double eps) {
  require(eps >= 0, ErrorCode::argument, "negative epsilon");
  ChebyshevLevels r;
  if (fractions.empty()) return r;
  double cut = 1 - std::sqrt(eps), mean = 0;
  for (std::size_t q = 0; q < fractions.size(); ++q) {
    mean += fractions[q];
    if (fractions[q] > cut) r.levels.push_back(first + static_cast<int>(q));
  }
  mean /= static_cast<double>(fractions.size());
  r.hypothesis_met = mean > 1 - eps;
  r.size_bound_met = static_cast<double>(r.levels.size()) > cut * static_cast<double>(fractions.size());
  return r;
}

ChebyshevLevels chebyshev_levels(const ComponentStats& stats, double eps, bool uniform) {
  std::vector<double> f;
  for (const auto& l : stats.levels) f.push_back(uniform ? l.uniform_frac : l.atomic_frac);
  return chebyshev_levels(f, stats.first, eps);
}

template <class M>
UniformEntropyDimension uniform_entropy_dimension(const DyadicMeasure<M>& mu, int m, double eps, int first, int last) {
  require(mu.resolution() >= 1, ErrorCode::resolution_exceeded, "uniform entropy dimension needs resolution >= 1");
  UniformEntropyDimension r;
  r.alpha = normalized_entropy(mu, mu.resolution());
  double alpha = r.alpha;
  r.fraction = component_fraction<M>(mu, first, last, m, [&](double h) { return std::abs(h - alpha) < eps; });
  return r;
}

#define SSM_INSTANTIATE(M)                                                                                         \
  template bool is_uniform(const DyadicMeasure<M>&, double, int);                                                   \
  template bool is_atomic_entropy(const DyadicMeasure<M>&, double, int);                                            \
  template bool is_atomic_interval(const DyadicMeasure<M>&, double);                                                \
  template bool is_atomic_interval(const AtomicMeasure<M>&, double);                                                \
  template ComponentStats component_stats(const DyadicMeasure<M>&, int, int, int, double, bool);                    \
  template double component_fraction(const DyadicMeasure<M>&, int, int, int, const std::function<bool(double)>&);   \
  template DecompositionReport decompose(const DyadicMeasure<M>&, const DyadicMeasure<M>&, int, int, int, double,   \
                                         int);                                                                      \
  template KvSeries kv_series(const DyadicMeasure<M>&, const DyadicMeasure<M>&, int, int);                          \
  template BerryEsseenReport berry_esseen_check(const std::vector<DyadicMeasure<M>>&, double);                      \
  template SaturationReport saturation_check(const DyadicMeasure<M>&, int, int, double, int, int);                  \
  template VarianceEntropyLink variance_entropy_link(const DyadicMeasure<M>&, int);                                 \
  template UniformEntropyDimension uniform_entropy_dimension(const DyadicMeasure<M>&, int, double, int, int);

SSM_INSTANTIATE(Rational)
SSM_INSTANTIATE(double)

}  // namespace ssm
