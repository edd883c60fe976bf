#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ssm/ifs.hpp"
#include "ssm/inverse.hpp"
#include "ssm/measure_ops.hpp"
#include "test_support.hpp"

using namespace ssm;
using ssm::testing::measure_corpus;
using ssm::testing::random_measure;

namespace {

using Q = DyadicMeasure<Rational>;

double plogp(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

Q lebesgue(int n) { return Q::uniform(n, 0, std::int64_t{1} << n); }

const Q& cantor15() {
  static const Q mu = rasterize_self_similar(presets::cantor(), 15, 24).measure;
  return mu;
}

// Component of mu on the level-i cell, pushed to [0,1) and kept at full depth.
Q rescaled_component(const ComponentRecord<Rational>& rec, int resolution) {
  int depth = resolution - rec.level;
  std::int64_t base = rec.cell * (std::int64_t{1} << depth);
  std::vector<DyadicCell<Rational>> cs;
  for (const auto& c : rec.raw.cells()) cs.push_back({c.index - base, c.mass});
  return Q(depth, std::move(cs));
}

// Binomial(k, 1/2) entropy in bits.
double binomial_entropy(int k) {
  double h = 0;
  for (int j = 0; j <= k; ++j)
    h += plogp(std::exp(std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0) - k * std::log(2.0)));
  return h;
}

IntSet random_set(std::mt19937_64& rng, int n, double density) {
  std::bernoulli_distribution b(density);
  IntSet s;
  for (int i = 0; i <= n; ++i)
    if (b(rng)) s.push_back(i);
  return s;
}

// Levels i in candidates whose window [i, i+m] meets J in a (1-delta) fraction.
IntSet admissible(const IntSet& candidates, const IntSet& J, int m, double delta) {
  IntSet out;
  for (int i : candidates)
    if (window_hypothesis({i}, J, m, delta)) out.push_back(i);
  return out;
}

}  // namespace

TEST(Classifiers, SpecExamples) {
  auto leb = lebesgue(8);
  EXPECT_TRUE(is_uniform(leb, 0.01, 4));
  EXPECT_TRUE(is_uniform(leb, 0.01, 8));
  EXPECT_FALSE(is_uniform(Q::point(8, 5), 0.9, 4));
  auto skew = Q(1, {{0, ratio(1, 4)}, {1, ratio(3, 4)}});
  EXPECT_TRUE(is_uniform(skew, 0.2, 1));
  EXPECT_FALSE(is_uniform(skew, 0.1, 1));

  for (double eps : {0.01, 0.3, 0.9}) {
    EXPECT_TRUE(is_atomic_entropy(Q::point(8, 77), eps, 5));
    EXPECT_TRUE(is_atomic_interval(Q::point(8, 77), eps));
  }
  EXPECT_FALSE(is_atomic_interval(leb, 0.49));
  EXPECT_FALSE(is_atomic_interval(leb, 0.25));
  EXPECT_TRUE(is_atomic_interval(to_float(Q::point(8, 1)), 1e-9));
  EXPECT_FALSE(is_atomic_interval(Q::point(8, 1), 0.0));
}

TEST(Classifiers, TwoAdjacentCellsCounterexample) {
  for (int m = 2; m <= 8; ++m) {
    std::int64_t k = 1 + m;
    auto mu = Q(m, {{k, ratio(1, 2)}, {k + 1, ratio(1, 2)}});
    EXPECT_TRUE(is_atomic_interval(mu, std::ldexp(1.0, -m + 1)));
    EXPECT_NEAR(normalized_entropy(mu, m), 1.0 / m, 1e-15);
    EXPECT_FALSE(is_atomic_entropy(mu, 0.99 / m, m));
  }
}

TEST(Classifiers, AtomicMeasures) {
  AtomicMeasure<Rational> a({{Real(ratio(1, 3)), ratio(9, 10), std::nullopt},
                             {Real(ratio(2, 5)), ratio(1, 20), std::nullopt},
                             {Real(ratio(9, 10)), ratio(1, 20), std::nullopt}});
  EXPECT_TRUE(is_atomic_interval(a, 0.1));
  EXPECT_TRUE(is_atomic_interval(a, ratio(1, 15).get_d() + 1e-12));
  EXPECT_FALSE(is_atomic_interval(a, 0.05));
  EXPECT_EQ(is_atomic_interval(to_float(a), 0.1), true);
}

TEST(Classifiers, MonotoneInEpsilon) {
  for (const auto& [name, mu] : measure_corpus(10)) {
    for (int m : {1, 3, 6, 10}) {
      bool was_uniform = false, was_atomic = false;
      for (double eps = 0; eps <= 1.0; eps += 1.0 / 64) {
        bool u = is_uniform(mu, eps, m), a = is_atomic_entropy(mu, eps, m);
        EXPECT_TRUE(!was_uniform || u) << name;
        EXPECT_TRUE(!was_atomic || a) << name;
        was_uniform = u;
        was_atomic = a;
      }
    }
  }
}

TEST(Classifiers, EntropyAtomicImpliesIntervalAtomic) {
  std::mt19937_64 rng(11);
  auto corpus = measure_corpus(12);
  for (int i = 0; i < 40; ++i) {
    std::int64_t x = std::uniform_int_distribution<std::int64_t>(0, 4095)(rng);
    corpus.push_back({"mix", ssm::testing::near_atomic(rng, 12, x, ratio(1, 1 + static_cast<long>(rng() % 5000)))});
  }
  int triggered = 0;
  for (const auto& [name, mu] : corpus) {
    for (int m = 1; m <= 12; ++m) {
      if (!is_atomic_entropy(mu, atomic_consistency_threshold(m), m)) continue;
      ++triggered;
      EXPECT_TRUE(is_atomic_interval(mu, std::ldexp(1.0, -m))) << name << " m=" << m;
    }
  }
  EXPECT_GT(triggered, 20);
}

TEST(ComponentStats, AgainstRecordOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    auto mu = trial % 2 ? ssm::testing::random_cascade(rng, 11, 0.7) : random_measure(rng, 11, 40);
    double eps = 0.15;
    int m = 3;
    auto st = component_stats(mu, 0, 8, m, eps, true);
    ASSERT_EQ(st.levels.size(), 9u);
    std::size_t s = 0;
    for (int i = 0; i <= 8; ++i) {
      double uni = 0, atom = 0, intv = 0, hsum = 0, vsum = 0;
      auto recs = components(mu, i, m);
      for (const auto& rec : recs) {
        auto comp = rescaled_component(rec, 11);
        double w = rec.weight.get_d();
        double h = normalized_entropy(comp, m);
        double var = moments(comp).variance.get_d();
        EXPECT_NEAR(normalized_entropy(rec.rescaled, m), h, 1e-12);
        hsum += w * h;
        vsum += w * var;
        if (h > 1 - eps) uni += w;
        if (h < eps) atom += w;
        bool ia = is_atomic_interval(comp, eps);
        if (ia) intv += w;
        const auto& sm = st.samples[s++];
        EXPECT_EQ(sm.cell, rec.cell);
        EXPECT_NEAR(sm.weight, w, 1e-15);
        EXPECT_NEAR(sm.hm, h, 1e-12);
        EXPECT_NEAR(sm.variance, var, 1e-12);
        EXPECT_EQ(sm.atomic_interval, ia);
      }
      const auto& l = st.levels[static_cast<std::size_t>(i)];
      EXPECT_EQ(l.count, recs.size());
      EXPECT_NEAR(l.weight_sum, 1.0, 1e-12);
      EXPECT_NEAR(l.mean_hm, hsum, 1e-12);
      EXPECT_NEAR(l.mean_var, vsum, 1e-12);
      EXPECT_NEAR(l.uniform_frac, uni, 1e-12);
      EXPECT_NEAR(l.atomic_frac, atom, 1e-12);
      EXPECT_NEAR(l.interval_frac, intv, 1e-12);
    }
    EXPECT_EQ(s, st.samples.size());
  }
}

TEST(ComponentStats, FloatBackendAgrees) {
  std::mt19937_64 rng(9);
  auto mu = ssm::testing::random_cascade(rng, 12, 0.6);
  auto a = component_stats(mu, 0, 9, 3, 0.2);
  auto b = component_stats(to_float(mu), 0, 9, 3, 0.2);
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    EXPECT_NEAR(a.levels[i].mean_hm, b.levels[i].mean_hm, 1e-10);
    EXPECT_NEAR(a.levels[i].mean_var, b.levels[i].mean_var, 1e-10);
  }
}

TEST(ComponentStats, SpecExamples) {
  auto leb = component_stats(lebesgue(12), 0, 9, 3, 0.05);
  for (const auto& l : leb.levels) EXPECT_DOUBLE_EQ(l.uniform_frac, 1.0);
  auto pt = component_stats(Q::point(12, 1234), 0, 9, 3, 0.05);
  for (const auto& l : pt.levels) {
    EXPECT_DOUBLE_EQ(l.atomic_frac, 1.0);
    EXPECT_DOUBLE_EQ(l.interval_frac, 1.0);
    EXPECT_EQ(l.mean_var, 0.0);
  }
  // Uniform fractions of the Cantor measure from its distribution function:
  // zero except at levels 3 and 11.
  auto c = component_stats(cantor15(), 2, 12, 3, 0.1);
  EXPECT_NEAR(c.mean_hm(), std::log(2.0) / std::log(3.0), 0.1);
  for (const auto& l : c.levels) {
    double oracle = l.level == 3 ? 0.5 : l.level == 11 ? 0.028564453125 : 0.0;
    EXPECT_NEAR(l.uniform_frac, oracle, 1e-6) << l.level;
  }
}

TEST(ComponentStats, LocalToGlobal) {
  for (const auto& [name, mu] : measure_corpus(16)) {
    for (int m : {2, 3, 4}) {
      int n = 16 - m;
      auto st = component_stats(mu, 0, n - 1, m, 0.1);
      double mean = 0;
      for (const auto& l : st.levels) mean += l.mean_hm;
      mean /= n;
      EXPECT_LE(std::abs(normalized_entropy(mu, n) - mean), (2.0 * m + 2) / n) << name << " m=" << m;
    }
  }
}

TEST(ComponentStats, Errors) {
  EXPECT_THROW(component_stats(lebesgue(8), 0, 6, 3, 0.1), Error);
  EXPECT_THROW(component_stats(lebesgue(8), 3, 2, 1, 0.1), Error);
  EXPECT_THROW(component_stats(lebesgue(8), 0, 2, 0, 0.1), Error);
}

TEST(Decomposition, SpecExamples) {
  std::mt19937_64 rng(3);
  int n = 14;
  auto leb = lebesgue(n);
  auto nu = random_measure(rng, n, 30);
  auto r = decompose(leb, nu, 0, 10, 3, 0.1, n);
  EXPECT_EQ(r.I.size(), 11u);
  EXPECT_TRUE(r.J.empty());
  EXPECT_DOUBLE_EQ(r.coverage, 1.0);
  EXPECT_LE(*r.gap, 1.0 / n);

  auto mu = ssm::testing::random_cascade(rng, n, 0.5);
  auto d = decompose(mu, Q::point(n, 4321), 0, 10, 3, 0.1, n);
  EXPECT_DOUBLE_EQ(d.coverage, 1.0);
  std::set<int> all(d.I.begin(), d.I.end());
  all.insert(d.J.begin(), d.J.end());
  EXPECT_EQ(all.size(), 11u);
  EXPECT_LE(std::abs(*d.gap), 2.0 / n);

  const auto& c = cantor15();
  auto cc = decompose(c, c, 0, 12, 3, 0.1, 12);
  EXPECT_LT(cc.coverage, 1.0);
  ASSERT_TRUE(cc.gap.has_value());
  EXPECT_GT(*cc.gap, 0.0);
}

TEST(Decomposition, Invariants) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    auto mu = ssm::testing::random_cascade(rng, 12, 0.3 + 0.035 * t);
    auto nu = ssm::testing::random_cascade(rng, 12, 0.9 - 0.03 * t);
    double eps = 0.05 + 0.02 * t;
    auto a = component_stats(mu, 0, 8, 4, eps), b = component_stats(nu, 0, 8, 4, eps);
    auto r = find_decomposition(a, b, eps);
    std::vector<int> inter;
    std::set_intersection(r.I.begin(), r.I.end(), r.J.begin(), r.J.end(), std::back_inserter(inter));
    EXPECT_TRUE(inter.empty());
    for (int i : r.I) EXPECT_GT(a.levels[static_cast<std::size_t>(i)].uniform_frac, 1 - eps);
    for (int j : r.J) EXPECT_GT(b.levels[static_cast<std::size_t>(j)].atomic_frac, 1 - eps);
  }
  auto a = component_stats(lebesgue(10), 0, 5, 2, 0.1), b = component_stats(lebesgue(10), 0, 6, 2, 0.1);
  EXPECT_THROW(find_decomposition(a, b, 0.1), Error);
}

TEST(Kv, BinomialExample) {
  auto mu = Q::point(0, 0);
  auto nu = Q(0, {{0, ratio(1, 2)}, {1, ratio(1, 2)}});
  auto s = kv_series_exact(mu, nu, 8);
  ASSERT_EQ(s.H.size(), 9u);
  for (int k = 0; k <= 8; ++k) EXPECT_NEAR(s.H[static_cast<std::size_t>(k)], binomial_entropy(k), 1e-12);
  EXPECT_NEAR(s.delta[1], 0.5, 1e-12);
  EXPECT_NEAR(s.delta[2], binomial_entropy(3) - 1.5, 1e-12);
  EXPECT_NEAR(s.delta[2], 0.3113, 1e-4);
  EXPECT_TRUE(s.monotone);
  for (std::size_t k = 2; k + 1 < s.exact_delta.size(); ++k) EXPECT_LT(s.exact_delta[k + 1], s.exact_delta[k]);
  EXPECT_GE(s.bound_residual, 0.0);
}

TEST(Kv, TranslationGivesZeroIncrements) {
  std::mt19937_64 rng(4);
  auto mu = random_measure(rng, 10, 12);
  auto s = kv_series_exact(mu, Q::point(10, 17), 5);
  for (const auto& d : s.exact_delta) EXPECT_EQ(d.sign(), 0);
  EXPECT_TRUE(s.monotone);
}

TEST(Kv, RandomPairsMonotoneExactly) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 25; ++t) {
    auto mu = random_measure(rng, 10, 2 + t % 5, 9);
    auto nu = random_measure(rng, 10, 2 + (t / 5) % 4, 9);
    auto s = kv_series_exact(mu, nu, 6);
    EXPECT_TRUE(s.monotone) << t;
    EXPECT_GE(s.bound_residual, -1e-9);
    auto cur = mu;
    for (int k = 0; k <= 6; ++k) {
      if (k) cur = convolve(cur, nu);
      double h = 0;
      for (const auto& c : cur.cells()) h += plogp(c.mass.get_d());
      EXPECT_NEAR(s.H[static_cast<std::size_t>(k)], h, 1e-9);
    }
  }
}

TEST(Kv, RealVariantLinearBound) {
  double worst = 0;
  auto corpus = measure_corpus(12);
  for (std::size_t i = 0; i + 1 < corpus.size(); i += 2) {
    auto s = kv_series(to_float(corpus[i].measure), to_float(corpus[i + 1].measure), 5, 10);
    worst = std::max(worst, s.empirical_c);
    EXPECT_GE(s.max_increase, 0.0);
  }
  EXPECT_LE(worst, 4.0);
}

TEST(BerryEsseen, ErfcAgainstLibm) {
  for (double x = -8; x <= 8; x += 1.0 / 256) EXPECT_NEAR(erfc_approx(x), std::erfc(x), 1e-13) << x;
  EXPECT_NEAR(gaussian_cdf(0), 0.5, 1e-16);
  EXPECT_NEAR(gaussian_cdf(1.96), 0.9750021048517795, 1e-13);
  EXPECT_NEAR(gaussian_cdf(3, 1, 2), gaussian_cdf(1), 1e-16);
}

TEST(BerryEsseen, CoinFlips) {
  auto coin = Q(0, {{-1, ratio(1, 2)}, {1, ratio(1, 2)}});
  double prev = 0;
  for (int k : {100, 400}) {
    std::vector<Q> f(static_cast<std::size_t>(k), coin);
    double L = std::sqrt(static_cast<double>(k));
    auto r = berry_esseen_check(f, L);
    EXPECT_DOUBLE_EQ(r.variance, k);
    EXPECT_DOUBLE_EQ(r.rho_sum, k);
    EXPECT_NEAR(r.bound, kBerryEsseenC1 / L, 1e-12);

    // Binomial oracle: S = 2B - k.
    double worst = 0;
    for (std::int64_t j = -k; j <= k; ++j) {
      double a = j * L, b = (j + 1) * L, mass = 0;
      for (int i = 0; i <= k; ++i) {
        double s = 2.0 * i - k;
        if (s >= a && s < b)
          mass += std::exp(std::lgamma(k + 1.0) - std::lgamma(i + 1.0) - std::lgamma(k - i + 1.0) - k * std::log(2.0));
      }
      double g = 0.5 * (std::erfc(-b / std::sqrt(2.0 * k)) - std::erfc(-a / std::sqrt(2.0 * k)));
      worst = std::max(worst, std::abs(mass - g));
    }
    EXPECT_NEAR(r.discrepancy, worst, 1e-12);
    EXPECT_LE(r.discrepancy, r.bound);
    EXPECT_LE(r.discrepancy, 0.1);
    if (prev > 0) EXPECT_LT(r.discrepancy, 0.75 * prev);
    prev = r.discrepancy;
  }
}

TEST(BerryEsseen, DegenerateAndSingleFactor) {
  EXPECT_THROW(berry_esseen_check(std::vector<Q>{Q::point(4, 3), Q::point(4, 1)}, 0.5), Error);
  auto r = berry_esseen_check(std::vector<Q>{Q(0, {{0, ratio(1, 2)}, {1, ratio(1, 2)}})}, 1.0);
  EXPECT_GT(r.bound, 0.0);
  EXPECT_GT(r.ratio, 0.0);
}

TEST(Saturation, SpecExamples) {
  auto leb = saturation_check(to_float(lebesgue(12)), 4, 3, 0.1, 1, 8);
  for (const auto& l : leb.levels) EXPECT_EQ(l.assignment, LevelAssignment::uniform) << l.level;
  EXPECT_DOUBLE_EQ(leb.coverage, 1.0);
  auto pt = saturation_check(Q::point(12, 99), 4, 3, 0.1, 0, 8);
  for (const auto& l : pt.levels) {
    EXPECT_EQ(l.assignment, LevelAssignment::atomic);
    EXPECT_EQ(l.mu_mean_var, 0.0);
  }
  auto c = saturation_check(to_float(rasterize_self_similar(presets::cantor(), 14, 24).measure), 8, 3, 0.2, 0, 11);
  EXPECT_EQ(c.levels.size(), 12u);
  for (const auto& l : c.levels) {
    EXPECT_GE(l.nu_uniform_frac, 0.0);
    EXPECT_LE(l.nu_uniform_frac, 1.0);
  }
}

TEST(VarianceLink, Examples) {
  auto pt = variance_entropy_link(Q::point(10, 5), 4);
  EXPECT_EQ(pt.variance, 0.0);
  EXPECT_EQ(pt.hm, 0.0);
  EXPECT_TRUE(pt.small_variance && pt.low_entropy && pt.holds());
  auto leb = variance_entropy_link(lebesgue(10), 4);
  EXPECT_NEAR(leb.variance, 1.0 / 12, 1e-3);
  EXPECT_FALSE(leb.small_variance || leb.low_entropy);
  EXPECT_TRUE(leb.holds());
  for (int m = 1; m <= 6; ++m) {
    auto cell = Q::uniform(12, 3 << (12 - m), std::int64_t{1} << (12 - m));
    auto r = variance_entropy_link(cell, m);
    EXPECT_EQ(r.hm, 0.0);
    EXPECT_LT(r.variance, std::ldexp(1.0, -m));
    EXPECT_NEAR(r.variance, std::ldexp(1.0, -2 * m) / 12, std::ldexp(1.0, -2 * m) / 100);
    EXPECT_TRUE(r.holds());
  }
}

TEST(VarianceLink, HoldsOnCorpus) {
  std::mt19937_64 rng(12);
  auto corpus = measure_corpus(14);
  for (int i = 0; i < 60; ++i) {
    std::int64_t x = std::uniform_int_distribution<std::int64_t>(0, (1 << 14) - 1)(rng);
    auto base = ssm::testing::near_atomic(rng, 14, x, ratio(1, 2 + static_cast<long>(rng() % 100000)));
    corpus.push_back({"mix", base});
    // narrow clusters around x
    std::vector<DyadicCell<Rational>> cs;
    int width = 1 + static_cast<int>(rng() % 64);
    for (int j = 0; j < width; ++j) cs.push_back({std::min<std::int64_t>(x + j, (1 << 14) - 1), ratio(1, width)});
    corpus.push_back({"cluster", Q(14, cs)});
  }
  int first = 0, second = 0;
  for (const auto& [name, mu] : corpus)
    for (int m = 1; m <= 10; ++m) {
      auto r = variance_entropy_link(mu, m);
      EXPECT_TRUE(r.holds()) << name << " m=" << m;
      first += r.small_variance;
      second += r.low_entropy;
    }
  EXPECT_GT(first, 10);
  EXPECT_GT(second, 10);
}

TEST(Covering, IntervalCoverExamples) {
  IntSet I;
  for (int i = 0; i <= 9; ++i) I.push_back(i);
  EXPECT_EQ(interval_cover(I, 3), (IntSet{0, 4, 8}));
  EXPECT_TRUE(interval_cover({}, 3).empty());
  EXPECT_EQ(interval_cover({5, 1, 5, 2}, 0), (IntSet{1, 2, 5}));
}

TEST(Covering, OpenWindowHypothesisIsTooWeak) {
  // |[i, i+m] n J| >= (1 - delta) m holds here, yet no J' can satisfy the
  // l = 0 conclusion |J'| >= |I|.
  IntSet I{0, 1}, J{1};
  EXPECT_FALSE(window_hypothesis(I, J, 1, 0.0));
  auto r = shifted_cover(I, J, 1, 0.0);
  EXPECT_FALSE(r.conclusion);
}

TEST(Covering, RandomTrials) {
  std::mt19937_64 rng(2024);
  int pairs_tested = 0;
  for (int t = 0; t < 1000; ++t) {
    int n = 20 + static_cast<int>(rng() % 200);
    int m = 1 + static_cast<int>(rng() % 12);
    double delta = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    IntSet J = random_set(rng, n + m, std::uniform_real_distribution<double>(0.5, 1.0)(rng));
    IntSet I = admissible(random_set(rng, n, 0.5), J, m, delta);

    auto cover = interval_cover(I, m);
    for (std::size_t k = 1; k < cover.size(); ++k) EXPECT_GT(cover[k], cover[k - 1] + m);
    for (int i : I) {
      auto it = std::upper_bound(cover.begin(), cover.end(), i);
      ASSERT_NE(it, cover.begin());
      EXPECT_LE(i - *std::prev(it), m);
    }
    for (int c : cover) EXPECT_TRUE(std::binary_search(I.begin(), I.end(), c));

    auto s = shifted_cover(I, J, m, delta);
    EXPECT_TRUE(s.hypothesis);
    EXPECT_TRUE(s.conclusion) << "trial " << t;
    EXPECT_TRUE(std::includes(J.begin(), J.end(), s.J.begin(), s.J.end()));

    IntSet J2 = random_set(rng, n + m, std::uniform_real_distribution<double>(0.5, 1.0)(rng));
    IntSet cand = random_set(rng, n, 0.5), I2;
    for (int i : cand)
      if (!std::binary_search(I.begin(), I.end(), i)) I2.push_back(i);
    I2 = admissible(I2, J2, m, delta);
    auto p = pair_cover(I, J, I2, J2, m, delta);
    EXPECT_TRUE(p.hypothesis);
    EXPECT_TRUE(p.conclusion) << "trial " << t;
    EXPECT_TRUE(std::includes(J.begin(), J.end(), p.J1.begin(), p.J1.end()));
    EXPECT_TRUE(std::includes(J2.begin(), J2.end(), p.J2.begin(), p.J2.end()));
    pairs_tested += !I.empty() && !I2.empty();
  }
  EXPECT_GT(pairs_tested, 500);
}

TEST(Covering, PairRequiresDisjointness) {
  IntSet J{0, 1, 2, 3, 4, 5};
  auto p = pair_cover({0, 1}, J, {1, 2}, J, 2, 0.1);
  EXPECT_FALSE(p.hypothesis);
}

TEST(Chebyshev, Examples) {
  auto all = chebyshev_levels(std::vector<double>(10, 1.0), 3, 0.01);
  EXPECT_EQ(all.levels, (IntSet{3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
  EXPECT_TRUE(all.hypothesis_met && all.size_bound_met);

  double eps = 0.04;
  std::vector<double> alt;
  for (int i = 0; i < 20; ++i) alt.push_back(i % 2 ? 1.0 : 1 - 1.5 * eps);
  auto r = chebyshev_levels(alt, 0, eps);
  EXPECT_TRUE(r.hypothesis_met);
  for (int i = 1; i < 20; i += 2) EXPECT_TRUE(std::binary_search(r.levels.begin(), r.levels.end(), i));
  EXPECT_TRUE(r.size_bound_met);

  auto bad = chebyshev_levels(std::vector<double>{0.1, 0.2}, 0, 0.01);
  EXPECT_FALSE(bad.hypothesis_met);
  EXPECT_TRUE(bad.levels.empty());
}

TEST(Chebyshev, RandomProperty) {
  std::mt19937_64 rng(77);
  int met = 0;
  for (int t = 0; t < 5000; ++t) {
    double eps = std::uniform_real_distribution<double>(0.001, 0.3)(rng);
    int n = 1 + static_cast<int>(rng() % 40);
    std::vector<double> f;
    for (int i = 0; i < n; ++i) {
      double u = std::uniform_real_distribution<double>(0, 1)(rng);
      f.push_back(u < 0.8 ? 1 - eps * u * u : u);
    }
    auto r = chebyshev_levels(f, 0, eps);
    if (r.hypothesis_met) {
      ++met;
      EXPECT_TRUE(r.size_bound_met);
    }
  }
  EXPECT_GT(met, 200);
}

TEST(Inheritance, AtomicityPassesToComponents) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    int m = 10, k = 1 + t % 3;
    std::int64_t x = std::uniform_int_distribution<std::int64_t>(0, (1 << (m + k)) - 1)(rng);
    auto mu = ssm::testing::near_atomic(rng, m + k, x, ratio(1, 4 + static_cast<long>(rng() % 400)));
    double eps = normalized_entropy(mu, m) + 1e-9;
    double ep = std::sqrt(eps + 2.0 * k / m);
    if (ep >= 1) continue;
    ++checked;
    auto st = component_stats(mu, 0, m, k, ep);
    EXPECT_GE(st.atomic_frac(), 1 - ep) << t;
  }
  EXPECT_GT(checked, 10);
}

TEST(Inheritance, UniformityPassesToComponents) {
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    int m = 10, k = 1 + t % 3;
    int n = m + k;
    // Lebesgue with a small random perturbation.
    std::vector<DyadicCell<Rational>> cs;
    std::uniform_int_distribution<int> w(100, 100 + 10 * (t + 1));
    long total = 0;
    std::vector<int> ws;
    for (std::int64_t j = 0; j < (std::int64_t{1} << n); ++j) {
      ws.push_back(w(rng));
      total += ws.back();
    }
    for (std::int64_t j = 0; j < (std::int64_t{1} << n); ++j) cs.push_back({j, ratio(ws[static_cast<std::size_t>(j)], total)});
    Q mu(n, std::move(cs));
    double eps = 1 - normalized_entropy(mu, m) + 1e-9;
    double ep = std::sqrt(eps + 2.0 * k / m);
    if (ep >= 1) continue;
    ++checked;
    auto st = component_stats(mu, 0, m, k, ep);
    EXPECT_GE(st.uniform_frac(), 1 - ep) << t;
  }
  EXPECT_GT(checked, 10);
}

TEST(UniformEntropyDimension, Examples) {
  auto leb = uniform_entropy_dimension(lebesgue(12), 4, 0.01, 0, 8);
  EXPECT_DOUBLE_EQ(leb.alpha, 1.0);
  EXPECT_DOUBLE_EQ(leb.fraction, 1.0);
  auto pt = uniform_entropy_dimension(Q::point(12, 7), 4, 0.01, 0, 8);
  EXPECT_EQ(pt.alpha, 0.0);
  EXPECT_DOUBLE_EQ(pt.fraction, 1.0);
  auto c = uniform_entropy_dimension(to_float(rasterize_self_similar(presets::cantor(), 20, 8).measure), 6, 0.15, 0, 12);
  EXPECT_GT(c.alpha, 0.6);
  EXPECT_GE(c.fraction, 0.0);
  EXPECT_LE(c.fraction, 1.0);
}
