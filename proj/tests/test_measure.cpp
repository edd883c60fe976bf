#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "ssm/measure_ops.hpp"
#include "ssm/serialization.hpp"
#include "test_support.hpp"

using namespace ssm;
using ssm::testing::random_measure;

namespace {

using Q = DyadicMeasure<Rational>;

Q cells(int res, std::vector<std::pair<std::int64_t, Rational>> xs) {
  std::vector<DyadicCell<Rational>> v;
  for (auto& [k, m] : xs) v.push_back({k, m});
  return Q(res, std::move(v));
}

double hb(double p) { return p <= 0 || p >= 1 ? 0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST(Entropy, SpecExamples) {
  EXPECT_EQ(entropy(Q::point(5, 3), 5), 0.0);
  EXPECT_EQ(entropy(Q::point(5, 3), 2), 0.0);
  auto half = cells(1, {{0, ratio(1, 2)}, {1, ratio(1, 2)}});
  EXPECT_DOUBLE_EQ(entropy(half, 1), 1.0);
  auto skew = cells(1, {{0, ratio(1, 4)}, {1, ratio(3, 4)}});
  const double oracle = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  EXPECT_NEAR(entropy(skew, 1), oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.811278, 1e-6);
  EXPECT_NEAR(normalized_entropy(half, 1), 1.0, 0);
}

TEST(Entropy, Errors) {
  auto sub = cells(2, {{0, ratio(1, 4)}});
  try {
    entropy(sub, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::normalization_required);
  }
  try {
    entropy(Q::point(2, 0), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::resolution_exceeded);
  }
}

TEST(ConditionalEntropy, SpecExamples) {
  auto u = Q::uniform(2, 0, 4);
  EXPECT_NEAR(conditional_entropy(u, 2, 1), 1.0, 1e-15);
  EXPECT_EQ(conditional_entropy(u, 2, 2), 0.0);
  auto mu = cells(2, {{0, ratio(1, 2)}, {2, ratio(1, 4)}, {3, ratio(1, 4)}});
  EXPECT_NEAR(conditional_entropy(mu, 2, 1), 0.5, 1e-15);
  EXPECT_TRUE((exact_conditional_entropy(mu, 2, 1) - exact_entropy(Q::uniform(1, 0, 2), 1) * ratio(1, 2)).is_zero());
  EXPECT_THROW(conditional_entropy(mu, 1, 2), Error);
}

TEST(Convolution, SpecExamples) {
  EXPECT_EQ(convolve(Q::point(3, 2), Q::point(3, 5)), Q::point(3, 7));
  auto coin = cells(0, {{0, ratio(1, 2)}, {1, ratio(1, 2)}});
  EXPECT_EQ(convolve(coin, coin), cells(0, {{0, ratio(1, 4)}, {1, ratio(1, 2)}, {2, ratio(1, 4)}}));
  // Brute-force double loop oracle for uniform level-3 self-convolution.
  auto u = Q::uniform(3, 0, 8);
  std::map<std::int64_t, Rational> oracle;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) oracle[a + b] += ratio(1, 64);
  auto uu = convolve(u, u);
  ASSERT_EQ(uu.size(), oracle.size());
  for (const auto& c : uu.cells()) EXPECT_EQ(c.mass, oracle[c.index]);
  EXPECT_EQ(uu.mass_at(7), ratio(8, 64));
  EXPECT_EQ(uu.mass_at(0), ratio(1, 64));
  EXPECT_THROW(convolve(Q::point(2, 0), Q::point(3, 0)), Error);
}

TEST(Convolution, SparseAndDenseAgree) {
  std::mt19937_64 rng(7);
  auto a = cells(20, {{0, ratio(1, 2)}, {1 << 19, ratio(1, 2)}});
  auto b = random_measure(rng, 20, 5);
  auto ab = convolve(a, b);
  EXPECT_EQ(ab.total_mass(), Rational(1));
  for (const auto& c : b.cells()) {
    EXPECT_EQ(ab.mass_at(c.index), c.mass / 2 + (a.mass_at(c.index - (1 << 19)) * 0));
  }
  auto pw = convolution_power(cells(0, {{-1, ratio(1, 2)}, {1, ratio(1, 2)}}), 5);
  EXPECT_EQ(pw.mass_at(5), ratio(1, 32));
  EXPECT_EQ(pw.mass_at(1), ratio(10, 32));
}

TEST(Convolution, AtomicSumsetAndMixed) {
  std::vector<Atom<Rational>> a{{Real(Rational(0)), ratio(1, 2), std::nullopt},
                                {Real(Rational(1)), ratio(1, 2), std::nullopt}};
  AtomicMeasure<Rational> coin(a);
  auto two = convolve(coin, coin);
  ASSERT_EQ(two.size(), 3u);
  EXPECT_EQ(two.atoms()[1].mass, ratio(1, 2));
  EXPECT_EQ(two.atoms()[1].location, Real(1));
  auto mixed = convolve(coin, Q::point(1, 1));
  EXPECT_EQ(mixed, cells(1, {{1, ratio(1, 2)}, {3, ratio(1, 2)}}));
}

TEST(Components, UniformIsSelfSimilar) {
  auto u = Q::uniform(8, 0, 256);
  for (int i = 0; i < 8; ++i) {
    auto comps = components(u, i, 8 - i);
    EXPECT_EQ(comps.size(), std::size_t{1} << i);
    for (const auto& c : comps) EXPECT_EQ(c.rescaled, Q::uniform(8 - i, 0, std::int64_t{1} << (8 - i)));
  }
  EXPECT_THROW(components(u, 5, 4), Error);
}

TEST(Components, RecombinationIsExact) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto mu = random_measure(rng, 12, 40);
    for (int i = 0; i <= 12; i += 3) {
      std::map<std::int64_t, Rational> acc;
      Rational wsum = 0;
      for (const auto& c : components(mu, i, 12 - i)) {
        wsum += c.weight;
        for (const auto& x : c.raw.cells()) acc[x.index] += c.weight * x.mass;
      }
      EXPECT_EQ(wsum, Rational(1));
      ASSERT_EQ(acc.size(), mu.size());
      for (const auto& x : mu.cells()) EXPECT_EQ(acc[x.index], x.mass);
    }
  }
}

TEST(Components, MeanComponentEntropyIsConditionalEntropy) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    auto mu = random_measure(rng, 10, 30, 7);
    for (int i : {0, 2, 5}) {
      for (int m : {1, 3}) {
        LogForm lhs;
        for (const auto& c : components(mu, i, m)) lhs += exact_entropy(c.rescaled, m) * c.weight;
        LogForm rhs = exact_conditional_entropy(mu, i + m, i);
        EXPECT_TRUE((lhs - rhs).is_zero()) << "i=" << i << " m=" << m;
        double fast = 0;
        for (const auto& [w, h] : component_entropies(mu, i, m)) fast += w.get_d() * h;
        EXPECT_NEAR(fast, rhs.to_double(), 1e-12);
      }
    }
  }
}

TEST(Moments, SpecExamples) {
  auto coin = cells(0, {{0, ratio(1, 2)}, {1, ratio(1, 2)}});
  auto m = moments(coin);
  EXPECT_EQ(m.mean, ratio(1, 2));
  EXPECT_EQ(m.variance, ratio(1, 4));
  for (int n = 1; n <= 6; ++n) {
    auto u = Q::uniform(n, 0, std::int64_t{1} << n);
    Rational brute_mean = 0, brute_var = 0;
    long N = 1L << n;
    for (long k = 0; k < N; ++k) brute_mean += ratio(k, N) / N;
    for (long k = 0; k < N; ++k) brute_var += (ratio(k, N) - brute_mean) * (ratio(k, N) - brute_mean) / N;
    EXPECT_EQ(moments(u).variance, brute_var);
    EXPECT_EQ(brute_var, (1 - Rational(1, N * N)) / 12);
  }
}

TEST(Moments, VarianceAddsUnderConvolution) {
  std::mt19937_64 rng(3);
  auto mu = random_measure(rng, 6, 10);
  Rational v = moments(mu).variance;
  for (int k : {2, 3, 5}) EXPECT_EQ(moments(convolution_power(mu, k)).variance, v * k);
}

TEST(Discretize, SpecExamples) {
  auto s = discretize(Q::uniform(4, 0, 16), 1);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.atoms()[0].location, Real(0));
  EXPECT_EQ(s.atoms()[1].location, Real(ratio(1, 2)));
  EXPECT_EQ(s.atoms()[1].mass, ratio(1, 2));
  auto d = discretize(Q::point(6, 13), 3);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.atoms()[0].location, Real(ratio(1, 8)));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto mu = random_measure(rng, 10, 25);
    for (int m : {0, 3, 7, 10}) {
      auto sm = discretize(mu, m);
      EXPECT_TRUE((exact_entropy(sm, m) - exact_entropy(mu, m)).is_zero());
    }
  }
}

TEST(TotalVariation, SpecExamples) {
  std::mt19937_64 rng(9);
  auto mu = random_measure(rng, 8, 20);
  EXPECT_EQ(tv_distance(mu, mu), 0.0);
  EXPECT_EQ(tv_distance(Q::point(0, 0), Q::point(0, 1)), 1.0);
  auto a = cells(1, {{0, ratio(1, 2)}, {1, ratio(1, 2)}});
  auto b = cells(1, {{0, ratio(1, 4)}, {1, ratio(3, 4)}});
  EXPECT_DOUBLE_EQ(tv_distance(a, b), 0.25);
  EXPECT_THROW(tv_distance(a, Q::point(2, 0)), Error);
}

TEST(Restrict, SpecExamples) {
  auto u = Q::uniform(4, 0, 16);
  EXPECT_EQ(restrict_and_normalize(u, {1, 0, 0}), Q::uniform(4, 0, 8));
  EXPECT_EQ(restrict_and_normalize(u, {0, 0, 0}), u);
  auto m = cells(2, {{0, ratio(1, 4)}, {1, ratio(1, 4)}, {2, ratio(1, 2)}});
  EXPECT_EQ(restrict_and_normalize(m, {2, 0, 1}), cells(2, {{0, ratio(1, 2)}, {1, ratio(1, 2)}}));
  try {
    restrict_and_normalize(m, {2, 3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_restriction);
  }
}

TEST(EntropyProperties, ChainRuleMonotonicityConcavityExact) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    int res = 4 + static_cast<int>(rng() % 9);
    auto mu = random_measure(rng, res, 1 + static_cast<int>(rng() % 24), 20);
    auto nu = random_measure(rng, res, 1 + static_cast<int>(rng() % 24), 20);
    Rational alpha = ratio(1 + static_cast<long>(rng() % 9), 10);
    for (int m1 = 0; m1 <= res; m1 += 2) {
      for (int m2 = m1; m2 <= res; m2 += 3) {
        LogForm chain = exact_entropy(mu, m2) - exact_entropy(mu, m1) - exact_conditional_entropy(mu, m2, m1);
        EXPECT_TRUE(chain.is_zero());
        EXPECT_TRUE(exact_entropy(mu, m1) <= exact_entropy(mu, m2));
        EXPECT_NEAR(entropy(to_float(mu), m2) - entropy(to_float(mu), m1) - conditional_entropy(to_float(mu), m2, m1),
                    0.0, 1e-10);
      }
      auto mx = mix(alpha, mu, nu);
      LogForm lower = exact_entropy(mu, m1) * alpha + exact_entropy(nu, m1) * Rational(1 - alpha);
      EXPECT_TRUE(lower <= exact_entropy(mx, m1));
      LogForm hb_alpha;
      hb_alpha.add_plogp(alpha);
      hb_alpha.add_plogp(Rational(1 - alpha));
      EXPECT_TRUE(exact_entropy(mx, m1) <= lower + hb_alpha);
      EXPECT_LE(entropy(mu, m1), std::log2(static_cast<double>(mu.coarsen(m1).size())) + 1e-12);
    }
  }
}

TEST(Serialization, RoundTrip) {
  std::mt19937_64 rng(4);
  auto mu = random_measure(rng, 9, 15);
  EXPECT_EQ(exact_measure_from_json(to_json(mu)), mu);
  auto f = to_float(mu);
  EXPECT_EQ(float_measure_from_json(to_json(f)), f);
  auto big = cells(3, {{-2, Rational(Integer("123456789012345678901234567890"), Integer("246913578024691357802469135781"))},
                       {5, Rational(1) - Rational(Integer("123456789012345678901234567890"),
                                                  Integer("246913578024691357802469135781"))}});
  EXPECT_EQ(exact_measure_from_json(to_json(big)), big);
  EXPECT_EQ(to_json(cells(0, {{0, Rational(1)}})), R"({"cells":[[0,1,1]],"resolution":0})");
  EXPECT_THROW(exact_measure_from_json("{\"cells\": 3}"), Error);
}

TEST(AtomicMeasure, CanonicalizeMergesEqualLocations) {
  std::vector<Atom<Rational>> a{{Real(ratio(1, 3)), ratio(1, 4), std::nullopt},
                                {Real(Rational(0)), ratio(1, 4), std::nullopt},
                                {Real(ratio(1, 3)), ratio(1, 2), std::nullopt}};
  AtomicMeasure<Rational> mu(a);
  EXPECT_EQ(mu.merge_count(), 1u);
  auto c = mu.canonicalize();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.atoms()[1].mass, ratio(3, 4));
  EXPECT_NEAR(point_entropy(mu), hb(0.25), 1e-15);
  EXPECT_NEAR(entropy(mu, 1), 0.0, 0);
  EXPECT_NEAR(entropy(mu, 2), hb(0.25), 1e-15);
}
