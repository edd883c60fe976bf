#pragma once

// Observables of the inverse theorem for entropy: uniform and atomic
// classifiers, component statistics, level decompositions, the
// Kaimanovich-Vershik increments, Gaussian comparison of convolutions and
// the integer covering lemmas.
//
// H_m below is the normalized entropy H(mu, D_m) / m.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ssm/log_form.hpp"
#include "ssm/measure.hpp"

namespace ssm {

// H_m(mu) > 1 - eps.
template <class M>
bool is_uniform(const DyadicMeasure<M>& mu, double eps, int m);
// H_m(mu) < eps.
template <class M>
bool is_atomic_entropy(const DyadicMeasure<M>& mu, double eps, int m);
// Some closed interval of length eps carries mass > 1 - eps. Cells count as
// points at their left endpoints.
template <class M>
bool is_atomic_interval(const DyadicMeasure<M>& mu, double eps);
template <class M>
bool is_atomic_interval(const AtomicMeasure<M>& mu, double eps);

struct ComponentSample {
  int level;
  std::int64_t cell;
  double weight;
  double hm;        // H_m of the rescaled component
  double variance;  // of the rescaled component
  bool uniform;
  bool atomic;           // (eps, m)-atomic
  bool atomic_interval;  // eps-atomic
};

struct LevelStats {
  int level;
  std::size_t count;
  double weight_sum;
  double mean_hm;
  double uniform_frac;
  double atomic_frac;
  double interval_frac;
  double mean_var;
};

struct ComponentStats {
  int m = 0;
  double epsilon = 0;
  int first = 0, last = -1;
  std::vector<LevelStats> levels;
  std::vector<ComponentSample> samples;  // filled on request

  // Averages over levels, i.e. P_{first <= i <= last}(...).
  double mean_hm() const;
  double uniform_frac() const;
  double atomic_frac() const;
  double interval_frac() const;
};

// Exhaustive statistics of the level-i components for first <= i <= last.
// Requires last + m <= resolution.
template <class M>
ComponentStats component_stats(const DyadicMeasure<M>& mu, int first, int last, int m, double eps,
                               bool keep_samples = false);

// Mass-weighted fraction of level-i components (averaged over the levels)
// whose window-m normalized entropy satisfies pred.
template <class M>
double component_fraction(const DyadicMeasure<M>& mu, int first, int last, int m,
                          const std::function<bool(double)>& pred);

enum class LevelAssignment : char { uniform = 'I', atomic = 'J', none = '-' };

struct DecompositionReport {
  int first = 0, last = -1, m = 0;
  double epsilon = 0;
  std::vector<int> I, J;
  std::vector<LevelAssignment> assignment;  // indexed by level - first
  double coverage = 0;                      // |I u J| / number of levels
  std::optional<double> gap;                // H_n(mu*nu) - H_n(mu)
};

// Level k goes to I when mu's uniform fraction exceeds 1 - eps, else to J
// when nu's atomic fraction does.
DecompositionReport find_decomposition(const ComponentStats& mu, const ComponentStats& nu, double eps,
                                       std::optional<double> gap = std::nullopt);

// Statistics for both measures over levels [first, last] plus the entropy
// gap at scale n.
template <class M>
DecompositionReport decompose(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu, int first, int last, int m,
                              double eps, int n);

struct KvSeries {
  int level = 0;               // scale of the entropies; the resolution for the discrete variant
  std::vector<double> H;       // H(mu * nu^{*k}), k = 0..kmax (normalized for the scale-n variant)
  std::vector<double> delta;   // H[k+1] - H[k]
  std::vector<LogForm> exact_H, exact_delta;  // discrete variant only
  bool monotone = true;        // delta non-increasing (exactly for the discrete variant)
  double max_increase = 0;     // max_k delta[k+1] - delta[k], floored at 0
  double bound_residual = 0;   // min_k H[0] + k (H[1] - H[0]) - H[k]
  double empirical_c = 0;      // smallest C with H[k] <= bound + C k / n
};

// Discrete group variant on the cell indices: exact entropies of
// mu * nu^{*k} for k <= kmax.
KvSeries kv_series_exact(const DyadicMeasure<Rational>& mu, const DyadicMeasure<Rational>& nu, int kmax);
// Scale-n entropies H_n(mu * nu^{*k}) of equal-resolution measures.
template <class M>
KvSeries kv_series(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu, int kmax, int n);

// erfc with absolute error below 1e-13; series near 0, continued fraction in the tails.
double erfc_approx(double x);
double gaussian_cdf(double x, double mean = 0, double sd = 1);

inline constexpr double kBerryEsseenC1 = 1.12;

struct BerryEsseenReport {
  std::size_t factors = 0;
  double scale = 0;
  double mean = 0, variance = 0;
  double rho_sum = 0;      // sum of central absolute third moments
  double bound = 0;        // C1 * rho_sum / variance^{3/2}
  double discrepancy = 0;  // sup_j |mu(I_j) - gamma(I_j)|, I_j = [j scale, (j+1) scale)
  std::int64_t worst = 0;  // j of the worst interval
  double ratio = 0;        // discrepancy / bound
};

template <class M>
BerryEsseenReport berry_esseen_check(const std::vector<DyadicMeasure<M>>& factors, double scale);

struct SaturationLevel {
  int level;
  double nu_uniform_frac;
  double mu_atomic_frac;
  double mu_mean_var;
  LevelAssignment assignment;
};

struct SaturationReport {
  int k = 0, m = 0;
  double delta = 0;
  std::vector<SaturationLevel> levels;
  double coverage = 0;
};

// nu = mu^{*k}; per level q the uniform fraction of nu, the atomic fraction
// and mean component variance of mu, and the greedy I/J split.
template <class M>
SaturationReport saturation_check(const DyadicMeasure<M>& mu, int k, int m, double delta, int first, int last);

struct VarianceEntropyLink {
  int m = 0;
  double variance = 0;
  double hm = 0;
  // var < 2^{-2m-4}  =>  H_m <= 2/m
  bool small_variance = false;
  bool low_entropy_implied = true;
  // H_m < H_b(2^{-m-1}) / m  =>  var < 2^{-m}
  bool low_entropy = false;
  bool small_variance_implied = true;
  bool holds() const { return low_entropy_implied && small_variance_implied; }
};

template <class M>
VarianceEntropyLink variance_entropy_link(const DyadicMeasure<M>& mu, int m);
// 2^{-2m-4} and H_b(2^{-m-1}) / m.
double variance_threshold(int m);
double entropy_threshold(int m);
// H_b(2^{-m}) / m: below it an (eps, m)-atomic measure is 2^{-m}-atomic.
double atomic_consistency_threshold(int m);
// -p log2 p - (1-p) log2 (1-p)
double binary_entropy(double p);

// Sorted sets of integers.
using IntSet = std::vector<int>;

// Greedy least-element cover: I' subset of I with I inside I' + [0, m] and
// the windows [i, i+m] pairwise disjoint.
IntSet interval_cover(const IntSet& I, int m);

// |[i, i+m] n J| >= (1 - delta)(m + 1) for all i in I: a (1 - delta)
// fraction of every closed window.
bool window_hypothesis(const IntSet& I, const IntSet& J, int m, double delta);

struct ShiftedCover {
  IntSet J;                 // J' = J n (I' + [0, m])
  bool hypothesis = false;
  bool conclusion = false;  // |J' n (J' - l)| >= (1 - delta - l/m)|I| for 0 <= l <= m
};

ShiftedCover shifted_cover(const IntSet& I, const IntSet& J, int m, double delta);

struct PairCover {
  IntSet J1, J2;
  bool hypothesis = false;  // both window hypotheses and I1 n I2 empty
  bool conclusion = false;  // J1' n J2' empty and |J1' u J2'| >= (1 - delta)^2 |I1 u I2|
};

PairCover pair_cover(const IntSet& I1, const IntSet& J1, const IntSet& I2, const IntSet& J2, int m, double delta);

struct ChebyshevLevels {
  IntSet levels;               // q with fraction(q) > 1 - sqrt(eps)
  bool hypothesis_met = false; // mean fraction > 1 - eps
  bool size_bound_met = false; // |levels| > (1 - sqrt(eps)) * (number of levels)
};

// fractions[q - first] for levels first..first+size-1.
ChebyshevLevels chebyshev_levels(const std::vector<double>& fractions, int first, double eps);
ChebyshevLevels chebyshev_levels(const ComponentStats& stats, double eps, bool uniform = true);

struct UniformEntropyDimension {
  double alpha = 0;     // H at the finest scale
  double fraction = 0;  // P(|H_m(component) - alpha| < eps) over the levels
};

template <class M>
UniformEntropyDimension uniform_entropy_dimension(const DyadicMeasure<M>& mu, int m, double eps, int first, int last);

}  // namespace ssm
