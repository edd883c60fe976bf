#pragma once

// Entropy, convolution, components, moments, discretization and distances
// for dyadic and atomic measures. All logarithms are base 2.

#include <functional>
#include <span>
#include <vector>

#include "ssm/log_form.hpp"
#include "ssm/measure.hpp"

namespace ssm {

// H(mu, D_m) in bits. Requires a probability measure and m <= resolution.
template <class M>
double entropy(const DyadicMeasure<M>& mu, int m);
// H(mu, D_m) / m for m > 0.
template <class M>
double normalized_entropy(const DyadicMeasure<M>& mu, int m);
// H(mu, D_{fine} | D_{coarse}) via the conditional-measure sum.
template <class M>
double conditional_entropy(const DyadicMeasure<M>& mu, int fine, int coarse);

LogForm exact_entropy(const DyadicMeasure<Rational>& mu, int m);
LogForm exact_conditional_entropy(const DyadicMeasure<Rational>& mu, int fine, int coarse);

// Entropy of the partition into level-m cells (and tags, when present).
template <class M>
double entropy(const AtomicMeasure<M>& mu, int m);
LogForm exact_entropy(const AtomicMeasure<Rational>& mu, int m);
template <class M>
double conditional_entropy(const AtomicMeasure<M>& mu, int fine, int coarse);
// Entropy of the atom distribution itself (after merging equal atoms).
template <class M>
double point_entropy(const AtomicMeasure<M>& mu);

// Index-addition convolution of equal-resolution measures. Cells are
// represented by their left endpoints, so the result differs from the
// convolution of the underlying continuous measures by at most one cell.
template <class M>
DyadicMeasure<M> convolve(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu);
template <class M>
DyadicMeasure<M> convolution_power(const DyadicMeasure<M>& mu, int k);
// Exact sumset convolution (untagged measures only).
template <class M>
AtomicMeasure<M> convolve(const AtomicMeasure<M>& mu, const AtomicMeasure<M>& nu);
// Rasterizes the atomic factor at nu's resolution first.
template <class M>
DyadicMeasure<M> convolve(const AtomicMeasure<M>& mu, const DyadicMeasure<M>& nu);

// Convex combination alpha*mu + (1-alpha)*nu of equal-resolution measures.
template <class M>
DyadicMeasure<M> mix(const M& alpha, const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu);

template <class M>
struct ComponentRecord {
  int level;
  std::int64_t cell;  // index of the level-`level` cell D
  M weight;           // mu(D)
  DyadicMeasure<M> raw;       // mu conditioned on D, full resolution
  DyadicMeasure<M> rescaled;  // raw pushed to [0,1) by T_D, truncated to the window depth
};

// All level-i components with positive mass; rescaled components are kept to
// resolution m. Requires 0 <= i and i + m <= resolution.
template <class M>
std::vector<ComponentRecord<M>> components(const DyadicMeasure<M>& mu, int i, int m);

// Visits each level-i cell of positive mass with its (unnormalized) cells.
template <class M>
void for_each_component(const DyadicMeasure<M>& mu, int i,
                        const std::function<void(std::int64_t cell, std::span<const DyadicCell<M>> cells)>& fn);

// (weight, H(mu^{x,i}, D_m)) for every level-i component, without building records.
template <class M>
std::vector<std::pair<M, double>> component_entropies(const DyadicMeasure<M>& mu, int i, int m);

template <class M>
struct Moments {
  M mean;
  M variance;
  M third_abs;          // int |x|^3
  M central_third_abs;  // int |x - mean|^3
};

// Cells are represented by their left endpoints.
template <class M>
Moments<M> moments(const DyadicMeasure<M>& mu);
Moments<double> moments(const AtomicMeasure<double>& mu);

// sigma_m: atoms at the grid points k 2^-m carrying the mass of D_m(k 2^-m).
template <class M>
AtomicMeasure<M> discretize(const DyadicMeasure<M>& mu, int m);
template <class M>
AtomicMeasure<M> discretize(const AtomicMeasure<M>& mu, int m);

// Level-n rasterization: each atom's mass goes to the cell containing it.
template <class M>
DyadicMeasure<M> rasterize(const AtomicMeasure<M>& mu, int n);

// Half the l1 distance of the mass vectors.
template <class M>
double tv_distance(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu);
template <class M>
double tv_distance(const AtomicMeasure<M>& mu, const AtomicMeasure<M>& nu);

struct CellRange {
  int level;
  std::int64_t first;  // inclusive
  std::int64_t last;   // inclusive
};

template <class M>
DyadicMeasure<M> restrict_and_normalize(const DyadicMeasure<M>& mu, const CellRange& range);

// Translation by `shift` cells at the measure's own resolution.
template <class M>
DyadicMeasure<M> shift(const DyadicMeasure<M>& mu, std::int64_t shift);

}  // namespace ssm
