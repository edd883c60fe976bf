#pragma once

// Iterated function systems of similarities x -> r x + a on the line,
// cylinder words, generation measures and rasterized self-similar measures.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssm/measure.hpp"

namespace ssm {

inline constexpr std::uint64_t kDefaultAtomBudget = std::uint64_t{1} << 24;

template <class M>
struct SimilarityMap {
  using Coord = CoordOf<M>;
  Coord r;
  Coord a;

  Coord operator()(const Coord& x) const { return r * x + a; }
  friend bool operator==(const SimilarityMap& f, const SimilarityMap& g) { return f.r == g.r && f.a == g.a; }
};

// f o g
template <class M>
SimilarityMap<M> compose(const SimilarityMap<M>& f, const SimilarityMap<M>& g) {
  return {f.r * g.r, f.r * g.a + f.a};
}

// Symbols index the maps of an Ifs; phi_w = phi_{w_1} o ... o phi_{w_n}.
using Word = std::vector<int>;

template <class M>
class Ifs {
 public:
  using Coord = CoordOf<M>;
  using Map = SimilarityMap<M>;

  // Needs two distinct maps and a positive probability vector. Unless
  // contract_on_average is set every |r_i| < 1; otherwise sum p_i log|r_i| < 0.
  Ifs(std::vector<Map> maps, std::vector<M> probs, bool contract_on_average = false);

  const std::vector<Map>& maps() const { return maps_; }
  const Map& map(std::size_t i) const { return maps_[i]; }
  const std::vector<M>& probs() const { return probs_; }
  std::size_t size() const { return maps_.size(); }
  bool contract_on_average() const { return contract_on_average_; }
  bool is_contracting() const { return contracting_; }
  bool uniform_ratio() const;
  double max_abs_ratio() const;
  double min_abs_ratio() const;

 private:
  std::vector<Map> maps_;
  std::vector<M> probs_;
  bool contract_on_average_ = false;
  bool contracting_ = true;
};

Ifs<double> to_float(const Ifs<Rational>& ifs);

// |Lambda|^n, saturating at UINT64_MAX.
std::uint64_t word_count(std::size_t alphabet, int n);
void check_budget(std::uint64_t needed, std::uint64_t budget, const char* what);

template <class M>
SimilarityMap<M> compose(const Ifs<M>& ifs, const Word& word);

// nu^(n) = sum over words of length n of p_w delta_{phi_w(0)}, canonical.
template <class M>
AtomicMeasure<M> generation_measure(const Ifs<M>& ifs, int n, std::uint64_t budget = kDefaultAtomBudget);
// Same atoms tagged with the composed ratio r_w; equal locations with
// different ratios stay apart.
template <class M>
AtomicMeasure<M> tagged_generation_measure(const Ifs<M>& ifs, int n, std::uint64_t budget = kDefaultAtomBudget);

template <class M>
struct OverlapReport {
  int n = 0;
  std::optional<CoordOf<M>> delta;  // empty when no two words share a ratio
  Word first, second;               // a minimizing pair
  bool exact_overlap = false;
  double log_rate = 0;  // -(1/n) log2 delta; +inf on exact overlap, NaN if delta is empty
};

// Minimal distance |phi_i(0) - phi_j(0)| over distinct words of length n
// with equal composed ratio. Exact.
OverlapReport<Rational> delta_n(const Ifs<Rational>& ifs, int n, std::uint64_t budget = kDefaultAtomBudget);
// Outward-rounded floating evaluation. Throws uncertain_zero when ratio
// equality or a positive minimum cannot be certified.
OverlapReport<double> delta_n(const Ifs<double>& ifs, int n, std::uint64_t budget = kDefaultAtomBudget);

// Root of sum |r_i|^s = 1 by bisection.
template <class M>
double sdim_set(const Ifs<M>& ifs);
// sum p_i log p_i / sum p_i log |r_i|.
template <class M>
double sdim_measure(const Ifs<M>& ifs);

template <class M>
struct AffineImage {
  Ifs<M> ifs;
  CoordOf<M> offset;  // new coordinate y = (x - offset) / scale
  CoordOf<M> scale;
  CoordOf<M> lo, hi;  // bounding interval of the new attractor
};

// Conjugates by the translation moving the fixed point of the first map to
// 0. lo, hi come from the geometric bound max|a_i| / (1 - max|r_i|).
template <class M>
AffineImage<M> translate_to_attractor(const Ifs<M>& ifs);
// Convex hull [lo, hi] of the attractor, exact.
template <class M>
std::pair<CoordOf<M>, CoordOf<M>> attractor_hull(const Ifs<M>& ifs);
// Conjugates by the affine map sending the attractor hull onto [0, 1].
template <class M>
AffineImage<M> normalize_to_unit(const Ifs<M>& ifs);

template <class M>
struct RasterReport {
  DyadicMeasure<M> measure;
  int depth = 0;             // maximal cylinder depth visited
  double straddle_mass = 0;  // mass of depth-limit cylinders meeting two cells
  std::uint64_t nodes = 0;
};

// Self-similar measure of an IFS whose attractor lies in [0, 1], at
// resolution N. Cylinders inside one cell are assigned whole; at the depth
// limit ceil((N + log2 diam) / log2(1/r_max)) + guard the rest go to the
// cell of their left base point.
template <class M>
RasterReport<M> rasterize_self_similar(const Ifs<M>& ifs, int resolution, int guard = 2,
                                       std::uint64_t budget = kDefaultAtomBudget);

// Words w with |r_w| < threshold <= |r_parent(w)|. Requires 0 < threshold <= 1.
template <class M>
std::vector<Word> stopping_section(const Ifs<M>& ifs, const CoordOf<M>& threshold,
                                   std::uint64_t budget = kDefaultAtomBudget);

struct ComponentTv {
  std::int64_t cell;
  double weight;
  double tv;
};

struct CylinderTvReport {
  int level = 0;
  int depth = 0;
  std::vector<ComponentTv> cells;
  double good_fraction = 0;  // mass of cells with tv < epsilon
};

// For every level-k cell D: TV distance between mu conditioned on D and the
// normalized sum of p_w phi_w(mu) over |w| = n with phi_w(0) in D.
template <class M>
CylinderTvReport cylinder_component_tv(const Ifs<M>& ifs, int resolution, int level, int depth, double epsilon,
                                       std::uint64_t budget = kDefaultAtomBudget);

namespace presets {
// x -> lambda x - 1, lambda x + 1 with equal weights.
Ifs<Rational> bernoulli(const Real& lambda);
// x -> x/3, (x+1)/3, (x+t)/3 with equal weights.
Ifs<Rational> gasket(const Real& t);
// x -> (1-alpha)x - 1, (1+alpha)x + 1, contracting on average.
Ifs<Rational> sinai(const Real& alpha);
Ifs<Rational> cantor();
Ifs<Rational> full_branch();
// Weights p_i = |r_i|^s with s = sdim_set.
Ifs<double> natural_weights(const Ifs<Rational>& ifs);
}  // namespace presets

// {"maps":[{"r":..,"a":..}],"probs":[..],"contractOnAverage":bool}. Scalars
// are "p/q" or decimal strings, integers, or
// {"minpoly":[c0,..],"interval":[lo,hi],"coeffs":[..]} for sum coeffs_i a^i.
Ifs<Rational> ifs_from_json(std::string_view text);
std::string to_json(const Ifs<Rational>& ifs);
Real real_from_json(std::string_view text);
std::string real_to_json(const Real& x);

}  // namespace ssm
