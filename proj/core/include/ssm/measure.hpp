#pragma once

// Finitely supported measures on R.
//
// DyadicMeasure<M> assigns masses to the half-open cells
// [k 2^-n, (k+1) 2^-n) of a fixed resolution n. AtomicMeasure<M> is a list
// of weighted points with optional tags. M is Rational (exact backend, exact
// coordinates as Real) or double (float backend).

#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "ssm/errors.hpp"
#include "ssm/rational.hpp"
#include "ssm/real.hpp"

namespace ssm {

template <class M>
struct Backend;

template <>
struct Backend<Rational> {
  using Coord = Real;
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
};

template <>
struct Backend<double> {
  using Coord = double;
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
};

template <class M>
using CoordOf = typename Backend<M>::Coord;

inline constexpr double kFloatMassTolerance = 1e-9;

template <class M>
bool is_unit_mass(const M& total) {
  if constexpr (Backend<M>::exact) return total == 1;
  else return total > 1 - kFloatMassTolerance && total < 1 + kFloatMassTolerance;
}

template <class M>
struct DyadicCell {
  std::int64_t index;
  M mass;
};

template <class M>
class DyadicMeasure {
 public:
  using Cell = DyadicCell<M>;

  DyadicMeasure() = default;
  // Duplicate indices are summed, zero masses dropped, negative masses rejected.
  DyadicMeasure(int resolution, std::vector<Cell> cells);

  static DyadicMeasure point(int resolution, std::int64_t index);
  // Equal mass on `count` consecutive cells starting at `first`.
  static DyadicMeasure uniform(int resolution, std::int64_t first, std::int64_t count);

  int resolution() const { return resolution_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  M total_mass() const;
  bool is_probability() const { return !cells_.empty() && is_unit_mass(total_mass()); }
  M mass_at(std::int64_t index) const;

  // Same measure on the coarser grid of the given level (level <= resolution).
  DyadicMeasure coarsen(int level) const;

  friend bool operator==(const DyadicMeasure& a, const DyadicMeasure& b) {
    if (a.resolution_ != b.resolution_ || a.cells_.size() != b.cells_.size()) return false;
    for (std::size_t i = 0; i < a.cells_.size(); ++i)
      if (a.cells_[i].index != b.cells_[i].index || a.cells_[i].mass != b.cells_[i].mass) return false;
    return true;
  }

 private:
  struct Trusted {};
  DyadicMeasure(Trusted, int resolution, std::vector<Cell> cells) : resolution_(resolution), cells_(std::move(cells)) {}
  template <class>
  friend class DyadicMeasureBuilder;

  int resolution_ = 0;
  std::vector<Cell> cells_;
};

// Builds a measure from cells already sorted by strictly increasing index
// with positive masses (no validation beyond a debug check).
template <class M>
class DyadicMeasureBuilder {
 public:
  static DyadicMeasure<M> from_sorted(int resolution, std::vector<DyadicCell<M>> cells) {
    return DyadicMeasure<M>(typename DyadicMeasure<M>::Trusted{}, resolution, std::move(cells));
  }
};

template <class M>
struct Atom {
  CoordOf<M> location;
  M mass;
  std::optional<CoordOf<M>> tag;
};

template <class M>
class AtomicMeasure {
 public:
  using Coord = CoordOf<M>;

  AtomicMeasure() = default;
  // Zero masses dropped, negative masses rejected. Atoms are kept as given.
  explicit AtomicMeasure(std::vector<Atom<M>> atoms);

  const std::vector<Atom<M>>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool tagged() const { return !atoms_.empty() && atoms_.front().tag.has_value(); }
  M total_mass() const;
  bool is_probability() const { return !atoms_.empty() && is_unit_mass(total_mass()); }
  bool is_canonical() const { return canonical_; }

  // Sorted, with atoms at equal (location, tag) merged.
  AtomicMeasure canonicalize() const;
  // Number of atoms removed by canonicalize().
  std::size_t merge_count() const { return canonicalize_count(); }

 private:
  std::size_t canonicalize_count() const;
  std::vector<Atom<M>> atoms_;
  bool canonical_ = false;
};

DyadicMeasure<double> to_float(const DyadicMeasure<Rational>& mu);
AtomicMeasure<double> to_float(const AtomicMeasure<Rational>& mu);

extern template class DyadicMeasure<Rational>;
extern template class DyadicMeasure<double>;
extern template class AtomicMeasure<Rational>;
extern template class AtomicMeasure<double>;

}  // namespace ssm
