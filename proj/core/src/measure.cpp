#include "ssm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssm {

namespace {

int coord_cmp(double a, double b) { return a < b ? -1 : (b < a ? 1 : 0); }
int coord_cmp(const Real& a, const Real& b) { return canonical_less(a, b) ? -1 : (canonical_less(b, a) ? 1 : 0); }

template <class M>
int atom_cmp(const Atom<M>& a, const Atom<M>& b) {
  if (int c = coord_cmp(a.location, b.location)) return c;
  if (a.tag.has_value() != b.tag.has_value()) return a.tag.has_value() ? 1 : -1;
  if (a.tag) return coord_cmp(*a.tag, *b.tag);
  return 0;
}

template <class M>
bool is_negative(const M& m) {
  if constexpr (Backend<M>::exact) return sgn(m) < 0;
  else return m < 0 || std::isnan(m);
}

template <class M>
bool is_zero_mass(const M& m) {
  if constexpr (Backend<M>::exact) return sgn(m) == 0;
  else return m == 0;
}

}  // namespace

template <class M>
DyadicMeasure<M>::DyadicMeasure(int resolution, std::vector<Cell> cells) : resolution_(resolution) {
  for (const auto& c : cells) require(!is_negative(c.mass), ErrorCode::argument, "negative mass");
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.index < b.index; });
  for (auto& c : cells) {
    if (!cells_.empty() && cells_.back().index == c.index) cells_.back().mass += c.mass;
    else cells_.push_back(std::move(c));
  }
  std::erase_if(cells_, [](const Cell& c) { return is_zero_mass(c.mass); });
}

template <class M>
DyadicMeasure<M> DyadicMeasure<M>::point(int resolution, std::int64_t index) {
  return DyadicMeasure(resolution, {{index, M(1)}});
}

template <class M>
DyadicMeasure<M> DyadicMeasure<M>::uniform(int resolution, std::int64_t first, std::int64_t count) {
  require(count > 0, ErrorCode::argument, "uniform measure on no cells");
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(count));
  M mass;
  if constexpr (Backend<M>::exact) mass = Rational(1, static_cast<unsigned long>(count));
  else mass = 1.0 / static_cast<double>(count);
  for (std::int64_t k = 0; k < count; ++k) cells.push_back({first + k, mass});
  return DyadicMeasure(Trusted{}, resolution, std::move(cells));
}

template <class M>
M DyadicMeasure<M>::total_mass() const {
  M total(0);
  for (const auto& c : cells_) total += c.mass;
  return total;
}

template <class M>
M DyadicMeasure<M>::mass_at(std::int64_t index) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), index,
                             [](const Cell& c, std::int64_t k) { return c.index < k; });
  return it != cells_.end() && it->index == index ? it->mass : M(0);
}

template <class M>
DyadicMeasure<M> DyadicMeasure<M>::coarsen(int level) const {
  require(level <= resolution_, ErrorCode::resolution_exceeded,
          "level " + std::to_string(level) + " exceeds resolution " + std::to_string(resolution_));
  if (level == resolution_) return *this;
  int s = resolution_ - level;
  std::vector<Cell> out;
  for (const auto& c : cells_) {
    std::int64_t k = s >= 63 ? (c.index < 0 ? -1 : 0) : (c.index >> s);
    if (!out.empty() && out.back().index == k) out.back().mass += c.mass;
    else out.push_back({k, c.mass});
  }
  return DyadicMeasure(Trusted{}, level, std::move(out));
}

template <class M>
AtomicMeasure<M>::AtomicMeasure(std::vector<Atom<M>> atoms) {
  bool tagged = !atoms.empty() && atoms.front().tag.has_value();
  for (auto& a : atoms) {
    require(!is_negative(a.mass), ErrorCode::argument, "negative mass");
    require(a.tag.has_value() == tagged, ErrorCode::argument, "atoms must be all tagged or all untagged");
    if (!is_zero_mass(a.mass)) atoms_.push_back(std::move(a));
  }
}

template <class M>
M AtomicMeasure<M>::total_mass() const {
  M total(0);
  for (const auto& a : atoms_) total += a.mass;
  return total;
}

template <class M>
AtomicMeasure<M> AtomicMeasure<M>::canonicalize() const {
  if (canonical_) return *this;
  std::vector<std::size_t> order(atoms_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return atom_cmp(atoms_[i], atoms_[j]) < 0; });
  AtomicMeasure out;
  for (std::size_t i : order) {
    const auto& a = atoms_[i];
    if (!out.atoms_.empty() && atom_cmp(out.atoms_.back(), a) == 0) out.atoms_.back().mass += a.mass;
    else out.atoms_.push_back(a);
  }
  out.canonical_ = true;
  return out;
}

template <class M>
std::size_t AtomicMeasure<M>::canonicalize_count() const {
  return atoms_.size() - canonicalize().atoms_.size();
}

DyadicMeasure<double> to_float(const DyadicMeasure<Rational>& mu) {
  std::vector<DyadicCell<double>> cells;
  cells.reserve(mu.size());
  for (const auto& c : mu.cells()) cells.push_back({c.index, c.mass.get_d()});
  return DyadicMeasureBuilder<double>::from_sorted(mu.resolution(), std::move(cells));
}

AtomicMeasure<double> to_float(const AtomicMeasure<Rational>& mu) {
  std::vector<Atom<double>> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) {
    std::optional<double> tag;
    if (a.tag) tag = a.tag->to_double();
    atoms.push_back({a.location.to_double(), a.mass.get_d(), tag});
  }
  return AtomicMeasure<double>(std::move(atoms));
}

template class DyadicMeasure<Rational>;
template class DyadicMeasure<double>;
template class AtomicMeasure<Rational>;
template class AtomicMeasure<double>;

}  // namespace ssm
