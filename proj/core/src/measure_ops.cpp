#include "ssm/measure_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

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

template <class M>
void require_probability(const M& total, const char* what) {
  require(is_unit_mass(total), ErrorCode::normalization_required, std::string(what) + ": measure is not a probability");
}

template <class M>
void require_level(const DyadicMeasure<M>& mu, int m) {
  require(m <= mu.resolution(), ErrorCode::resolution_exceeded,
          "level " + std::to_string(m) + " exceeds resolution " + std::to_string(mu.resolution()));
}

int coord_cmp(double a, double b) { return a < b ? -1 : (b < a ? 1 : 0); }
int coord_cmp(const Real& a, const Real& b) { return canonical_less(a, b) ? -1 : (canonical_less(b, a) ? 1 : 0); }

template <class M>
int atom_cmp(const Atom<M>& a, const Atom<M>& b) {
  if (int c = coord_cmp(a.location, b.location)) return c;
  if (a.tag.has_value() != b.tag.has_value()) return a.tag.has_value() ? 1 : -1;
  if (a.tag) return coord_cmp(*a.tag, *b.tag);
  return 0;
}

std::int64_t cell_of(const Real& x, int level) { return to_int64(x.floor_scaled(level)); }
std::int64_t cell_of(double x, int level) {
  double v = std::floor(std::ldexp(x, level));
  require(std::abs(v) < 9.2e18, ErrorCode::argument, "cell index out of range");
  return static_cast<std::int64_t>(v);
}

template <class M>
CoordOf<M> grid_point(std::int64_t k, int level) {
  if constexpr (Backend<M>::exact) return Real(dyadic(from_int64(k), level));
  else return std::ldexp(static_cast<double>(k), -level);
}

// Atoms grouped by (cell at `level`, tag); returns group id per atom in an
// order sorted by (cell, tag), plus cells.
template <class M>
struct AtomCells {
  std::vector<std::size_t> order;      // atoms sorted by (cell, tag)
  std::vector<std::int64_t> cell;      // per atom
};

template <class M>
AtomCells<M> atom_cells(const AtomicMeasure<M>& mu, int level) {
  AtomCells<M> out;
  const auto& atoms = mu.atoms();
  out.cell.resize(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) out.cell[i] = cell_of(atoms[i].location, level);
  out.order.resize(atoms.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t i, std::size_t j) {
    if (out.cell[i] != out.cell[j]) return out.cell[i] < out.cell[j];
    if (atoms[i].tag && atoms[j].tag) return coord_cmp(*atoms[i].tag, *atoms[j].tag) < 0;
    return false;
  });
  return out;
}

template <class M>
bool same_group(const AtomicMeasure<M>& mu, const AtomCells<M>& ac, std::size_t i, std::size_t j) {
  if (ac.cell[i] != ac.cell[j]) return false;
  const auto& a = mu.atoms()[i];
  const auto& b = mu.atoms()[j];
  if (a.tag && b.tag) return coord_cmp(*a.tag, *b.tag) == 0;
  return true;
}

// Masses of the (cell, tag) groups in sorted order.
template <class M>
std::vector<M> group_masses(const AtomicMeasure<M>& mu, int level) {
  auto ac = atom_cells(mu, level);
  std::vector<M> out;
  for (std::size_t r = 0; r < ac.order.size(); ++r) {
    std::size_t i = ac.order[r];
    if (r > 0 && same_group(mu, ac, ac.order[r - 1], i)) out.back() += mu.atoms()[i].mass;
    else out.push_back(mu.atoms()[i].mass);
  }
  return out;
}

}  // namespace

template <class M>
double entropy(const DyadicMeasure<M>& mu, int m) {
  require_probability(mu.total_mass(), "entropy");
  require_level(mu, m);
  double h = 0;
  auto coarse = mu.coarsen(m);
  for (const auto& c : coarse.cells()) h += plogp(as_double(c.mass));
  return h;
}

template <class M>
double normalized_entropy(const DyadicMeasure<M>& mu, int m) {
  require(m > 0, ErrorCode::argument, "normalized entropy needs m > 0");
  return entropy(mu, m) / m;
}

template <class M>
double conditional_entropy(const DyadicMeasure<M>& mu, int fine, int coarse) {
  require(coarse <= fine, ErrorCode::argument, "conditional entropy needs coarse <= fine");
  require_probability(mu.total_mass(), "conditional_entropy");
  require_level(mu, fine);
  auto nu = mu.coarsen(fine);
  const auto& cells = nu.cells();
  int s = fine - coarse;
  double h = 0;
  for (std::size_t a = 0; a < cells.size();) {
    std::int64_t parent = shift_down(cells[a].index, s);
    std::size_t b = a;
    M total(0);
    while (b < cells.size() && shift_down(cells[b].index, s) == parent) total += cells[b++].mass;
    double inner = 0;
    for (std::size_t j = a; j < b; ++j) {
      if constexpr (Backend<M>::exact) inner += plogp(Rational(cells[j].mass / total).get_d());
      else inner += plogp(cells[j].mass / total);
    }
    h += as_double(total) * inner;
    a = b;
  }
  return h;
}

LogForm exact_entropy(const DyadicMeasure<Rational>& mu, int m) {
  require_probability(mu.total_mass(), "entropy");
  require_level(mu, m);
  LogForm h;
  auto coarse = mu.coarsen(m);
  for (const auto& c : coarse.cells()) h.add_plogp(c.mass);
  return h;
}

LogForm exact_conditional_entropy(const DyadicMeasure<Rational>& mu, int fine, int coarse) {
  require(coarse <= fine, ErrorCode::argument, "conditional entropy needs coarse <= fine");
  require_probability(mu.total_mass(), "conditional_entropy");
  require_level(mu, fine);
  auto nu = mu.coarsen(fine);
  const auto& cells = nu.cells();
  int s = fine - coarse;
  LogForm h;
  for (std::size_t a = 0; a < cells.size();) {
    std::int64_t parent = shift_down(cells[a].index, s);
    std::size_t b = a;
    Rational total(0);
    while (b < cells.size() && shift_down(cells[b].index, s) == parent) total += cells[b++].mass;
    // mu(F) * H(mu_F) = -sum_E mu(E) log(mu(E)/mu(F))
    for (std::size_t j = a; j < b; ++j) h.add_log(Rational(cells[j].mass / total), Rational(-cells[j].mass));
    a = b;
  }
  return h;
}

template <class M>
double entropy(const AtomicMeasure<M>& mu, int m) {
  require_probability(mu.total_mass(), "entropy");
  double h = 0;
  for (const auto& p : group_masses(mu, m)) h += plogp(as_double(p));
  return h;
}

LogForm exact_entropy(const AtomicMeasure<Rational>& mu, int m) {
  require_probability(mu.total_mass(), "entropy");
  LogForm h;
  for (const auto& p : group_masses(mu, m)) h.add_plogp(p);
  return h;
}

template <class M>
double conditional_entropy(const AtomicMeasure<M>& mu, int fine, int coarse) {
  require(coarse <= fine, ErrorCode::argument, "conditional entropy needs coarse <= fine");
  require_probability(mu.total_mass(), "conditional_entropy");
  auto ac = atom_cells(mu, fine);
  const auto& atoms = mu.atoms();
  int s = fine - coarse;
  // Fine groups are contiguous in (cell, tag) order; coarse groups are unions
  // of fine groups with equal parent cell and tag, which need not be contiguous
  // when tags are present, so collect them explicitly.
  struct Group {
    std::int64_t parent;
    std::size_t rep;  // representative atom for the tag
    M mass;
  };
  std::vector<Group> fineGroups;
  for (std::size_t r = 0; r < ac.order.size(); ++r) {
    std::size_t i = ac.order[r];
    if (r > 0 && same_group(mu, ac, ac.order[r - 1], i)) fineGroups.back().mass += atoms[i].mass;
    else fineGroups.push_back({shift_down(ac.cell[i], s), i, atoms[i].mass});
  }
  std::vector<std::size_t> idx(fineGroups.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto tag_cmp = [&](std::size_t a, std::size_t b) {
    const auto& ta = atoms[fineGroups[a].rep].tag;
    const auto& tb = atoms[fineGroups[b].rep].tag;
    return ta && tb ? coord_cmp(*ta, *tb) : 0;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (fineGroups[a].parent != fineGroups[b].parent) return fineGroups[a].parent < fineGroups[b].parent;
    return tag_cmp(a, b) < 0;
  });
  double h = 0;
  for (std::size_t a = 0; a < idx.size();) {
    std::size_t b = a;
    M total(0);
    while (b < idx.size() && fineGroups[idx[b]].parent == fineGroups[idx[a]].parent && tag_cmp(idx[a], idx[b]) == 0)
      total += fineGroups[idx[b++]].mass;
    double inner = 0;
    for (std::size_t j = a; j < b; ++j) {
      if constexpr (Backend<M>::exact) inner += plogp(Rational(fineGroups[idx[j]].mass / total).get_d());
      else inner += plogp(fineGroups[idx[j]].mass / total);
    }
    h += as_double(total) * inner;
    a = b;
  }
  return h;
}

template <class M>
double point_entropy(const AtomicMeasure<M>& mu) {
  require_probability(mu.total_mass(), "point_entropy");
  double h = 0;
  auto canon = mu.canonicalize();
  for (const auto& a : canon.atoms()) h += plogp(as_double(a.mass));
  return h;
}

template <class M>
DyadicMeasure<M> convolve(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu) {
  require(mu.resolution() == nu.resolution(), ErrorCode::argument, "convolution of measures with different resolutions");
  if (mu.empty() || nu.empty()) return DyadicMeasure<M>(mu.resolution(), {});
  const auto& a = mu.cells();
  const auto& b = nu.cells();
  std::int64_t lo = a.front().index + b.front().index;
  std::int64_t hi = a.back().index + b.back().index;
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  std::uint64_t work = static_cast<std::uint64_t>(a.size()) * b.size();
  std::vector<DyadicCell<M>> out;
  if constexpr (Backend<M>::exact) {
    if (span <= 8 * work + 64) {
      auto common = [](const std::vector<DyadicCell<M>>& cells) {
        Integer l = 1;
        for (const auto& c : cells) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.mass.get_den_mpz_t());
        return l;
      };
      Integer la = common(a), lb = common(b);
      if (mpz_sizeinbase(la.get_mpz_t(), 2) + mpz_sizeinbase(lb.get_mpz_t(), 2) <= 2048) {
        auto scaled = [](const std::vector<DyadicCell<M>>& cells, const Integer& l) {
          std::vector<Integer> out;
          out.reserve(cells.size());
          for (const auto& c : cells) out.push_back(c.mass.get_num() * (l / c.mass.get_den()));
          return out;
        };
        auto na = scaled(a, la), nb = scaled(b, lb);
        std::vector<Integer> acc(span, Integer(0));
        for (std::size_t i = 0; i < a.size(); ++i)
          for (std::size_t j = 0; j < b.size(); ++j)
            mpz_addmul(acc[static_cast<std::size_t>(a[i].index + b[j].index - lo)].get_mpz_t(), na[i].get_mpz_t(),
                       nb[j].get_mpz_t());
        Integer den = la * lb;
        for (std::uint64_t k = 0; k < span; ++k)
          if (sgn(acc[k]) != 0) out.push_back({lo + static_cast<std::int64_t>(k), ratio(acc[k], den)});
        return DyadicMeasureBuilder<M>::from_sorted(mu.resolution(), std::move(out));
      }
    }
  }
  if (span <= 8 * work + 64) {
    std::vector<M> acc(span, M(0));
    for (const auto& x : a)
      for (const auto& y : b) acc[static_cast<std::size_t>(x.index + y.index - lo)] += x.mass * y.mass;
    for (std::uint64_t k = 0; k < span; ++k) {
      bool nonzero;
      if constexpr (Backend<M>::exact) nonzero = sgn(acc[k]) != 0;
      else nonzero = acc[k] != 0;
      if (nonzero) out.push_back({lo + static_cast<std::int64_t>(k), std::move(acc[k])});
    }
    return DyadicMeasureBuilder<M>::from_sorted(mu.resolution(), std::move(out));
  }
  std::vector<DyadicCell<M>> prods;
  prods.reserve(work);
  for (const auto& x : a)
    for (const auto& y : b) prods.push_back({x.index + y.index, x.mass * y.mass});
  return DyadicMeasure<M>(mu.resolution(), std::move(prods));
}

template <class M>
DyadicMeasure<M> convolution_power(const DyadicMeasure<M>& mu, int k) {
  require(k >= 0, ErrorCode::argument, "negative convolution power");
  DyadicMeasure<M> result = DyadicMeasure<M>::point(mu.resolution(), 0);
  DyadicMeasure<M> base = mu;
  bool first = true;
  while (k) {
    if (k & 1) {
      result = first ? base : convolve(result, base);
      first = false;
    }
    k >>= 1;
    if (k) base = convolve(base, base);
  }
  return result;
}

template <class M>
AtomicMeasure<M> convolve(const AtomicMeasure<M>& mu, const AtomicMeasure<M>& nu) {
  require(!mu.tagged() && !nu.tagged(), ErrorCode::unsupported, "convolution of tagged atomic measures");
  std::vector<Atom<M>> out;
  out.reserve(mu.size() * nu.size());
  for (const auto& x : mu.atoms())
    for (const auto& y : nu.atoms()) out.push_back({x.location + y.location, M(x.mass * y.mass), std::nullopt});
  return AtomicMeasure<M>(std::move(out)).canonicalize();
}

template <class M>
DyadicMeasure<M> convolve(const AtomicMeasure<M>& mu, const DyadicMeasure<M>& nu) {
  return convolve(rasterize(mu, nu.resolution()), nu);
}

template <class M>
DyadicMeasure<M> mix(const M& alpha, const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu) {
  require(mu.resolution() == nu.resolution(), ErrorCode::argument, "mixture of measures with different resolutions");
  require(!(alpha < M(0)) && !(M(1) < alpha), ErrorCode::argument, "mixture weight outside [0,1]");
  std::vector<DyadicCell<M>> cells;
  M beta = M(1) - alpha;
  for (const auto& c : mu.cells()) cells.push_back({c.index, M(alpha * c.mass)});
  for (const auto& c : nu.cells()) cells.push_back({c.index, M(beta * c.mass)});
  return DyadicMeasure<M>(mu.resolution(), std::move(cells));
}

template <class M>
void for_each_component(const DyadicMeasure<M>& mu, int i,
                        const std::function<void(std::int64_t, std::span<const DyadicCell<M>>)>& fn) {
  require(i <= mu.resolution(), ErrorCode::argument, "component level exceeds resolution");
  const auto& cells = mu.cells();
  int s = mu.resolution() - i;
  for (std::size_t a = 0; a < cells.size();) {
    std::int64_t parent = shift_down(cells[a].index, s);
    std::size_t b = a;
    while (b < cells.size() && shift_down(cells[b].index, s) == parent) ++b;
    fn(parent, std::span<const DyadicCell<M>>(cells.data() + a, b - a));
    a = b;
  }
}

template <class M>
std::vector<ComponentRecord<M>> components(const DyadicMeasure<M>& mu, int i, int m) {
  require(i >= 0 && m >= 0 && i + m <= mu.resolution(), ErrorCode::argument,
          "component window exceeds resolution");
  int n = mu.resolution();
  std::vector<ComponentRecord<M>> out;
  for_each_component<M>(mu, i, [&](std::int64_t cell, std::span<const DyadicCell<M>> cs) {
    M w(0);
    for (const auto& c : cs) w += c.mass;
    std::vector<DyadicCell<M>> raw, local;
    raw.reserve(cs.size());
    std::int64_t base = cell * (std::int64_t{1} << (n - i));
    for (const auto& c : cs) {
      M q = c.mass / w;
      raw.push_back({c.index, q});
      local.push_back({c.index - base, q});
    }
    auto rescaled = DyadicMeasureBuilder<M>::from_sorted(n - i, std::move(local)).coarsen(m);
    out.push_back({i, cell, w, DyadicMeasureBuilder<M>::from_sorted(n, std::move(raw)), std::move(rescaled)});
  });
  return out;
}

template <class M>
std::vector<std::pair<M, double>> component_entropies(const DyadicMeasure<M>& mu, int i, int m) {
  require(i >= 0 && m >= 0 && i + m <= mu.resolution(), ErrorCode::argument,
          "component window exceeds resolution");
  int s = mu.resolution() - i - m;
  std::vector<std::pair<M, double>> out;
  for_each_component<M>(mu, i, [&](std::int64_t, std::span<const DyadicCell<M>> cs) {
    M w(0);
    for (const auto& c : cs) w += c.mass;
    double h = 0;
    double wd = as_double(w);
    for (std::size_t a = 0; a < cs.size();) {
      std::int64_t k = shift_down(cs[a].index, s);
      M q(0);
      while (a < cs.size() && shift_down(cs[a].index, s) == k) q += cs[a++].mass;
      if constexpr (Backend<M>::exact) h += plogp(Rational(q / w).get_d());
      else h += plogp(q / wd);
    }
    out.emplace_back(w, h);
  });
  return out;
}

template <class M>
Moments<M> moments(const DyadicMeasure<M>& mu) {
  require(!mu.empty(), ErrorCode::argument, "moments of an empty measure");
  M total = mu.total_mass();
  std::vector<M> xs;
  xs.reserve(mu.size());
  for (const auto& c : mu.cells()) {
    if constexpr (Backend<M>::exact) xs.push_back(dyadic(from_int64(c.index), mu.resolution()));
    else xs.push_back(std::ldexp(static_cast<double>(c.index), -mu.resolution()));
  }
  Moments<M> r{M(0), M(0), M(0), M(0)};
  for (std::size_t j = 0; j < xs.size(); ++j) r.mean += mu.cells()[j].mass * xs[j];
  r.mean /= total;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const M& p = mu.cells()[j].mass;
    M d = xs[j] - r.mean;
    M ax = xs[j] < M(0) ? M(-xs[j]) : xs[j];
    M ad = d < M(0) ? M(-d) : d;
    r.variance += p * d * d;
    r.third_abs += p * ax * ax * ax;
    r.central_third_abs += p * ad * ad * ad;
  }
  r.variance /= total;
  r.third_abs /= total;
  r.central_third_abs /= total;
  return r;
}

Moments<double> moments(const AtomicMeasure<double>& mu) {
  require(mu.size() > 0, ErrorCode::argument, "moments of an empty measure");
  double total = mu.total_mass(), mean = 0;
  for (const auto& a : mu.atoms()) mean += a.mass * a.location;
  mean /= total;
  Moments<double> r{mean, 0, 0, 0};
  for (const auto& a : mu.atoms()) {
    double d = a.location - mean;
    r.variance += a.mass * d * d;
    r.third_abs += a.mass * std::pow(std::abs(a.location), 3);
    r.central_third_abs += a.mass * std::pow(std::abs(d), 3);
  }
  r.variance /= total;
  r.third_abs /= total;
  r.central_third_abs /= total;
  return r;
}

template <class M>
AtomicMeasure<M> discretize(const DyadicMeasure<M>& mu, int m) {
  std::vector<Atom<M>> atoms;
  if (m <= mu.resolution()) {
    auto coarse = mu.coarsen(m);
    for (const auto& c : coarse.cells()) atoms.push_back({grid_point<M>(c.index, m), c.mass, std::nullopt});
  } else {
    for (const auto& c : mu.cells())
      atoms.push_back({grid_point<M>(c.index, mu.resolution()), c.mass, std::nullopt});
  }
  return AtomicMeasure<M>(std::move(atoms)).canonicalize();
}

template <class M>
AtomicMeasure<M> discretize(const AtomicMeasure<M>& mu, int m) {
  std::vector<Atom<M>> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({grid_point<M>(cell_of(a.location, m), m), a.mass, a.tag});
  return AtomicMeasure<M>(std::move(atoms)).canonicalize();
}

template <class M>
DyadicMeasure<M> rasterize(const AtomicMeasure<M>& mu, int n) {
  std::vector<DyadicCell<M>> cells;
  cells.reserve(mu.size());
  for (const auto& a : mu.atoms()) cells.push_back({cell_of(a.location, n), a.mass});
  return DyadicMeasure<M>(n, std::move(cells));
}

template <class M>
double tv_distance(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu) {
  require(mu.resolution() == nu.resolution(), ErrorCode::argument, "tv distance of measures with different resolutions");
  const auto& a = mu.cells();
  const auto& b = nu.cells();
  M sum(0);
  auto absd = [](const M& x) { return x < M(0) ? M(-x) : x; };
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) sum += a[i++].mass;
    else if (i == a.size() || b[j].index < a[i].index) sum += b[j++].mass;
    else sum += absd(M(a[i++].mass - b[j++].mass));
  }
  return as_double(sum) / 2;
}

template <class M>
double tv_distance(const AtomicMeasure<M>& mu, const AtomicMeasure<M>& nu) {
  auto x = mu.canonicalize();
  auto y = nu.canonicalize();
  const auto& a = x.atoms();
  const auto& b = y.atoms();
  M sum(0);
  auto absd = [](const M& v) { return v < M(0) ? M(-v) : v; };
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? 1 : (j == b.size() ? -1 : atom_cmp(a[i], b[j]));
    if (c < 0) sum += a[i++].mass;
    else if (c > 0) sum += b[j++].mass;
    else sum += absd(M(a[i++].mass - b[j++].mass));
  }
  return as_double(sum) / 2;
}

template <class M>
DyadicMeasure<M> restrict_and_normalize(const DyadicMeasure<M>& mu, const CellRange& range) {
  require_level(mu, range.level);
  int s = mu.resolution() - range.level;
  std::vector<DyadicCell<M>> cells;
  M total(0);
  for (const auto& c : mu.cells()) {
    std::int64_t k = shift_down(c.index, s);
    if (k >= range.first && k <= range.last) {
      cells.push_back(c);
      total += c.mass;
    }
  }
  require(!cells.empty(), ErrorCode::empty_restriction, "restriction to a zero-mass range");
  for (auto& c : cells) c.mass /= total;
  return DyadicMeasureBuilder<M>::from_sorted(mu.resolution(), std::move(cells));
}

template <class M>
DyadicMeasure<M> shift(const DyadicMeasure<M>& mu, std::int64_t by) {
  auto cells = mu.cells();
  for (auto& c : cells) c.index += by;
  return DyadicMeasureBuilder<M>::from_sorted(mu.resolution(), std::move(cells));
}

#define SSM_INSTANTIATE(M)                                                                                   \
  template double entropy(const DyadicMeasure<M>&, int);                                                      \
  template double normalized_entropy(const DyadicMeasure<M>&, int);                                           \
  template double conditional_entropy(const DyadicMeasure<M>&, int, int);                                     \
  template double entropy(const AtomicMeasure<M>&, int);                                                      \
  template double conditional_entropy(const AtomicMeasure<M>&, int, int);                                     \
  template double point_entropy(const AtomicMeasure<M>&);                                                     \
  template DyadicMeasure<M> convolve(const DyadicMeasure<M>&, const DyadicMeasure<M>&);                       \
  template DyadicMeasure<M> convolution_power(const DyadicMeasure<M>&, int);                                  \
  template AtomicMeasure<M> convolve(const AtomicMeasure<M>&, const AtomicMeasure<M>&);                       \
  template DyadicMeasure<M> convolve(const AtomicMeasure<M>&, const DyadicMeasure<M>&);                       \
  template DyadicMeasure<M> mix(const M&, const DyadicMeasure<M>&, const DyadicMeasure<M>&);                  \
  template void for_each_component(const DyadicMeasure<M>&, int,                                              \
                                   const std::function<void(std::int64_t, std::span<const DyadicCell<M>>)>&); \
  template std::vector<ComponentRecord<M>> components(const DyadicMeasure<M>&, int, int);                     \
  template std::vector<std::pair<M, double>> component_entropies(const DyadicMeasure<M>&, int, int);          \
  template Moments<M> moments(const DyadicMeasure<M>&);                                                       \
  template AtomicMeasure<M> discretize(const DyadicMeasure<M>&, int);                                         \
  template AtomicMeasure<M> discretize(const AtomicMeasure<M>&, int);                                         \
  template DyadicMeasure<M> rasterize(const AtomicMeasure<M>&, int);                                          \
  template double tv_distance(const DyadicMeasure<M>&, const DyadicMeasure<M>&);                              \
  template double tv_distance(const AtomicMeasure<M>&, const AtomicMeasure<M>&);                              \
  template DyadicMeasure<M> restrict_and_normalize(const DyadicMeasure<M>&, const CellRange&);                \
  template DyadicMeasure<M> shift(const DyadicMeasure<M>&, std::int64_t);

SSM_INSTANTIATE(Rational)
SSM_INSTANTIATE(double)

}  // namespace ssm
