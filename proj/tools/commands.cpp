#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ssm/inverse.hpp"
#include "ssm/measure_ops.hpp"
#include "ssm/parallel.hpp"
#include "ssm/serialization.hpp"

namespace ssm::cli {

namespace {

json real_cell(const Real& x) { return x.to_string(); }

// Parameters print as rationals or as their serialized field element.
json param_cell(const Real& x) { return x.is_rational() ? x.to_string() : real_to_json(x); }

json opt_double(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

double mean_log_ratio(const Ifs<Rational>& ifs) {
  double s = 0;
  for (std::size_t i = 0; i < ifs.size(); ++i)
    s += to_double(ifs.probs()[i]) * -std::log2(std::fabs(ifs.map(i).r.to_double()));
  return s;
}

template <class M>
void stats_table(RunReport& rep, const std::string& name, const ComponentStats& s) {
  auto& t = rep.table(name, {"level", "weight_sum", "mean_Hm", "uniform_frac", "atomic_frac", "mean_var"});
  for (const auto& l : s.levels) t.add({l.level, l.weight_sum, l.mean_hm, l.uniform_frac, l.atomic_frac, l.mean_var});
}

std::vector<DyadicMeasure<Rational>> measures_or(const ScenarioConfig& cfg, std::vector<json> defaults) {
  const auto& specs = cfg.measures.empty() ? defaults : cfg.measures;
  std::vector<DyadicMeasure<Rational>> out;
  for (const auto& s : specs) out.push_back(measure_from_spec(s, cfg));
  return out;
}

// ---- entropy ---------------------------------------------------------------

template <class M>
void entropy_rows(const Ifs<Rational>& exact_ifs, const ScenarioConfig& cfg, RunReport& rep) {
  bool uniform = exact_ifs.uniform_ratio();
  double L = mean_log_ratio(exact_ifs);
  require(L > 0, ErrorCode::argument, "entropy series needs a contracting (on average) IFS");
  auto& t = rep.table("entropy", {"n", "nprime", "cond_entropy_rate", "H_rate"});
  auto ifs = [&] {
    if constexpr (Backend<M>::exact) return exact_ifs;
    else return to_float(exact_ifs);
  }();
  for (int n = cfg.n.first; n <= cfg.n.second; ++n) {
    int np = std::max(1, static_cast<int>(std::lround(n * L)));
    auto nu = uniform ? generation_measure(ifs, n, cfg.budget_atoms) : tagged_generation_measure(ifs, n, cfg.budget_atoms);
    double cond = cfg.q == 1 ? 0.0 : conditional_entropy(nu, cfg.q * np, np) / np;
    t.add({n, np, cond, entropy(nu, np) / np});
  }
  rep.summary["partition"] = uniform ? "D" : "D~ (ratio-tagged)";
  rep.summary["mean_log2_inverse_ratio"] = L;
  if (!exact_ifs.is_contracting()) {
    rep.summary["raster_H_rate"] = "unavailable: not contracting";
    return;
  }
  auto unit = normalize_to_unit(exact_ifs).ifs;
  if constexpr (Backend<M>::exact) {
    auto raster = rasterize_self_similar(unit, cfg.resolution, 2, cfg.budget_atoms);
    rep.summary["raster_H_rate"] = normalized_entropy(raster.measure, cfg.resolution);
    rep.summary["raster_straddle_mass"] = raster.straddle_mass;
  } else {
    auto raster = rasterize_self_similar(to_float(unit), cfg.resolution, 2, cfg.budget_atoms);
    rep.summary["raster_H_rate"] = normalized_entropy(raster.measure, cfg.resolution);
    rep.summary["raster_straddle_mass"] = raster.straddle_mass;
  }
  rep.summary["resolution"] = cfg.resolution;
}

RunReport cmd_entropy(const ScenarioConfig& cfg, RunReport rep) {
  auto ifs = cfg.make_ifs();
  if (cfg.exact()) entropy_rows<Rational>(ifs, cfg, rep);
  else entropy_rows<double>(ifs, cfg, rep);
  return rep;
}

// ---- overlaps --------------------------------------------------------------

std::vector<Real> generators(const Ifs<Rational>& ifs) {
  std::vector<Real> out;
  for (const auto& f : ifs.maps())
    for (const Real* x : {&f.r, &f.a}) {
      if (x->is_rational() && (x->is_zero() || abs(x->as_rational()) == 1)) continue;
      if (std::none_of(out.begin(), out.end(), [&](const Real& y) { return y == *x; })) out.push_back(*x);
    }
  if (out.empty()) out.push_back(Real(1));
  return out;
}

RunReport cmd_overlaps(const ScenarioConfig& cfg, RunReport rep) {
  auto ifs = cfg.make_ifs();
  auto gens = generators(ifs);
  auto& t = rep.table("overlaps", {"n", "delta", "log_rate", "exact_overlap", "delta_exact", "liouville_floor"});
  for (int n = cfg.n.first; n <= cfg.n.second; ++n) {
    json floor_cell = nullptr;
    try {
      floor_cell = liouville_floor(gens, n, Integer(2 * n)).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::unsupported) throw;
    }
    if (cfg.exact()) {
      auto r = delta_n(ifs, n, cfg.budget_atoms);
      json d = r.delta ? json(r.delta->to_double()) : json(nullptr);
      json dx = r.delta ? real_cell(*r.delta) : json(nullptr);
      t.add({n, d, opt_double(r.log_rate), r.exact_overlap, dx, floor_cell});
    } else {
      auto r = delta_n(to_float(ifs), n, cfg.budget_atoms);
      json d = r.delta ? json(*r.delta) : json(nullptr);
      t.add({n, d, opt_double(r.log_rate), r.exact_overlap, nullptr, floor_cell});
    }
  }
  return rep;
}

// ---- inverse, saturate, kv -------------------------------------------------

template <class M>
void inverse_impl(const DyadicMeasure<M>& mu, const DyadicMeasure<M>& nu, const ScenarioConfig& cfg, RunReport& rep) {
  auto [first, last] = cfg.level_range();
  double eps = cfg.epsilon_d();
  auto a = component_stats(mu, first, last, cfg.m, eps);
  auto b = component_stats(nu, first, last, cfg.m, eps);
  int n = cfg.resolution;
  double gap = normalized_entropy(convolve(mu, nu), n) - normalized_entropy(mu, n);
  auto d = find_decomposition(a, b, eps, gap);
  stats_table<M>(rep, "component_stats_mu", a);
  stats_table<M>(rep, "component_stats_nu", b);
  auto& t = rep.table("decomposition", {"level", "assignment"});
  for (std::size_t i = 0; i < d.assignment.size(); ++i)
    t.add({d.first + static_cast<int>(i), std::string(1, static_cast<char>(d.assignment[i]))});
  rep.summary["gap"] = gap;
  rep.summary["coverage"] = d.coverage;
  rep.summary["I_size"] = d.I.size();
  rep.summary["J_size"] = d.J.size();
  rep.summary["levels"] = format_range({first, last});
}

RunReport cmd_inverse(const ScenarioConfig& cfg, RunReport rep) {
  auto ms = measures_or(cfg, {"lebesgue", "cantor"});
  require(ms.size() == 2, ErrorCode::config, "inverse needs exactly two measures");
  if (cfg.exact()) inverse_impl(ms[0], ms[1], cfg, rep);
  else inverse_impl(to_float(ms[0]), to_float(ms[1]), cfg, rep);
  return rep;
}

template <class M>
void saturate_impl(const DyadicMeasure<M>& mu, const ScenarioConfig& cfg, RunReport& rep) {
  auto [first, last] = cfg.level_range();
  auto s = saturation_check(mu, std::max(1, cfg.k), cfg.m, cfg.epsilon_d(), first, last);
  auto& t = rep.table("saturation", {"level", "nu_uniform_frac", "mu_atomic_frac", "mu_mean_var", "assignment"});
  for (const auto& l : s.levels)
    t.add({l.level, l.nu_uniform_frac, l.mu_atomic_frac, l.mu_mean_var, std::string(1, static_cast<char>(l.assignment))});
  rep.summary["coverage"] = s.coverage;
  rep.summary["k"] = s.k;
}

RunReport cmd_saturate(const ScenarioConfig& cfg, RunReport rep) {
  auto ms = measures_or(cfg, {"cantor"});
  require(ms.size() == 1, ErrorCode::config, "saturate needs exactly one measure");
  if (cfg.exact()) saturate_impl(ms[0], cfg, rep);
  else saturate_impl(to_float(ms[0]), cfg, rep);
  return rep;
}

RunReport cmd_kv(const ScenarioConfig& cfg, RunReport rep) {
  auto ms = measures_or(cfg, {"point:0", "coin"});
  require(ms.size() == 2, ErrorCode::config, "kv needs exactly two measures");
  int kmax = std::max(1, cfg.k);
  KvSeries s = cfg.exact() ? kv_series_exact(ms[0], ms[1], kmax)
                           : kv_series(to_float(ms[0]), to_float(ms[1]), kmax, cfg.resolution);
  auto& t = rep.table("kv_series", {"k", "H", "delta"});
  for (std::size_t k = 0; k < s.H.size(); ++k) t.add({k, s.H[k], k < s.delta.size() ? json(s.delta[k]) : json(nullptr)});
  rep.summary["monotone"] = s.monotone;
  rep.summary["max_increase"] = s.max_increase;
  rep.summary["bound_residual"] = s.bound_residual;
  rep.summary["variant"] = cfg.exact() ? "discrete" : "scale-n";
  return rep;
}

// ---- cover, scan, liouville ------------------------------------------------

void cover_tables(const ExceptionalCover& ec, RunReport& rep) {
  auto& t = rep.table("cover", {"lo", "hi", "lo_float", "hi_float", "length"});
  for (const auto& u : ec.merged) t.add({to_string(u.lo), to_string(u.hi), to_double(u.lo), to_double(u.hi), to_double(u.hi - u.lo)});
  rep.summary["epsilon"] = to_string(ec.epsilon);
  rep.summary["cover_n"] = ec.n;
  rep.summary["pairs"] = ec.pairs;
  rep.summary["degenerate_pairs"] = ec.degenerate_pairs;
  rep.summary["count"] = ec.count;
  rep.summary["merged"] = ec.merged.size();
  rep.summary["max_length"] = ec.max_length;
  rep.summary["boxdim"] = ec.boxdim;
  rep.summary["certified"] = ec.certified;
  rep.summary["assumed"] = ec.assumed;
}

RunReport cmd_cover(const ScenarioConfig& cfg, RunReport rep) {
  auto fam = cfg.make_family();
  int n = cfg.n.second;
  Rational c = parse_rational(cfg.c);
  if (!cfg.assume) {
    auto tr = check_transversality(fam, n, cfg.k, c, cfg.budget_atoms);
    rep.summary["transversality"] = std::string(to_string(tr.verdict));
    rep.summary["transversality_classes"] = tr.pairs;
    rep.summary["transversality_boxes"] = tr.boxes;
    if (tr.witness) rep.summary["transversality_witness"] = "[" + to_string(tr.witness->t.lo) + "," + to_string(tr.witness->t.hi) + "]";
  }
  auto ec = exceptional_cover(fam, cfg.epsilon_q(), n, cfg.k, c, cfg.assume, cfg.budget_atoms);
  cover_tables(ec, rep);
  Real p = cfg.parameter_real();
  const auto& I = fam.interval();
  rep.summary["parameter"] = param_cell(p);
  rep.summary["parameter_in_interval"] = Real(I.lo) <= p && p <= Real(I.hi);
  rep.summary["parameter_covered"] = ec.contains(p);
  return rep;
}

Ifs<Rational> ifs_at(const ScenarioConfig& cfg, const Real& t) {
  if (!cfg.family.is_null()) return cfg.make_family().at(t);
  if (cfg.scenario == "bernoulli") return presets::bernoulli(t);
  if (cfg.scenario == "gasket") return presets::gasket(t);
  if (cfg.scenario == "sinai") return presets::sinai(t);
  fail(ErrorCode::config, "scan needs scenario bernoulli, gasket or sinai, or a custom family");
}

RunReport cmd_scan(const ScenarioConfig& cfg, RunReport rep) {
  auto values = grid_values(cfg);
  int n = cfg.n.second;
  double theta = std::stod(cfg.theta);
  bool roots = cfg.scenario == "bernoulli" && cfg.family.is_null();
  std::vector<std::vector<json>> rows(values.size());
  parallel_for(values.size(), [&](std::size_t i) {
    const Real& t = values[i];
    auto ifs = ifs_at(cfg, t);
    std::vector<json> row{i, param_cell(t), t.to_double()};
    if (cfg.exact()) {
      auto r = delta_n(ifs, n, cfg.budget_atoms);
      row.push_back(r.delta ? json(r.delta->to_double()) : json(nullptr));
      row.push_back(opt_double(r.log_rate));
      row.push_back(r.exact_overlap);
    } else {
      auto r = delta_n(to_float(ifs), n, cfg.budget_atoms);
      row.push_back(r.delta ? json(*r.delta) : json(nullptr));
      row.push_back(opt_double(r.log_rate));
      row.push_back(r.exact_overlap);
    }
    row.push_back(sdim_measure(ifs));
    if (roots) {
      auto nr = near_root_scan(t, theta, n, n, cfg.budget_atoms);
      row.push_back(nr.back().min_abs);
      row.push_back(nr.back().exact_zero ? "zero" : nr.back().below ? "below" : "above");
    } else {
      row.push_back(nullptr);
      row.push_back(nullptr);
    }
    rows[i] = std::move(row);
  });
  auto& t = rep.table("scan", {"index", "t", "t_float", "delta", "log_rate", "exact_overlap", "sdim", "near_root_min",
                               "near_root_flag"});
  for (auto& r : rows) t.add(std::move(r));
  rep.summary["n"] = n;
  rep.summary["points"] = values.size();
  if (cfg.cover) {
    auto fam = cfg.make_family();
    cover_tables(exceptional_cover(fam, cfg.epsilon_q(), n, cfg.k, parse_rational(cfg.c), cfg.assume, cfg.budget_atoms),
                 rep);
  }
  return rep;
}

RunReport cmd_liouville(const ScenarioConfig& cfg, RunReport rep) {
  std::vector<Real> elems;
  if (cfg.elements.empty()) elems.push_back(cfg.parameter_real());
  for (const auto& e : cfg.elements) elems.push_back(real_from_json(e.dump()));
  auto& t = rep.table("liouville", {"n", "log2_floor", "floor", "log2_s", "degree"});
  for (int n = cfg.n.first; n <= cfg.n.second; ++n) {
    auto f = liouville_floor(elems, n, Integer(cfg.height));
    t.add({n, f.log2_floor, f.value, f.log2_s, f.degree});
  }
  auto& r = rep.table("near_root_scan", {"n", "minDelta", "theta_n", "flag"});
  for (const auto& row : near_root_scan(elems.front(), std::stod(cfg.theta), cfg.n.first, cfg.n.second, cfg.budget_atoms))
    r.add({row.n, row.min_abs, row.theta_n, row.exact_zero ? "zero" : row.below ? "below" : "above"});
  rep.summary["element"] = param_cell(elems.front());
  rep.summary["theta"] = cfg.theta;
  rep.summary["height"] = cfg.height;
  return rep;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"entropy", "overlaps", "inverse", "saturate",
                                              "kv",      "cover",    "scan",    "liouville"};
  return names;
}

DyadicMeasure<Rational> measure_from_spec(const json& spec, const ScenarioConfig& cfg) {
  int N = cfg.resolution;
  std::int64_t span = std::int64_t{1} << N;
  if (spec.is_object()) {
    auto mu = exact_measure_from_json(spec.dump());
    require(mu.resolution() == N, ErrorCode::config, "measure resolution differs from the configured resolution");
    return mu;
  }
  require(spec.is_string(), ErrorCode::config, "measure spec must be a name or a serialized measure");
  std::string s = spec.get<std::string>();
  if (s == "lebesgue") return DyadicMeasure<Rational>::uniform(N, 0, span);
  if (s == "coin") return DyadicMeasure<Rational>(N, {{0, ratio(1, 2)}, {1, ratio(1, 2)}});
  if (s == "cantor") return rasterize_self_similar(presets::cantor(), N, 24, cfg.budget_atoms).measure;
  if (s == "scenario")
    return rasterize_self_similar(normalize_to_unit(cfg.make_ifs()).ifs, N, 2, cfg.budget_atoms).measure;
  if (s == "point") return DyadicMeasure<Rational>::point(N, span / 3);
  if (s.rfind("point:", 0) == 0) {
    std::int64_t x = 0;
    try {
      x = std::stoll(s.substr(6));
    } catch (const std::exception&) {
      fail(ErrorCode::config, "malformed measure spec '" + s + "'");
    }
    require(x >= 0 && x < span, ErrorCode::config, "point index outside the grid");
    return DyadicMeasure<Rational>::point(N, x);
  }
  fail(ErrorCode::config, "unknown measure '" + s + "'");
}

std::vector<Real> grid_values(const ScenarioConfig& cfg) {
  const json& g = cfg.grid;
  if (!g.is_null() && g.contains("values")) {
    std::vector<Real> out;
    for (const auto& v : g["values"]) out.push_back(real_from_json(v.dump()));
    return out;
  }
  auto str = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  Rational lo = parse_rational(g.is_object() && g.contains("lo") ? str(g["lo"]) : cfg.interval.first);
  Rational hi = parse_rational(g.is_object() && g.contains("hi") ? str(g["hi"]) : cfg.interval.second);
  require(lo <= hi, ErrorCode::config, "grid needs lo <= hi");
  std::vector<Real> out;
  if (g.is_object() && g.contains("maxDenominator")) {
    long qmax = g["maxDenominator"].get<long>();
    require(qmax >= 1 && qmax <= 4096, ErrorCode::config, "maxDenominator must lie in 1..4096");
    std::set<Rational> pts;
    for (long q = 1; q <= qmax; ++q)
      for (Integer p = ceil(lo * q); ratio(p, q) <= hi; ++p) pts.insert(ratio(p, q));
    for (const auto& p : pts) out.push_back(Real(p));
    return out;
  }
  Rational step = g.is_object() && g.contains("step") ? parse_rational(str(g["step"])) : Rational((hi - lo) / 8);
  if (step == 0) return {Real(lo)};
  require(step > 0, ErrorCode::config, "grid step must be positive");
  require((hi - lo) / step <= 100000, ErrorCode::config, "grid has too many points");
  for (Rational t = lo; t <= hi; t += step) out.push_back(Real(t));
  return out;
}

RunReport run_command(const std::string& name, const ScenarioConfig& cfg) {
  cfg.validate();
  RunReport rep;
  rep.command = name;
  rep.backend = cfg.backend;
  rep.config = to_json(cfg);
  if (name == "entropy") return cmd_entropy(cfg, std::move(rep));
  if (name == "overlaps") return cmd_overlaps(cfg, std::move(rep));
  if (name == "inverse") return cmd_inverse(cfg, std::move(rep));
  if (name == "saturate") return cmd_saturate(cfg, std::move(rep));
  if (name == "kv") return cmd_kv(cfg, std::move(rep));
  if (name == "cover") return cmd_cover(cfg, std::move(rep));
  if (name == "scan") return cmd_scan(cfg, std::move(rep));
  if (name == "liouville") return cmd_liouville(cfg, std::move(rep));
  fail(ErrorCode::config, "unknown command '" + name + "'");
}

}  // namespace ssm::cli
