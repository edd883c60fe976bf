#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>

#include "commands.hpp"

namespace ssm::cli {

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::argument:
    case ErrorCode::config:
    case ErrorCode::parse:
      return 2;
    case ErrorCode::budget_exceeded:
      return 3;
    case ErrorCode::hypothesis_not_met:
      return 4;
    default:
      return 5;
  }
}

json scalar_or_json(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorCode::parse, "invalid JSON argument: " + std::string(e.what()));
    }
  }
  return text;
}

struct Flags {
  std::string config, scenario, parameter, ifs, family, interval, levels, epsilon, c, n, theta, grid, backend, format, out;
  int resolution = 0, m = 0, q = 0, k = 0, height = 0;
  std::uint64_t budget = 0;
  std::vector<std::string> measures, elements;
  bool assume = false, cover = false, dump = false;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-scale entropy, overlap and exceptional-parameter computations for self-similar measures", "ssm"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  Flags f;
  std::map<std::string, CLI::Option*> opt;
  opt["config"] = app.add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  opt["scenario"] = app.add_option("--scenario", f.scenario, "bernoulli|gasket|sinai|cantor|full_branch|custom");
  opt["parameter"] = app.add_option("--parameter", f.parameter, "exact parameter: \"1/3\" or {\"minpoly\":..,\"interval\":..}");
  opt["ifs"] = app.add_option("--ifs", f.ifs, "custom IFS as JSON");
  opt["family"] = app.add_option("--family", f.family, "custom parametric family as JSON");
  opt["interval"] = app.add_option("--interval", f.interval, "parameter interval lo,hi");
  opt["resolution"] = app.add_option("--resolution", f.resolution, "dyadic resolution N");
  opt["levels"] = app.add_option("--levels", f.levels, "component levels a..b");
  opt["m"] = app.add_option("--m", f.m, "component window m");
  opt["epsilon"] = app.add_option("--epsilon", f.epsilon, "epsilon (exact string)");
  opt["q"] = app.add_option("--q", f.q, "scale multiplier q");
  opt["k"] = app.add_option("--k", f.k, "transversality order, convolution power or kmax");
  opt["c"] = app.add_option("--c", f.c, "transversality constant c (exact string)");
  opt["n"] = app.add_option("--n", f.n, "generation range a..b");
  opt["theta"] = app.add_option("--theta", f.theta, "near-root threshold base");
  opt["grid"] = app.add_option("--grid", f.grid, "scan grid as JSON");
  opt["measures"] = app.add_option("--measure", f.measures, "measure spec (repeatable)");
  opt["elements"] = app.add_option("--element", f.elements, "liouville element (repeatable)");
  opt["height"] = app.add_option("--height", f.height, "coefficient bound for liouville");
  opt["assume"] = app.add_flag("--assume-transversality", f.assume, "skip the transversality check");
  opt["cover"] = app.add_flag("--with-cover", f.cover, "scan: also compute the exceptional cover");
  opt["budget"] = app.add_option("--budget-atoms", f.budget, "atom/word budget");
  opt["backend"] = app.add_option("--backend", f.backend, "exact|float");
  opt["format"] = app.add_option("--format", f.format, "csv|json");
  opt["out"] = app.add_option("--out", f.out, "output directory (default: stdout)");
  app.add_flag("--dump-config", f.dump, "print the effective config as JSON and exit");
  std::vector<CLI::App*> subs;
  const std::map<std::string, std::string> about{
      {"entropy", "conditional entropy rates of the generation measures and the raster entropy"},
      {"overlaps", "minimal cylinder distances Delta_n with exact overlap detection"},
      {"inverse", "component statistics and uniform/atomic level decomposition for two measures"},
      {"saturate", "component saturation of a convolution power"},
      {"kv", "entropy increments of repeated convolution"},
      {"cover", "certified cover of the exceptional parameters of a family"},
      {"scan", "per-parameter overlap and dimension summaries over a grid"},
      {"liouville", "separation floors and near-root minima for algebraic parameters"},
  };
  for (const auto& name : command_names()) subs.push_back(app.add_subcommand(name, about.at(name))->fallthrough());

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_json("argument", e.what()).dump() << "\n";
    return 2;
  }

  std::string command;
  for (auto* s : subs)
    if (s->parsed()) command = s->get_name();

  try {
    ScenarioConfig cfg = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
    auto given = [&](const char* key) { return opt[key]->count() > 0; };
    if (given("scenario")) cfg.scenario = f.scenario;
    if (given("parameter")) cfg.parameter = scalar_or_json(f.parameter);
    if (given("ifs")) cfg.ifs = scalar_or_json(f.ifs);
    if (given("family")) cfg.family = scalar_or_json(f.family);
    if (given("interval")) {
      auto comma = f.interval.find(',');
      require(comma != std::string::npos, ErrorCode::config, "interval must be lo,hi");
      cfg.interval = {f.interval.substr(0, comma), f.interval.substr(comma + 1)};
    }
    if (given("resolution")) cfg.resolution = f.resolution;
    if (given("levels")) cfg.levels = parse_range(f.levels);
    if (given("m")) cfg.m = f.m;
    if (given("epsilon")) cfg.epsilon = f.epsilon;
    if (given("q")) cfg.q = f.q;
    if (given("k")) cfg.k = f.k;
    if (given("c")) cfg.c = f.c;
    if (given("n")) cfg.n = parse_range(f.n);
    if (given("theta")) cfg.theta = f.theta;
    if (given("grid")) cfg.grid = scalar_or_json(f.grid);
    if (given("measures")) {
      cfg.measures.clear();
      for (const auto& s : f.measures) cfg.measures.push_back(scalar_or_json(s));
    }
    if (given("elements")) {
      cfg.elements.clear();
      for (const auto& s : f.elements) cfg.elements.push_back(scalar_or_json(s));
    }
    if (given("height")) cfg.height = f.height;
    if (given("assume")) cfg.assume = true;
    if (given("cover")) cfg.cover = true;
    if (given("budget")) cfg.budget_atoms = f.budget;
    if (given("backend")) cfg.backend = f.backend;
    if (given("format")) cfg.format = f.format;
    if (given("out")) cfg.out = f.out;
    cfg.validate();
    if (f.dump) {
      out << to_json(cfg).dump(2) << "\n";
      return 0;
    }
    RunReport rep = run_command(command, cfg);
    emit(rep, cfg.format, cfg.out, out);
    return 0;
  } catch (const Error& e) {
    err << error_json(std::string(to_string(e.code())), e.what()).dump() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()).dump() << "\n";
    return 70;
  }
}

}  // namespace ssm::cli
