#include "nflab/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "nflab/caratheodory.hpp"
#include "nflab/config.hpp"
#include "nflab/error.hpp"
#include "nflab/serialize.hpp"
#include "nflab/zalcman.hpp"

namespace nflab {

namespace {

bool mentions(const Expr& e, Op op) {
  if (e.op() == op) return true;
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return mentions(e.lhs(), op) || mentions(e.rhs(), op);
    case Op::Neg:
    case Op::PowInt:
    case Op::Exp:
    case Op::Re:
    case Op::Im:
    case Op::Conj:
      return mentions(e.lhs(), op);
    default:
      return false;
  }
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("not an integer list: '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

std::filesystem::path prepare_out(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Config, "cannot write '" + path.string() + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Options shared by the scenario-driven subcommands.
struct ScenarioArgs {
  std::string scenario;
  std::string config;
  std::string out;
  std::string grid;
  std::string n_list;

  void add_to(CLI::App* cmd, bool with_grid = true) {
    cmd->add_option("scenario", scenario, "Built-in scenario name or TOML path");
    cmd->add_option("--config", config, "Scenario TOML file");
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--n-list", n_list, "Comma-separated n values");
    if (with_grid) cmd->add_option("--grid", grid, "Polar grid as RADIAL,ANGULAR");
  }

  ScenarioConfig load() const {
    if (scenario.empty() && config.empty()) throw UsageError("a scenario name or --config is required");
    if (!scenario.empty() && !config.empty()) throw UsageError("give a scenario or --config, not both");
    ScenarioConfig cfg = config.empty() ? resolve_config(scenario) : load_config(config);
    if (!out.empty()) cfg.out = out;
    if (!n_list.empty()) cfg.n_list = parse_int_list(n_list);
    if (!grid.empty()) {
      const auto g = parse_int_list(grid);
      if (g.size() != 2) throw UsageError("--grid expects RADIAL,ANGULAR");
      cfg.radial = g[0];
      cfg.angular = g[1];
    }
    cfg.validate();
    return cfg;
  }
};

int cmd_metric(const std::string& zs, const std::string& ws, std::ostream& out) {
  const SpherePoint z = parse_point(zs);
  const SpherePoint w = parse_point(ws);
  out << "chi=" << format_metric(chordal(z, w)) << "\n";
  out << "sigma=" << format_metric(spherical(z, w)) << "\n";
  return kExitOk;
}

int cmd_sphder(const std::string& expr, const std::string& at, int n, std::ostream& out) {
  const SpherePoint z = parse_point(at);
  out << "fsharp=" << format_metric(spherical_derivative({parse(expr), n}, z)) << "\n";
  return kExitOk;
}

int cmd_scan(const ScenarioArgs& args, const std::string& which, std::ostream& out) {
  const ScenarioConfig cfg = args.load();
  std::optional<std::string> text;
  if (which == "f") text = cfg.f;
  else if (which == "a") text = cfg.a;
  else if (which == "b") text = cfg.b;
  else if (which == "c") text = cfg.c;
  if (!text) throw UsageError("scenario '" + cfg.name + "' has no function '" + which + "'");

  const ScanReport report = marty_scan(parse(*text), cfg.domain(), cfg.n_list);
  const auto dir = prepare_out(cfg.out);
  const std::string stem = "scan_" + cfg.name + "_" + which;
  std::ostringstream csv;
  write_scan_csv(csv, report);
  write_file(dir / (stem + ".csv"), csv.str());
  write_file(dir / (stem + ".json"), dump(to_json(report)));

  for (const auto& row : report.rows)
    out << "n=" << row.n << " sup=" << format_double(row.sup) << " argmax=("
        << format_double(row.argmax.real()) << "," << format_double(row.argmax.imag()) << ")\n";
  if (report.rows.size() >= 5) {
    out << "verdict=" << to_string(normality_evidence(report)) << "\n";
  } else {
    out << "verdict=Inconclusive (fewer than 5 values of n)\n";
  }
  if (10 * report.total_failed() > report.total_points()) {
    out << "degraded: " << report.total_failed() << " of " << report.total_points()
        << " points failed\n";
    return kExitDegraded;
  }
  return kExitOk;
}

int cmd_rescale(const ScenarioArgs& args, std::optional<int> j0, const std::string& zstar_list,
                double probe_radius, std::ostream& out) {
  const ScenarioConfig cfg = args.load();
  RescalingInput input;
  input.families = cfg.family_exprs();
  if (!j0 && input.families.size() >= 2) throw UsageError("--j0 is required when p >= 2");
  input.j0 = j0.value_or(1);
  input.n_list = cfg.n_list;
  if (!zstar_list.empty()) {
    std::stringstream ss(zstar_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const SpherePoint p = parse_point(item);
      if (p.is_infinite()) throw UsageError("z* must be finite");
      input.zstar.push_back(p.value());
    }
  }
  try {
    input.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const SequenceReport seq = run_sequence(input);
  const auto steps = seq.steps();
  std::optional<LimitReport> limit;
  if (steps.size() >= 3) limit = limit_probe(input, steps, probe_radius);

  const auto dir = prepare_out(cfg.out);
  const std::string stem = "rescale_" + cfg.name + "_j" + std::to_string(input.j0);
  json doc = {{"scenario", cfg.name}, {"j0", input.j0}, {"p", input.families.size()},
              {"sequence", to_json(seq)}};
  doc["limit"] = limit ? to_json(*limit) : json(nullptr);
  write_file(dir / (stem + ".json"), dump(doc));
  for (const auto& e : seq.entries) {
    if (!e.verification) continue;
    std::ostringstream csv;
    write_grid_csv(csv, e.verification->grid);
    write_file(dir / (stem + "_n" + std::to_string(e.n) + "_gsharp.csv"), csv.str());
  }

  for (const auto& e : seq.entries) {
    out << "n=" << e.n;
    if (!e.step) {
      out << " error: " << e.error << "\n";
      continue;
    }
    const auto& s = *e.step;
    out << " r=" << format_double(s.r) << " M=" << format_double(s.M)
        << " rho=" << format_double(s.rho) << " R=" << format_double(s.R) << " checks=";
    for (const auto& c : e.verification->checks) out << (c.passed ? 'P' : 'F');
    double sum = 0.0;
    for (double v : e.verification->gsharp_at_zero) sum += v;
    out << " sum_g#(0)=" << format_double(sum) << "\n";
  }
  out << "trend rho_decreasing=" << seq.rho_decreasing << " R_increasing=" << seq.R_increasing
      << " rM_increasing=" << seq.rM_increasing << " rM_growth_10x=" << seq.rM_growth << "\n";
  if (limit)
    for (const auto& c : limit->components)
      out << "component " << c.j << ": " << to_string(c.classification) << "\n";
  return seq.all_verified() ? kExitOk : kExitVerification;
}

int cmd_separation(const ScenarioArgs& args, std::ostream& out) {
  const ScenarioConfig cfg = args.load();
  const FamilyScenario sc = cfg.scenario();
  std::vector<SeparationResult> rows;
  for (int n : sc.n_list) {
    try {
      rows.push_back(min_separation(sc, n));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MinUnreliable) throw;
      out << "n=" << n << " " << e.what() << "\n";
      return kExitDegraded;
    }
    const auto& r = rows.back();
    out << "n=" << n << " min=" << format_double(r.min) << " holds=" << (r.holds ? "yes" : "no")
        << "\n";
  }
  const auto dir = prepare_out(cfg.out);
  std::ostringstream csv;
  write_separation_csv(csv, rows);
  write_file(dir / ("separation_" + cfg.name + ".csv"), csv.str());
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  write_file(dir / ("separation_" + cfg.name + ".json"),
             dump({{"scenario", cfg.name}, {"epsilon", sc.epsilon}, {"rows", arr}}));
  return kExitOk;
}

int cmd_crossratio(const ScenarioArgs& args, std::ostream& out) {
  const ScenarioConfig cfg = args.load();
  const FamilyScenario sc = cfg.scenario();
  const Expr cr = cross_ratio(sc.f, sc.a, sc.b, sc.c);
  out << "cross_ratio=" << print(cr) << "\n";
  std::ostringstream csv;
  csv << "n,violations,cross_ratio_checked,cross_ratio_violations,failed\n";
  json arr = json::array();
  bool clean = true;
  for (int n : sc.n_list) {
    const OmissionResult r = omission_check(sc, n);
    clean = clean && r.cross_ratio_violations == 0;
    csv << n << ',' << r.violations << ',' << r.cross_ratio_checked << ','
        << r.cross_ratio_violations << ',' << r.failed << '\n';
    arr.push_back(to_json(r));
    out << "n=" << n << " omission_violations=" << r.violations
        << " cross_ratio_violations=" << r.cross_ratio_violations << "\n";
  }
  const auto dir = prepare_out(cfg.out);
  write_file(dir / ("crossratio_" + cfg.name + ".csv"), csv.str());
  write_file(dir / ("crossratio_" + cfg.name + ".json"),
             dump({{"scenario", cfg.name}, {"cross_ratio", print(cr)}, {"rows", arr}}));
  return kExitOk;
}

int cmd_scenario(const std::string& action, const ScenarioArgs& args, std::ostream& out) {
  if (action == "list") {
    for (const auto& name : builtin_names()) out << name << "\n";
    return kExitOk;
  }
  if (action != "run") throw UsageError("scenario expects 'list' or 'run'");
  const ScenarioConfig cfg = args.load();
  json doc = {{"scenario", cfg.name}};
  if (cfg.has_exceptional()) {
    doc["report"] = to_json(scenario_check(cfg.scenario()));
  } else {
    json fams = json::array();
    for (const Expr& f : cfg.family_exprs())
      fams.push_back({{"family", print(f)}, {"marty", to_json(marty_scan(f, cfg.domain(), cfg.n_list))}});
    doc["families"] = fams;
  }
  const auto dir = prepare_out(cfg.out);
  write_file(dir / ("scenario_" + cfg.name + ".json"), dump(doc));
  out << dump(doc);
  return kExitOk;
}

}  // namespace

SpherePoint parse_point(const std::string& text) {
  const Expr e = parse(text);
  if (mentions(e, Op::VarZ) || mentions(e, Op::ParamN) || mentions(e, Op::ParamSqrtN))
    throw Error(ErrorKind::Syntax, "a point literal may not mention z or n");
  return eval(e, 1, SpherePoint(0.0));
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for normal families on the Riemann sphere", "nflab"};
  app.require_subcommand(1);

  std::string z_text, w_text;
  auto* metric = app.add_subcommand("metric", "Chordal and spherical distance of two points");
  metric->add_option("z", z_text)->required();
  metric->add_option("w", w_text)->required();

  std::string sph_expr, sph_at;
  int sph_n = 1;
  auto* sphder = app.add_subcommand("sphder", "Spherical derivative f#(z) of one family member");
  sphder->add_option("expr", sph_expr)->required();
  sphder->add_option("point", sph_at)->required();
  sphder->add_option("--n", sph_n, "Family index")->check(CLI::PositiveNumber);

  ScenarioArgs scan_args;
  std::string which = "f";
  auto* scan = app.add_subcommand("scan", "Marty scan of one scenario function");
  scan_args.add_to(scan);
  scan->add_option("--which", which, "f, a, b or c")->check(CLI::IsMember({"f", "a", "b", "c"}));

  ScenarioArgs rescale_args;
  std::optional<int> j0;
  bool auto_zstar = false;
  std::string zstar_list;
  double probe_radius = 1.0;
  auto* rescale = app.add_subcommand("rescale", "Run the rescaling construction");
  rescale_args.add_to(rescale, false);
  rescale->add_option("--j0", j0, "1-based index of the non-normal family");
  auto* auto_flag = rescale->add_flag("--auto-zstar", auto_zstar, "Pick z_n* automatically (default)");
  rescale->add_option("--zstar-list", zstar_list, "Comma-separated z_n* literals")->excludes(auto_flag);
  rescale->add_option("--probe-radius", probe_radius, "Radius of the limit probe disk")
      ->check(CLI::PositiveNumber);

  ScenarioArgs sep_args;
  auto* separation = app.add_subcommand("separation", "Minimum separation product per n");
  sep_args.add_to(separation);

  ScenarioArgs cr_args;
  auto* crossratio = app.add_subcommand("crossratio", "Cross-ratio normalisation and omission check");
  cr_args.add_to(crossratio);

  std::string action;
  ScenarioArgs scen_args;
  auto* scenario = app.add_subcommand("scenario", "List or run scenarios");
  scenario->add_option("action", action, "list or run")->required()->check(CLI::IsMember({"list", "run"}));
  scen_args.add_to(scenario);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*metric) return cmd_metric(z_text, w_text, out);
    if (*sphder) return cmd_sphder(sph_expr, sph_at, sph_n, out);
    if (*scan) return cmd_scan(scan_args, which, out);
    if (*rescale) return cmd_rescale(rescale_args, j0, zstar_list, probe_radius, out);
    if (*separation) return cmd_separation(sep_args, out);
    if (*crossratio) return cmd_crossratio(cr_args, out);
    if (*scenario) return cmd_scenario(action, scen_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << to_string(e.kind()) << " error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Indeterminate:
      case ErrorKind::EssentialSingularity:
      case ErrorKind::MinUnreliable:
      case ErrorKind::MaximizationFailed:
        return kExitDegraded;
      default:
        return kExitUsage;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace nflab
