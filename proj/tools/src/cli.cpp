#include "ritzbound_cli/cli.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <span>

#include <CLI11.hpp>

#include "ritzbound/bounds.hpp"
#include "ritzbound/experiments.hpp"
#include "ritzbound_cli/structure_io.hpp"

namespace ritzbound::cli {

namespace {

struct RunOptions {
  std::string scenario;
  std::string scale = "desk";
  std::optional<long> n, m, k, keep, iters;
  std::optional<int> power_passes;
  std::optional<double> kappa;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> gap_mode;
  std::optional<std::string> method;
  std::string out = "-";
};

struct BoundOptions {
  std::string input;
  std::optional<std::string> gap_mode;
  double cluster_threshold = 1e-6;
};

std::string cell(const std::optional<double> &v) {
  if (!v) {
    return "-";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

ExperimentConfig build_config(const RunOptions &o) {
  const auto scenario = parse_scenario(o.scenario);
  if (!scenario) {
    throw ConfigError("unknown scenario '" + o.scenario + "' (see list-scenarios)");
  }
  if (o.scale != "desk" && o.scale != "full") {
    throw ConfigError("scale must be desk or full");
  }
  ExperimentConfig c = default_config(*scenario, o.scale == "full" ? Scale::full : Scale::desk);
  if (o.n) c.n = *o.n;
  if (o.m) c.m = *o.m;
  if (o.k) {
    c.k = *o.k;
    if (!o.keep && *scenario != Scenario::eig_lanczos) {
      c.keep = c.k;
    }
  }
  if (o.keep) c.keep = *o.keep;
  if (o.iters) c.iters = *o.iters;
  if (o.power_passes) c.power_passes = *o.power_passes;
  if (o.kappa) c.kappa = *o.kappa;
  if (o.seed) c.seed = *o.seed;
  if (o.gap_mode) {
    const auto g = parse_gap_selection(*o.gap_mode);
    if (!g) {
      throw ConfigError("gap-mode must be exact, approximate or both");
    }
    c.gap_mode = *g;
  }
  if (o.method) {
    const auto m = parse_eig_method(*o.method);
    if (!m) {
      throw ConfigError("method must be subspace or lobpcg");
    }
    c.method = *m;
  }
  validate(c);
  return c;
}

int do_run(const RunOptions &o, std::ostream &out) {
  const ExperimentConfig cfg = build_config(o);
  const ExperimentResult result = run_experiment(cfg);
  if (o.out == "-") {
    emit_csv(result, out);
  } else {
    emit_csv(result, std::filesystem::path(o.out));
    emit_metadata(result, std::filesystem::path(o.out + ".meta"));
  }
  return kExitOk;
}

void print_table(const std::vector<BoundReport> &reports, std::span<const BoundKind> kinds,
                 bool with_f, std::ostream &out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%4s  %-12s %-11s %-12s", "i", "theta", "gap_mode", "residual_e");
  out << buf;
  if (with_f) {
    std::snprintf(buf, sizeof buf, " %-12s", "residual_f");
    out << buf;
  }
  for (BoundKind k : kinds) {
    std::snprintf(buf, sizeof buf, " %-17s", std::string(to_string(k)).c_str());
    out << buf;
  }
  out << '\n';
  for (const BoundReport &r : reports) {
    std::snprintf(buf, sizeof buf, "%4ld  %-12s %-11s %-12s", static_cast<long>(r.index + 1),
                  cell(r.theta).c_str(), std::string(to_string(r.mode)).c_str(),
                  cell(r.residual_e).c_str());
    out << buf;
    if (with_f) {
      std::snprintf(buf, sizeof buf, " %-12s", cell(r.residual_f).c_str());
      out << buf;
    }
    for (BoundKind k : kinds) {
      const auto it = r.bounds.find(k);
      std::snprintf(buf, sizeof buf, " %-17s",
                    cell(it == r.bounds.end() ? std::nullopt : it->second.get()).c_str());
      out << buf;
    }
    out << '\n';
  }
}

std::vector<GapMode> bound_modes(const std::optional<std::string> &choice, bool has_tail) {
  if (!choice) {
    return {has_tail ? GapMode::exact : GapMode::approximate};
  }
  const auto g = parse_gap_selection(*choice);
  if (!g) {
    throw ConfigError("gap-mode must be exact, approximate or both");
  }
  if (*g != GapSelection::approximate && !has_tail) {
    throw ConfigError("exact gaps need tail_spectrum in the structure file");
  }
  switch (*g) {
  case GapSelection::exact: return {GapMode::exact};
  case GapSelection::approximate: return {GapMode::approximate};
  case GapSelection::both: break;
  }
  return {GapMode::exact, GapMode::approximate};
}

int do_bound(const BoundOptions &o, std::ostream &out) {
  const Structure s = read_structure(o.input);
  if (const auto *p = std::get_if<SymmetricPerturbation>(&s)) {
    static constexpr BoundKind kinds[] = {BoundKind::thm_main, BoundKind::thm_cluster,
                                          BoundKind::weyl, BoundKind::lili,
                                          BoundKind::asymptotic};
    const auto clusters = detect_clusters(p->theta, o.cluster_threshold);
    std::vector<BoundReport> all;
    for (GapMode mode : bound_modes(o.gap_mode, p->tail_spectrum.has_value())) {
      const GapData g = gaps_symmetric(*p, mode);
      const auto part = match_and_report(*p, std::nullopt, symmetric_bounds(*p, g, clusters), mode);
      all.insert(all.end(), part.begin(), part.end());
    }
    print_table(all, kinds, false, out);
  } else {
    const auto &q = std::get<SvdPerturbation>(s);
    static constexpr BoundKind kinds[] = {BoundKind::thm_svd, BoundKind::weyl, BoundKind::lili,
                                          BoundKind::offdiag_quadratic, BoundKind::asymptotic};
    std::vector<BoundReport> all;
    for (GapMode mode : bound_modes(o.gap_mode, q.tail_spectrum.has_value())) {
      const GapData g = gaps_svd(q, mode);
      const auto part = match_and_report(q, std::nullopt, svd_bounds(q, g), mode);
      all.insert(all.end(), part.begin(), part.end());
    }
    print_table(all, kinds, true, out);
  }
  return kExitOk;
}

void list_scenarios(std::ostream &out) {
  static constexpr Scenario all[] = {Scenario::eig_uniform,   Scenario::eig_cluster,
                                     Scenario::eig_lanczos,   Scenario::svd_pg,
                                     Scenario::svd_hmt,       Scenario::svd_pg_vs_hmt,
                                     Scenario::sharpness};
  for (Scenario s : all) {
    const ExperimentConfig c = default_config(s);
    out << to_string(s) << "  n=" << c.n;
    if (family_of(s) == Family::svd) {
      out << " m=" << c.m << " kappa=" << c.kappa << " power_passes=" << c.power_passes;
    }
    out << " k=" << c.k << " keep=" << c.keep;
    if (family_of(s) == Family::symmetric) {
      out << " iters=" << c.iters;
      if (s != Scenario::eig_lanczos) {
        out << " method=" << to_string(c.method);
      }
    }
    out << " gap_mode=" << to_string(c.gap_mode) << '\n';
  }
}

} // namespace

int parse_and_dispatch(const std::vector<std::string> &args, std::ostream &out,
                       std::ostream &err) {
  CLI::App app{"Residual-based error bounds for Ritz values and approximate singular values"};
  app.name("ritzbound");
  app.require_subcommand(1);

  RunOptions run;
  CLI::App *run_cmd = app.add_subcommand("run", "Run an experiment scenario and write CSV");
  run_cmd->add_option("--scenario", run.scenario, "Scenario name (see list-scenarios)")
      ->required();
  run_cmd->add_option("--scale", run.scale, "Preset size: desk or full (full is slow)")
      ->capture_default_str();
  run_cmd->add_option("--n", run.n, "Matrix size (columns for svd scenarios); default per scenario");
  run_cmd->add_option("--m", run.m, "Rows for svd scenarios; default per scenario");
  run_cmd->add_option("--k", run.k, "Subspace dimension; default per scenario");
  run_cmd->add_option("--keep", run.keep, "Ritz values kept in the leading block; default k (20 for eig_lanczos)");
  run_cmd->add_option("--iters", run.iters, "Iteration steps; default per scenario");
  run_cmd->add_option("--power-passes", run.power_passes, "Sketch power passes, 1 or 2; default 1");
  run_cmd->add_option("--kappa", run.kappa, "Condition number of the geometric test matrix; default 1e12");
  run_cmd->add_option("--seed", run.seed, "Random seed; default 0");
  run_cmd->add_option("--gap-mode", run.gap_mode, "exact, approximate or both; default both");
  run_cmd->add_option("--method", run.method, "Eigen scenarios: subspace or lobpcg; default per scenario");
  run_cmd->add_option("--out", run.out, "CSV destination, - for standard output")
      ->capture_default_str();

  BoundOptions bound;
  CLI::App *bound_cmd =
      app.add_subcommand("bound", "Evaluate bounds from residual norms and gaps in a JSON file");
  bound_cmd->add_option("--input", bound.input, "Structure file")->required();
  bound_cmd->add_option("--gap-mode", bound.gap_mode,
                        "exact, approximate or both; default exact when tail_spectrum is given");
  bound_cmd->add_option("--cluster-threshold", bound.cluster_threshold,
                        "Relative spacing below which Ritz values are grouped")
      ->capture_default_str();

  CLI::App *list_cmd = app.add_subcommand("list-scenarios", "List scenarios and desk defaults");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("ritzbound");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (std::string &a : argv_storage) {
    argv.push_back(a.data());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      return do_run(run, out);
    }
    if (bound_cmd->parsed()) {
      return do_bound(bound, out);
    }
    if (list_cmd->parsed()) {
      list_scenarios(out);
      return kExitOk;
    }
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

} // namespace ritzbound::cli
