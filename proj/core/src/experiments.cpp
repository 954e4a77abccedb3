#include "ritzbound/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <span>

#include "ritzbound/extraction.hpp"
#include "ritzbound/rng.hpp"
#include "ritzbound/subspace.hpp"

namespace ritzbound {

namespace {

constexpr double kSlackFactor = 64.0;
constexpr double kRoundoffFactor = 1e3;
constexpr Index kClusterBegin = 19;  // zero-based position of the 20th eigenvalue
constexpr Index kClusterSize = 10;
constexpr double kClusterCenter = 20.0;
constexpr double kClusterSpread = 1e-10;

struct ScenarioName {
  Scenario scenario;
  std::string_view name;
};

constexpr ScenarioName kScenarioNames[] = {
    {Scenario::eig_uniform, "eig_uniform"},     {Scenario::eig_cluster, "eig_cluster"},
    {Scenario::eig_lanczos, "eig_lanczos"},     {Scenario::svd_pg, "svd_pg"},
    {Scenario::svd_hmt, "svd_hmt"},             {Scenario::svd_pg_vs_hmt, "svd_pg_vs_hmt"},
    {Scenario::sharpness, "sharpness"},
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::vector<GapMode> modes_of(GapSelection g) {
  switch (g) {
  case GapSelection::exact: return {GapMode::exact};
  case GapSelection::approximate: return {GapMode::approximate};
  case GapSelection::both: break;
  }
  return {GapMode::exact, GapMode::approximate};
}

TailMode tail_mode_of(GapSelection g) {
  return g == GapSelection::approximate ? TailMode::approximate : TailMode::exact;
}

std::span<const double> as_span(const Spectrum &s) {
  return {s.values().data(), static_cast<std::size_t>(s.size())};
}

void append_rows(ExperimentResult &out, std::string_view variant,
                 const std::vector<BoundReport> &reports, BoundKind main_kind,
                 const DenseVector &eta) {
  const double floor = roundoff_floor(out.norm_a);
  for (const BoundReport &r : reports) {
    ExperimentRow row;
    row.variant = std::string(variant);
    row.index = r.index;
    row.theta = r.theta;
    row.exact_value = r.exact_value;
    row.abs_error = r.exact_error;
    row.residual_e = r.residual_e;
    row.residual_f = r.residual_f;
    row.gap_mode = r.mode;
    row.bounds = r.bounds;
    const auto it = r.bounds.find(main_kind);
    row.applicable = it != r.bounds.end() && it->second.applicable();
    row.below_roundoff = r.exact_error && *r.exact_error < floor;
    row.eta = eta[r.index];
    out.rows.push_back(std::move(row));
  }
}

void add_meta(ExperimentResult &out, std::string key, std::string value) {
  out.metadata.emplace_back(std::move(key), std::move(value));
}

void add_stats(ExperimentResult &out, const IterationStats &s) {
  add_meta(out, "rerandomized_columns", std::to_string(s.rerandomized_columns));
  add_meta(out, "dropped_p_blocks", std::to_string(s.dropped_p_blocks));
  add_meta(out, "dropped_residual_columns", std::to_string(s.dropped_residual_columns));
}

Spectrum scenario_spectrum(const ExperimentConfig &cfg, SeededRng &rng) {
  DenseVector d(cfg.n);
  for (Index i = 0; i < cfg.n; ++i) {
    d[i] = static_cast<double>(i + 1);
  }
  if (cfg.scenario == Scenario::eig_cluster) {
    for (Index i = 0; i < kClusterSize; ++i) {
      d[kClusterBegin + i] = kClusterCenter + kClusterSpread * rng.gaussian();
    }
  }
  return Spectrum::sorted(std::move(d), SortOrder::ascending);
}

void run_symmetric(const ExperimentConfig &cfg, ExperimentResult &out) {
  SeededRng rng(cfg.seed);
  const Spectrum d = scenario_spectrum(cfg, rng);
  const DenseMatrix a = sym_with_spectrum(d, rng);
  const Spectrum exact = sym_eigenvalues(a);
  out.norm_a = exact.max_abs();
  const TailMode tail = tail_mode_of(cfg.gap_mode);

  SymmetricPerturbation p;
  std::string variant;
  if (cfg.scenario == Scenario::eig_lanczos) {
    DenseVector v0(cfg.n);
    for (Index i = 0; i < cfg.n; ++i) {
      v0[i] = rng.gaussian();
    }
    const LanczosFactorization f = lanczos(a, v0, cfg.k);
    add_meta(out, "lanczos_steps", std::to_string(f.size()));
    add_meta(out, "lanczos_breakdown", f.breakdown ? "1" : "0");
    add_meta(out, "lanczos_coupling", fmt(f.coupling));
    add_meta(out, "lanczos_recurrence_residual", fmt(lanczos_recurrence_residual(a, f)));
    if (f.size() < cfg.keep) {
      throw Error("Lanczos broke down after " + std::to_string(f.size()) +
                  " steps, fewer than keep");
    }
    p = tail == TailMode::exact ? lanczos_to_perturbation(f, cfg.keep, a)
                                : lanczos_to_perturbation(f, cfg.keep);
    variant = "lanczos";
  } else {
    SubspaceResult sub;
    if (cfg.method == EigMethod::subspace) {
      IterationConfig ic;
      ic.block_size = cfg.k;
      ic.max_iters = cfg.iters;
      ic.target = Target::smallest;
      ic.seed = rng.next_u64();
      sub = subspace_iteration(a, ic);
    } else {
      const DenseMatrix x0 = haar_stiefel(cfg.n, cfg.k, rng);
      sub = lobpcg_basic(a, x0, cfg.iters, Target::smallest);
    }
    add_stats(out, sub.stats);
    ExtractionOptions opts;
    opts.keep = cfg.keep;
    p = rayleigh_ritz(a, sub.basis, tail, opts);
    variant = "rr";
  }

  const std::vector<ClusterSpec> clusters = detect_clusters(p.theta);
  add_meta(out, "clusters", std::to_string(clusters.size()));
  for (GapMode mode : modes_of(cfg.gap_mode)) {
    const GapData g = gaps_symmetric(p, mode, mode == GapMode::exact ? as_span(exact)
                                                                     : std::span<const double>{});
    const BoundTable table = symmetric_bounds(p, g, clusters);
    append_rows(out, variant, match_and_report(p, exact, table, mode), BoundKind::thm_main,
                g.eta);
  }
}

void run_svd(const ExperimentConfig &cfg, ExperimentResult &out) {
  SeededRng rng(cfg.seed);
  const DenseMatrix a = geometric_randsvd(cfg.m, cfg.n, cfg.kappa, rng);
  const Spectrum exact = singular_values(a);
  out.norm_a = exact[0];
  const TailMode tail = tail_mode_of(cfg.gap_mode);
  const SketchResult sk = sketch_subspaces(a, cfg.k, cfg.power_passes, rng);
  add_stats(out, sk.stats);

  std::vector<std::pair<std::string, SvdPerturbation>> variants;
  if (cfg.scenario != Scenario::svd_hmt) {
    variants.emplace_back("pg", petrov_galerkin(a, sk.left, sk.right, tail));
  }
  if (cfg.scenario != Scenario::svd_pg) {
    variants.emplace_back("hmt", hmt_structure(a, sk.left, tail));
  }
  add_meta(out, "square_augmented", cfg.m == cfg.n ? "1" : "0");
  for (const auto &[name, p] : variants) {
    for (GapMode mode : modes_of(cfg.gap_mode)) {
      const GapData g = gaps_svd(p, mode);
      const BoundTable table = svd_bounds(p, g);
      append_rows(out, name, match_and_report(p, exact, table, mode), BoundKind::thm_svd,
                  g.eta);
    }
  }
}

void run_sharpness(const ExperimentConfig &cfg, ExperimentResult &out) {
  SeededRng rng(cfg.seed);
  const Index k = cfg.k;
  const Index r = cfg.n - k;
  const double c = static_cast<double>(k) + 3.0;

  DenseVector theta(k);
  for (Index i = 0; i < k; ++i) {
    theta[i] = static_cast<double>(i + 1);
  }
  DenseMatrix e0 = gaussian_matrix(r, k, rng);
  e0.colwise().normalize();
  add_meta(out, "tail_value", fmt(c));

  for (double eps : cfg.epsilons) {
    const DenseMatrix e = eps * e0;
    DenseMatrix a = DenseMatrix::Zero(cfg.n, cfg.n);
    a.topLeftCorner(k, k).diagonal() = theta;
    a.bottomLeftCorner(r, k) = e;
    a.topRightCorner(k, r) = e.transpose();
    a.bottomRightCorner(r, r).diagonal().setConstant(c);
    const std::vector<long double> lambda = sym_eigenvalues_extended(a);
    long double top = 0.0L;
    for (long double l : lambda) {
      top = std::max(top, std::abs(l));
    }
    out.norm_a = std::max(out.norm_a, static_cast<double>(top));

    SymmetricPerturbation p;
    p.theta = theta;
    p.residual_norms = e.colwise().norm().transpose();
    p.residual_block = e;
    p.tail_spectrum = Spectrum(DenseVector::Constant(r, c), SortOrder::ascending);
    const GapData g = gaps_symmetric(p, GapMode::exact);
    BoundTable table;
    table[BoundKind::thm_main] = bound_thm_main(p, g);
    table[BoundKind::lili] = bound_lili(p, g);
    table[BoundKind::weyl] = bound_weyl(p.residual_norms);
    table[BoundKind::asymptotic] = bound_asymptotic(p, g);

    const double floor = roundoff_floor(static_cast<double>(top));
    char label[32];
    std::snprintf(label, sizeof label, "eps=%g", eps);
    for (Index i = 0; i < k; ++i) {
      ExperimentRow row;
      row.variant = label;
      row.epsilon = eps;
      row.index = i;
      row.theta = theta[i];
      row.exact_value = static_cast<double>(lambda[static_cast<std::size_t>(i)]);
      row.abs_error = static_cast<double>(
          std::abs(lambda[static_cast<std::size_t>(i)] - static_cast<long double>(theta[i])));
      row.residual_e = p.residual_norms[i];
      row.eta = g.eta[i];
      row.gap_mode = GapMode::exact;
      for (const auto &[kind, list] : table) {
        row.bounds.emplace(kind, list[static_cast<std::size_t>(i)]);
      }
      row.applicable = row.bounds.at(BoundKind::thm_main).applicable();
      row.below_roundoff = *row.abs_error < floor;
      out.rows.push_back(std::move(row));
    }
  }
}

std::optional<double> bound_of(const ExperimentRow &row, BoundKind kind) {
  const auto it = row.bounds.find(kind);
  if (it == row.bounds.end()) {
    return std::nullopt;
  }
  return it->second.get();
}

std::optional<double> ratio(std::optional<double> num, std::optional<double> den) {
  if (!num || !den || *den == 0.0) {
    return std::nullopt;
  }
  return *num / *den;
}

} // namespace

std::string_view to_string(Scenario s) noexcept {
  for (const auto &entry : kScenarioNames) {
    if (entry.scenario == s) {
      return entry.name;
    }
  }
  return "unknown";
}

std::string_view to_string(GapSelection g) noexcept {
  switch (g) {
  case GapSelection::exact: return "exact";
  case GapSelection::approximate: return "approximate";
  case GapSelection::both: return "both";
  }
  return "unknown";
}

std::string_view to_string(EigMethod m) noexcept {
  return m == EigMethod::subspace ? "subspace" : "lobpcg";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const auto &entry : kScenarioNames) {
    if (entry.name == name) {
      return entry.scenario;
    }
  }
  return std::nullopt;
}

std::optional<GapSelection> parse_gap_selection(std::string_view name) {
  if (name == "exact") return GapSelection::exact;
  if (name == "approximate") return GapSelection::approximate;
  if (name == "both") return GapSelection::both;
  return std::nullopt;
}

std::optional<EigMethod> parse_eig_method(std::string_view name) {
  if (name == "subspace") return EigMethod::subspace;
  if (name == "lobpcg") return EigMethod::lobpcg;
  return std::nullopt;
}

Family family_of(Scenario s) noexcept {
  switch (s) {
  case Scenario::svd_pg:
  case Scenario::svd_hmt:
  case Scenario::svd_pg_vs_hmt: return Family::svd;
  case Scenario::sharpness: return Family::sharpness;
  default: return Family::symmetric;
  }
}

ExperimentConfig default_config(Scenario s, Scale scale) {
  const bool full = scale == Scale::full;
  ExperimentConfig c;
  c.scenario = s;
  switch (s) {
  case Scenario::eig_uniform:
    c.n = full ? 2000 : 300;
    c.k = c.keep = full ? 100 : 30;
    c.iters = full ? 40 : 60;
    c.method = full ? EigMethod::lobpcg : EigMethod::subspace;
    break;
  case Scenario::eig_cluster:
    c.n = full ? 2000 : 300;
    c.k = c.keep = full ? 100 : 30;
    c.iters = 40;
    c.method = EigMethod::lobpcg;
    break;
  case Scenario::eig_lanczos:
    c.n = full ? 2000 : 300;
    c.k = full ? 400 : 120;
    c.keep = 20;
    c.iters = c.k;
    break;
  case Scenario::svd_pg:
  case Scenario::svd_hmt:
  case Scenario::svd_pg_vs_hmt:
    c.m = full ? 5000 : 200;
    c.n = full ? 1000 : 80;
    c.k = c.keep = full ? 200 : 20;
    c.kappa = full ? 1e20 : 1e12;
    c.iters = 1;
    c.power_passes = 1;
    break;
  case Scenario::sharpness:
    c.n = 20;
    c.k = c.keep = 5;
    c.iters = 1;
    c.gap_mode = GapSelection::exact;
    break;
  }
  return c;
}

void validate(const ExperimentConfig &cfg) {
  if (cfg.n < 1 || cfg.k < 1) {
    throw ConfigError("n and k must be positive");
  }
  if (cfg.k > cfg.n) {
    throw ConfigError("k must not exceed n");
  }
  if (cfg.keep < 1) {
    throw ConfigError("keep must be positive");
  }
  if (cfg.keep > cfg.k) {
    throw ConfigError("keep must not exceed k");
  }
  if (cfg.iters < 1) {
    throw ConfigError("iters must be positive");
  }
  switch (family_of(cfg.scenario)) {
  case Family::symmetric:
    if (cfg.scenario == Scenario::eig_cluster && cfg.n < kClusterBegin + kClusterSize + 1) {
      throw ConfigError("eig_cluster needs n >= " +
                        std::to_string(kClusterBegin + kClusterSize + 1));
    }
    if (cfg.scenario != Scenario::eig_lanczos && cfg.method == EigMethod::lobpcg &&
        3 * cfg.k > cfg.n) {
      throw ConfigError("lobpcg needs 3k <= n");
    }
    break;
  case Family::svd:
    if (cfg.m < 1) {
      throw ConfigError("m must be positive");
    }
    if (cfg.k > std::min(cfg.m, cfg.n)) {
      throw ConfigError("k must not exceed min(m, n)");
    }
    if (cfg.keep != cfg.k) {
      throw ConfigError("keep must equal k for singular value scenarios");
    }
    if (cfg.power_passes != 1 && cfg.power_passes != 2) {
      throw ConfigError("power-passes must be 1 or 2");
    }
    if (!(cfg.kappa >= 1.0) || !std::isfinite(cfg.kappa)) {
      throw ConfigError("kappa must be a finite number >= 1");
    }
    break;
  case Family::sharpness:
    if (cfg.k >= cfg.n) {
      throw ConfigError("sharpness needs k < n");
    }
    if (cfg.gap_mode != GapSelection::exact) {
      throw ConfigError("sharpness uses exact gaps only");
    }
    if (cfg.epsilons.empty()) {
      throw ConfigError("sharpness needs at least one epsilon");
    }
    for (double e : cfg.epsilons) {
      if (!(e > 0.0) || !(e < 1.0)) {
        throw ConfigError("epsilon values must lie in (0, 1)");
      }
    }
    break;
  }
}

double soundness_slack(double norm_a) noexcept { return kSlackFactor * kUnitRoundoff * norm_a; }

double roundoff_floor(double norm_a) noexcept { return kRoundoffFactor * kUnitRoundoff * norm_a; }

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult out;
  out.family = family_of(cfg.scenario);
  add_meta(out, "scenario", std::string(to_string(cfg.scenario)));
  add_meta(out, "seed", std::to_string(cfg.seed));
  add_meta(out, "n", std::to_string(cfg.n));
  if (out.family == Family::svd) {
    add_meta(out, "m", std::to_string(cfg.m));
    add_meta(out, "power_passes", std::to_string(cfg.power_passes));
    add_meta(out, "kappa", fmt(cfg.kappa));
  }
  add_meta(out, "k", std::to_string(cfg.k));
  add_meta(out, "keep", std::to_string(cfg.keep));
  add_meta(out, "iters", std::to_string(cfg.iters));
  if (out.family == Family::symmetric && cfg.scenario != Scenario::eig_lanczos) {
    add_meta(out, "method", std::string(to_string(cfg.method)));
  }
  add_meta(out, "gap_mode", std::string(to_string(cfg.gap_mode)));

  switch (out.family) {
  case Family::symmetric: run_symmetric(cfg, out); break;
  case Family::svd: run_svd(cfg, out); break;
  case Family::sharpness: run_sharpness(cfg, out); break;
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  add_meta(out, "norm_a", fmt(out.norm_a));
  add_meta(out, "unit_roundoff", fmt(kUnitRoundoff));
  add_meta(out, "soundness_slack", fmt(soundness_slack(out.norm_a)));
  add_meta(out, "roundoff_floor", fmt(roundoff_floor(out.norm_a)));
  add_meta(out, "orth_rank_tolerance", fmt(kOrthRankTolerance));
  add_meta(out, "rows", std::to_string(out.rows.size()));
  add_meta(out, "soundness_violations", std::to_string(count_violations(out)));
  add_meta(out, "wall_time_s", fmt(seconds));
  return out;
}

std::size_t count_violations(const ExperimentResult &r) {
  const double slack = soundness_slack(r.norm_a);
  std::size_t count = 0;
  for (const ExperimentRow &row : r.rows) {
    if (!row.abs_error || row.below_roundoff) {
      continue;
    }
    for (const auto &[kind, value] : row.bounds) {
      if (is_guaranteed(kind, row.gap_mode) && value.applicable() && *row.abs_error > value.value() + slack) {
        ++count;
      }
    }
  }
  return count;
}

std::vector<std::string> csv_header(Family f) {
  switch (f) {
  case Family::symmetric:
    return {"variant", "i", "theta", "exact_value", "abs_error", "residual_e", "residual_f",
            "gap_mode", "thm_main", "thm_cluster", "weyl", "lili", "classical", "asymptotic",
            "applicable", "below_roundoff"};
  case Family::svd:
    return {"variant", "i", "theta", "exact_value", "abs_error", "residual_e", "residual_f",
            "gap_mode", "thm_svd", "weyl", "lili", "offdiag_quadratic", "asymptotic",
            "applicable", "below_roundoff"};
  case Family::sharpness:
    return {"variant", "epsilon", "i", "theta", "exact_value", "abs_error", "residual_e", "eta",
            "gap_mode", "thm_main", "lili", "weyl", "asymptotic", "error_over_asymptotic",
            "thm_main_over_error", "applicable", "below_roundoff"};
  }
  return {};
}

std::string format_number(std::optional<double> v) { return v ? fmt(*v) : std::string(); }

void emit_csv(const ExperimentResult &r, std::ostream &out) {
  const auto write_line = [&out](const std::vector<std::string> &fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) {
        out << ',';
      }
      out << csv_field(fields[i]);
    }
    out << '\n';
  };
  write_line(csv_header(r.family));
  for (const ExperimentRow &row : r.rows) {
    std::vector<std::string> f;
    const std::string i = std::to_string(row.index + 1);
    const std::string mode(to_string(row.gap_mode));
    const std::string applicable = row.applicable ? "1" : "0";
    const std::string below = row.below_roundoff ? "1" : "0";
    switch (r.family) {
    case Family::symmetric:
      f = {row.variant,
           i,
           fmt(row.theta),
           format_number(row.exact_value),
           format_number(row.abs_error),
           fmt(row.residual_e),
           format_number(row.residual_f),
           mode,
           format_number(bound_of(row, BoundKind::thm_main)),
           format_number(bound_of(row, BoundKind::thm_cluster)),
           format_number(bound_of(row, BoundKind::weyl)),
           format_number(bound_of(row, BoundKind::lili)),
           format_number(bound_of(row, BoundKind::classical)),
           format_number(bound_of(row, BoundKind::asymptotic)),
           applicable,
           below};
      break;
    case Family::svd:
      f = {row.variant,
           i,
           fmt(row.theta),
           format_number(row.exact_value),
           format_number(row.abs_error),
           fmt(row.residual_e),
           format_number(row.residual_f),
           mode,
           format_number(bound_of(row, BoundKind::thm_svd)),
           format_number(bound_of(row, BoundKind::weyl)),
           format_number(bound_of(row, BoundKind::lili)),
           format_number(bound_of(row, BoundKind::offdiag_quadratic)),
           format_number(bound_of(row, BoundKind::asymptotic)),
           applicable,
           below};
      break;
    case Family::sharpness:
      f = {row.variant,
           format_number(row.epsilon),
           i,
           fmt(row.theta),
           format_number(row.exact_value),
           format_number(row.abs_error),
           fmt(row.residual_e),
           format_number(row.eta),
           mode,
           format_number(bound_of(row, BoundKind::thm_main)),
           format_number(bound_of(row, BoundKind::lili)),
           format_number(bound_of(row, BoundKind::weyl)),
           format_number(bound_of(row, BoundKind::asymptotic)),
           format_number(ratio(row.abs_error, bound_of(row, BoundKind::asymptotic))),
           format_number(ratio(bound_of(row, BoundKind::thm_main), row.abs_error)),
           applicable,
           below};
      break;
    }
    write_line(f);
  }
}

void emit_csv(const ExperimentResult &r, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  emit_csv(r, out);
  out.close();
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

void emit_metadata(const ExperimentResult &r, std::ostream &out) {
  for (const auto &[key, value] : r.metadata) {
    out << key << '=' << value << '\n';
  }
}

void emit_metadata(const ExperimentResult &r, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  emit_metadata(r, out);
  out.close();
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

} // namespace ritzbound
