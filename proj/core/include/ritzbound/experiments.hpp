#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ritzbound/bounds.hpp"
#include "ritzbound/error.hpp"
#include "ritzbound/linalg.hpp"

namespace ritzbound {

enum class Scenario {
  eig_uniform,
  eig_cluster,
  eig_lanczos,
  svd_pg,
  svd_hmt,
  svd_pg_vs_hmt,
  sharpness,
};

enum class GapSelection { exact, approximate, both };

/// Block method used to build the trial subspace in the eigenvalue scenarios.
enum class EigMethod { subspace, lobpcg };

enum class Scale { desk, full };

/// Column layout of the CSV output.
enum class Family { symmetric, svd, sharpness };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(GapSelection g) noexcept;
std::string_view to_string(EigMethod m) noexcept;
std::optional<Scenario> parse_scenario(std::string_view name);
std::optional<GapSelection> parse_gap_selection(std::string_view name);
std::optional<EigMethod> parse_eig_method(std::string_view name);

Family family_of(Scenario s) noexcept;

/// Rejected configuration; raised before any numerical work starts.
class ConfigError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::eig_uniform;
  Index n = 300;
  Index m = 0;     ///< rows, singular value scenarios only
  Index k = 30;
  Index keep = 30; ///< Ritz values kept in the leading block
  Index iters = 60;
  int power_passes = 1;
  double kappa = 1e12;
  std::uint64_t seed = 0;
  GapSelection gap_mode = GapSelection::both;
  EigMethod method = EigMethod::subspace;
  /// Perturbation sizes for the sharpness scenario.
  std::vector<double> epsilons = {1e-3, 1e-4, 1e-5};
};

/// Default configuration of a scenario. Full-size presets take minutes to hours.
ExperimentConfig default_config(Scenario s, Scale scale = Scale::desk);

/// Throws ConfigError with a one-line reason (e.g. "k must not exceed n").
void validate(const ExperimentConfig &cfg);

struct ExperimentRow {
  std::string variant;  ///< extraction that produced the row (rr, lanczos, pg, hmt, eps=...)
  Index index = 0;      ///< zero-based
  double theta = 0.0;
  std::optional<double> exact_value;
  std::optional<double> abs_error;
  double residual_e = 0.0;
  std::optional<double> residual_f;
  GapMode gap_mode = GapMode::exact;
  std::map<BoundKind, BoundValue> bounds;
  bool applicable = false;      ///< the main residual-weighted bound applies
  bool below_roundoff = false;  ///< abs_error < 1e3 u ||A||
  std::optional<double> epsilon;
  std::optional<double> eta;  ///< gap eta_i used by the bounds
};

struct ExperimentResult {
  Family family = Family::symmetric;
  std::vector<ExperimentRow> rows;
  /// Ordered key=value pairs for the sidecar file.
  std::vector<std::pair<std::string, std::string>> metadata;
  double norm_a = 0.0;
};

/// Slack allowed between error and bound: 64 u ||A||.
double soundness_slack(double norm_a) noexcept;
/// Errors below 1e3 u ||A|| are attributed to rounding.
double roundoff_floor(double norm_a) noexcept;

/// Runs the full pipeline. Deterministic in (cfg, cfg.seed).
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// Guaranteed-bound violations among rows that are not below_roundoff.
std::size_t count_violations(const ExperimentResult &r);

std::vector<std::string> csv_header(Family f);
void emit_csv(const ExperimentResult &r, std::ostream &out);
/// Writes the CSV to `path`; throws Error naming the path on failure.
void emit_csv(const ExperimentResult &r, const std::filesystem::path &path);
void emit_metadata(const ExperimentResult &r, std::ostream &out);
void emit_metadata(const ExperimentResult &r, const std::filesystem::path &path);

/// "%.17g"; empty for a missing value.
std::string format_number(std::optional<double> v);

} // namespace ritzbound
