#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ritzbound/extraction.hpp"
#include "ritzbound/linalg.hpp"

namespace ritzbound {

enum class GapMode { exact, approximate };

/// Where the tail gap eta_i came from.
enum class GapSource {
  tail_spectrum,        ///< exact lambda(A2) / sigma(A2)
  tail_estimate,        ///< stand-in values carried by the perturbation
  farthest_ritz_value,  ///< max_k |theta_i - theta_k| (symmetric, no tail data)
  nearest_ritz_value,   ///< min_{k != i} |theta_i - theta_k| (singular values)
};

/// Gap quantities entering the quadratic bounds. All stored values are the
/// post-offset quantities used in denominators.
struct GapData {
  GapMode mode = GapMode::exact;
  GapSource source = GapSource::tail_spectrum;
  DenseVector eta;          ///< distance from theta_i to the tail spectrum
  DenseVector delta;        ///< delta_i
  DenseMatrix delta_pair;   ///< delta_{i,j}; diagonal unused
  DenseMatrix delta_prime;  ///< delta'_{i,j}; singular value case only
  std::optional<DenseVector> classical_gap;  ///< distance to spec(A) minus the closest eigenvalue

  [[nodiscard]] Index size() const noexcept { return eta.size(); }
};

/// A bound, or the marker that its positivity preconditions fail.
class BoundValue {
public:
  static BoundValue not_applicable() { return BoundValue(); }
  /// Non-finite or negative values collapse to not_applicable.
  static BoundValue of(double value, std::optional<double> amplification = std::nullopt);

  [[nodiscard]] bool applicable() const noexcept { return value_.has_value(); }
  [[nodiscard]] double value() const { return value_.value(); }
  [[nodiscard]] std::optional<double> get() const noexcept { return value_; }
  /// d_i (or d_I) for the residual-weighted bounds.
  [[nodiscard]] std::optional<double> amplification() const noexcept { return amplification_; }

private:
  std::optional<double> value_;
  std::optional<double> amplification_;
};

using BoundList = std::vector<BoundValue>;

/// Contiguous index range [begin, end) of Ritz values inside
/// [center - radius, center + radius].
struct ClusterSpec {
  Index begin = 0;
  Index end = 0;
  double center = 0.0;
  double radius = 0.0;

  [[nodiscard]] Index size() const noexcept { return end - begin; }
  [[nodiscard]] bool contains(Index i) const noexcept { return i >= begin && i < end; }
};

enum class BoundKind {
  thm_main,
  thm_cluster,
  thm_svd,
  weyl,
  lili,
  offdiag_quadratic,
  classical,
  asymptotic,
};

inline constexpr std::array<BoundKind, 8> kAllBoundKinds = {
    BoundKind::thm_main,  BoundKind::thm_cluster,       BoundKind::thm_svd,
    BoundKind::weyl,      BoundKind::lili,              BoundKind::offdiag_quadratic,
    BoundKind::classical, BoundKind::asymptotic,
};

std::string_view to_string(BoundKind kind) noexcept;
std::string_view to_string(GapMode mode) noexcept;

/// True for bounds that hold for the sorted-order matching whenever they are
/// applicable. Approximate gaps are estimates, so nothing computed from them
/// is guaranteed. Weyl per column and the classical bound refer to the nearest
/// eigenvalue rather than the matched one; the off-diagonal bound substitutes
/// theta for the unknown singular value; the asymptotic estimate is first order.
constexpr bool is_guaranteed(BoundKind kind, GapMode mode) noexcept {
  if (mode != GapMode::exact) {
    return false;
  }
  return kind == BoundKind::thm_main || kind == BoundKind::thm_cluster ||
         kind == BoundKind::thm_svd || kind == BoundKind::lili;
}

using BoundTable = std::map<BoundKind, BoundList>;

// -- gaps ---------------------------------------------------------------------

/// Gaps for the symmetric structure. `full_spectrum`, when non-empty, is the
/// spectrum of A and enables the classical gap.
GapData gaps_symmetric(const SymmetricPerturbation &p, GapMode mode,
                       std::span<const double> full_spectrum = {});

GapData gaps_svd(const SvdPerturbation &p, GapMode mode);

/// min_j |x - lambda_j(A2)| under the rules of `mode` (used for cluster centers).
double tail_distance(const SymmetricPerturbation &p, GapMode mode, double x);

// -- residual-weighted bounds ---------------------------------------------------

/// Per-index bound d_i ||E_i||^2 with
/// d_i = 1 / (delta_i - sum_{j != i} ||E_j||^2 / delta_{i,j}).
BoundList bound_thm_main(const SymmetricPerturbation &p, const GapData &g);

/// Joint bound d_I ||E_I||^2 for every index of each cluster; indices outside
/// all clusters are treated as singleton clusters with zero radius.
/// Throws InvalidArgument for overlapping or inconsistent clusters.
BoundList bound_thm_cluster(const SymmetricPerturbation &p, std::span<const ClusterSpec> clusters,
                            const GapData &g);

/// Groups consecutive Ritz values whose distance is at most
/// relative_threshold * (theta_max - theta_min). Only groups with two or more
/// members are returned; center is the midpoint and radius the half-width.
std::vector<ClusterSpec> detect_clusters(const DenseVector &theta,
                                         double relative_threshold = 1e-6);

/// Singular value bound d_i (||E_i||^2 + ||F_i||^2) / 2.
BoundList bound_thm_svd(const SvdPerturbation &p, const GapData &g);

// -- comparison bounds ----------------------------------------------------------

/// ||E_i||_2.
BoundList bound_weyl(const DenseVector &residual_norms);
/// max(||E_i||_2, ||F_i||_2).
BoundList bound_weyl(const DenseVector &residual_norms_e, const DenseVector &residual_norms_f);

/// 2||E||^2 / (eta_i + sqrt(eta_i^2 + 4||E||^2)) with the block norm ||E||_2.
BoundList bound_lili(const SymmetricPerturbation &p, const GapData &g);
/// Same with M = max(||E||_2, ||F||_2).
BoundList bound_lili(const SvdPerturbation &p, const GapData &g);

/// 2M^2 / (gap_i - 2M), theta_i standing in for sigma_i in the gap.
BoundList bound_offdiag_quadratic(const SvdPerturbation &p, const GapData &g);

/// ||E_i||^2 / classical_gap_i. Throws InvalidArgument without the classical gap.
BoundList bound_classical(const SymmetricPerturbation &p, const GapData &g);

/// First-order estimate ||E_i||^2 / eta_i (not a guaranteed bound).
BoundList bound_asymptotic(const SymmetricPerturbation &p, const GapData &g);
/// (||E_i||^2 + ||F_i||^2) / (2 min(theta_i, eta_i)).
BoundList bound_asymptotic(const SvdPerturbation &p, const GapData &g);

/// Spectral norm of the residual block, or the Frobenius norm of the residual
/// norms when no block is stored (an upper bound).
double residual_block_norm(const SymmetricPerturbation &p);
double residual_block_norm_e(const SvdPerturbation &p);
double residual_block_norm_f(const SvdPerturbation &p);

/// [[0, A], [A^T, 0]].
DenseMatrix jordan_wielandt_augment(const DenseMatrix &a);

/// Every bound applicable to the symmetric structure. The classical bound is
/// included only when `g` carries the classical gap.
BoundTable symmetric_bounds(const SymmetricPerturbation &p, const GapData &g,
                            std::span<const ClusterSpec> clusters = {});

BoundTable svd_bounds(const SvdPerturbation &p, const GapData &g);

// -- reporting ----------------------------------------------------------------

struct BoundReport {
  Index index = 0;  ///< zero-based position in theta
  double theta = 0.0;
  double residual_e = 0.0;
  std::optional<double> residual_f;
  std::optional<double> exact_value;
  std::optional<double> exact_error;
  GapMode mode = GapMode::exact;
  /// Square singular value problem handled as if padded by one zero row.
  bool square_augmented = false;
  std::map<BoundKind, BoundValue> bounds;
};

/// Matches theta_i to the exact values by sorted order from the target end of
/// `exact_spectrum` (its own ordering: ascending for smallest-k, descending for
/// largest-k) and collects all bounds per index.
///
/// With a tail spectrum, theta_i is matched by its rank among theta and the
/// tail values, i.e. to the eigenvalue it becomes as the off-diagonal blocks are
/// switched on. This is plain sorted order whenever the Ritz values lie beyond
/// the tail.
std::vector<BoundReport> match_and_report(const DenseVector &theta,
                                          const DenseVector &residual_norms_e,
                                          const std::optional<DenseVector> &residual_norms_f,
                                          const std::optional<Spectrum> &exact_spectrum,
                                          const BoundTable &bounds, GapMode mode,
                                          const std::optional<Spectrum> &tail_spectrum = {});

std::vector<BoundReport> match_and_report(const SymmetricPerturbation &p,
                                          const std::optional<Spectrum> &exact_spectrum,
                                          const BoundTable &bounds, GapMode mode);

std::vector<BoundReport> match_and_report(const SvdPerturbation &p,
                                          const std::optional<Spectrum> &exact_spectrum,
                                          const BoundTable &bounds, GapMode mode);

/// exact_error <= bound + slack, or true when either side is absent.
bool covers(const BoundReport &report, BoundKind kind, double slack);

} // namespace ritzbound
