#include "ritzbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ritzbound/error.hpp"

namespace ritzbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier summation over the terms taken by decreasing magnitude.
double compensated_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  double sum = 0.0;
  double carry = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      carry += (sum - s) + t;
    } else {
      carry += (t - s) + sum;
    }
    sum = s;
  }
  return sum + carry;
}

// 1 / (delta - sum(weights / gaps)) if every gap and the result are positive.
std::optional<double> amplification(double delta, const std::vector<double> &weights,
                                    const std::vector<double> &gaps) {
  if (!(delta > 0.0)) {
    return std::nullopt;
  }
  std::vector<double> terms;
  terms.reserve(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(gaps[j] > 0.0)) {
      return std::nullopt;
    }
    terms.push_back(weights[j] / gaps[j]);
  }
  const double denom = delta - compensated_sum(std::move(terms));
  if (!(denom > 0.0)) {
    return std::nullopt;
  }
  const double d = 1.0 / denom;
  if (!std::isfinite(d)) {
    return std::nullopt;
  }
  return d;
}

double min_distance(const DenseVector &values, double x) {
  double best = kInf;
  for (Index j = 0; j < values.size(); ++j) {
    best = std::min(best, std::abs(x - values[j]));
  }
  return best;
}

double farthest(const DenseVector &theta, double x) {
  double best = 0.0;
  for (Index j = 0; j < theta.size(); ++j) {
    best = std::max(best, std::abs(x - theta[j]));
  }
  return best;
}

void require_size(const DenseVector &v, Index k, const char *what) {
  if (v.size() != k) {
    throw InvalidArgument(std::string(what) + ": length mismatch (" + std::to_string(v.size()) +
                          " vs " + std::to_string(k) + ")");
  }
}

void require_gaps(const GapData &g, Index k, const char *what) {
  if (g.size() != k || g.delta.size() != k || g.delta_pair.rows() != k ||
      g.delta_pair.cols() != k) {
    throw InvalidArgument(std::string(what) + ": gap data does not match the structure size");
  }
}

DenseVector svd_weights(const SvdPerturbation &p) {
  return (p.residual_norms_e.array().square() + p.residual_norms_f.array().square()).matrix();
}

BoundList lili_from_norm(const DenseVector &eta, double norm) {
  BoundList out;
  out.reserve(static_cast<std::size_t>(eta.size()));
  const double e2 = norm * norm;
  for (Index i = 0; i < eta.size(); ++i) {
    if (e2 == 0.0) {
      out.push_back(BoundValue::of(0.0));
      continue;
    }
    const double eta_i = eta[i];
    out.push_back(BoundValue::of(2.0 * e2 / (eta_i + std::sqrt(eta_i * eta_i + 4.0 * e2))));
  }
  return out;
}

} // namespace

BoundValue BoundValue::of(double value, std::optional<double> amplification) {
  if (!std::isfinite(value) || value < 0.0) {
    return not_applicable();
  }
  BoundValue b;
  b.value_ = value;
  b.amplification_ = amplification;
  return b;
}

std::string_view to_string(BoundKind kind) noexcept {
  switch (kind) {
  case BoundKind::thm_main: return "thm_main";
  case BoundKind::thm_cluster: return "thm_cluster";
  case BoundKind::thm_svd: return "thm_svd";
  case BoundKind::weyl: return "weyl";
  case BoundKind::lili: return "lili";
  case BoundKind::offdiag_quadratic: return "offdiag_quadratic";
  case BoundKind::classical: return "classical";
  case BoundKind::asymptotic: return "asymptotic";
  }
  return "unknown";
}

std::string_view to_string(GapMode mode) noexcept {
  return mode == GapMode::exact ? "exact" : "approximate";
}

double tail_distance(const SymmetricPerturbation &p, GapMode mode, double x) {
  if (mode == GapMode::exact) {
    if (!p.tail_spectrum) {
      throw InvalidArgument("exact gap mode requires the tail spectrum");
    }
    return min_distance(p.tail_spectrum->values(), x);
  }
  if (p.tail_estimate && !p.tail_estimate->empty()) {
    return min_distance(p.tail_estimate->values(), x);
  }
  return farthest(p.theta, x);
}

GapData gaps_symmetric(const SymmetricPerturbation &p, GapMode mode,
                       std::span<const double> full_spectrum) {
  const Index k = p.size();
  require_size(p.residual_norms, k, "gaps_symmetric");
  GapData g;
  g.mode = mode;
  if (mode == GapMode::exact) {
    g.source = GapSource::tail_spectrum;
  } else {
    g.source = p.tail_estimate && !p.tail_estimate->empty() ? GapSource::tail_estimate
                                                            : GapSource::farthest_ritz_value;
  }
  g.eta.resize(k);
  g.delta.resize(k);
  g.delta_pair = DenseMatrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) {
    const double e = p.residual_norms[i];
    g.eta[i] = tail_distance(p, mode, p.theta[i]);
    g.delta[i] = g.eta[i] - e;
    for (Index j = 0; j < k; ++j) {
      if (j != i) {
        g.delta_pair(i, j) = std::abs(p.theta[i] - p.theta[j]) - e;
      }
    }
  }
  if (mode == GapMode::exact && !full_spectrum.empty()) {
    DenseVector gap(k);
    for (Index i = 0; i < k; ++i) {
      const double t = p.theta[i];
      std::size_t closest = 0;
      for (std::size_t j = 1; j < full_spectrum.size(); ++j) {
        if (std::abs(t - full_spectrum[j]) < std::abs(t - full_spectrum[closest])) {
          closest = j;
        }
      }
      double best = kInf;
      for (std::size_t j = 0; j < full_spectrum.size(); ++j) {
        if (j != closest) {
          best = std::min(best, std::abs(t - full_spectrum[j]));
        }
      }
      gap[i] = best;
    }
    g.classical_gap = std::move(gap);
  }
  return g;
}

GapData gaps_svd(const SvdPerturbation &p, GapMode mode) {
  const Index k = p.size();
  require_size(p.residual_norms_e, k, "gaps_svd");
  require_size(p.residual_norms_f, k, "gaps_svd");
  if (mode == GapMode::exact && !p.tail_spectrum) {
    throw InvalidArgument("exact gap mode requires the tail spectrum");
  }
  GapData g;
  g.mode = mode;
  g.source = mode == GapMode::exact ? GapSource::tail_spectrum : GapSource::nearest_ritz_value;
  g.eta.resize(k);
  g.delta.resize(k);
  g.delta_pair = DenseMatrix::Zero(k, k);
  g.delta_prime = DenseMatrix::Zero(k, k);
  const DenseVector w = svd_weights(p);
  for (Index i = 0; i < k; ++i) {
    const double t = p.theta[i];
    const double s = std::sqrt(0.5 * w[i]);
    if (mode == GapMode::exact) {
      g.eta[i] = min_distance(p.tail_spectrum->values(), t);
    } else {
      double best = kInf;
      for (Index j = 0; j < k; ++j) {
        if (j != i) {
          best = std::min(best, std::abs(t - p.theta[j]));
        }
      }
      g.eta[i] = best;
    }
    g.delta[i] = std::min(std::abs(t), g.eta[i]) - s;
    for (Index j = 0; j < k; ++j) {
      if (j != i) {
        g.delta_pair(i, j) = std::abs(t - p.theta[j]) - s;
      }
      g.delta_prime(i, j) = std::abs(t + p.theta[j]) - s;
    }
  }
  return g;
}

BoundList bound_thm_main(const SymmetricPerturbation &p, const GapData &g) {
  const Index k = p.size();
  require_size(p.residual_norms, k, "bound_thm_main");
  require_gaps(g, k, "bound_thm_main");
  BoundList out;
  out.reserve(static_cast<std::size_t>(k));
  std::vector<double> weights;
  std::vector<double> gaps;
  for (Index i = 0; i < k; ++i) {
    weights.clear();
    gaps.clear();
    for (Index j = 0; j < k; ++j) {
      if (j != i) {
        const double e = p.residual_norms[j];
        weights.push_back(e * e);
        gaps.push_back(g.delta_pair(i, j));
      }
    }
    const auto d = amplification(g.delta[i], weights, gaps);
    if (!d) {
      out.push_back(BoundValue::not_applicable());
      continue;
    }
    const double e = p.residual_norms[i];
    out.push_back(BoundValue::of(*d * (e * e), *d));
  }
  return out;
}

BoundList bound_thm_cluster(const SymmetricPerturbation &p, std::span<const ClusterSpec> clusters,
                            const GapData &g) {
  const Index k = p.size();
  require_size(p.residual_norms, k, "bound_thm_cluster");
  require_gaps(g, k, "bound_thm_cluster");

  std::vector<int> owner(static_cast<std::size_t>(k), -1);
  const double slack = 4.0 * kUnitRoundoff * std::max(1.0, p.theta.cwiseAbs().maxCoeff());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const ClusterSpec &cs = clusters[c];
    if (cs.begin < 0 || cs.end > k || cs.begin >= cs.end) {
      throw InvalidArgument("bound_thm_cluster: cluster index range is empty or out of bounds");
    }
    if (!(cs.radius >= 0.0) || !std::isfinite(cs.center)) {
      throw InvalidArgument("bound_thm_cluster: cluster radius must be nonnegative");
    }
    for (Index i = cs.begin; i < cs.end; ++i) {
      if (owner[static_cast<std::size_t>(i)] != -1) {
        throw InvalidArgument("bound_thm_cluster: clusters overlap at index " +
                              std::to_string(i));
      }
      if (std::abs(p.theta[i] - cs.center) > cs.radius + slack) {
        throw InvalidArgument("bound_thm_cluster: theta[" + std::to_string(i) +
                              "] lies outside its cluster interval");
      }
      owner[static_cast<std::size_t>(i)] = static_cast<int>(c);
    }
  }

  std::vector<ClusterSpec> all;
  for (Index i = 0; i < k;) {
    const int c = owner[static_cast<std::size_t>(i)];
    if (c >= 0) {
      all.push_back(clusters[static_cast<std::size_t>(c)]);
      i = clusters[static_cast<std::size_t>(c)].end;
    } else {
      all.push_back(ClusterSpec{i, i + 1, p.theta[i], 0.0});
      ++i;
    }
  }

  BoundList out(static_cast<std::size_t>(k), BoundValue::not_applicable());
  std::vector<double> weights;
  std::vector<double> gaps;
  for (const ClusterSpec &cs : all) {
    double norm_i = 0.0;
    if (cs.size() == 1) {
      norm_i = p.residual_norms[cs.begin];
    } else if (p.residual_block) {
      norm_i = spectral_norm(p.residual_block->middleCols(cs.begin, cs.size()));
    } else {
      norm_i = p.residual_norms.segment(cs.begin, cs.size()).norm();
    }
    const double delta = tail_distance(p, g.mode, cs.center) - cs.radius - norm_i;
    weights.clear();
    gaps.clear();
    for (Index j = 0; j < k; ++j) {
      if (!cs.contains(j)) {
        const double e = p.residual_norms[j];
        weights.push_back(e * e);
        gaps.push_back(std::abs(p.theta[j] - cs.center) - cs.radius - norm_i);
      }
    }
    const auto d = amplification(delta, weights, gaps);
    if (!d) {
      continue;
    }
    const BoundValue v = BoundValue::of(*d * (norm_i * norm_i), *d);
    for (Index i = cs.begin; i < cs.end; ++i) {
      out[static_cast<std::size_t>(i)] = v;
    }
  }
  return out;
}

std::vector<ClusterSpec> detect_clusters(const DenseVector &theta, double relative_threshold) {
  std::vector<ClusterSpec> out;
  const Index k = theta.size();
  if (k < 2) {
    return out;
  }
  const double spread = theta.maxCoeff() - theta.minCoeff();
  const double tau = relative_threshold * spread;
  Index begin = 0;
  const auto close_group = [&](Index end) {
    if (end - begin >= 2) {
      const double lo = theta.segment(begin, end - begin).minCoeff();
      const double hi = theta.segment(begin, end - begin).maxCoeff();
      const double center = 0.5 * (lo + hi);
      const double radius = std::max(hi - center, center - lo);
      out.push_back(ClusterSpec{begin, end, center, radius});
    }
    begin = end;
  };
  for (Index i = 1; i < k; ++i) {
    if (std::abs(theta[i] - theta[i - 1]) > tau) {
      close_group(i);
    }
  }
  close_group(k);
  return out;
}

BoundList bound_thm_svd(const SvdPerturbation &p, const GapData &g) {
  const Index k = p.size();
  require_size(p.residual_norms_e, k, "bound_thm_svd");
  require_size(p.residual_norms_f, k, "bound_thm_svd");
  require_gaps(g, k, "bound_thm_svd");
  if (g.delta_prime.rows() != k || g.delta_prime.cols() != k) {
    throw InvalidArgument("bound_thm_svd: gap data lacks the sum gaps");
  }
  const DenseVector w = svd_weights(p);
  BoundList out;
  out.reserve(static_cast<std::size_t>(k));
  std::vector<double> weights;
  std::vector<double> gaps;
  for (Index i = 0; i < k; ++i) {
    weights.clear();
    gaps.clear();
    for (Index j = 0; j < k; ++j) {
      if (j != i) {
        weights.push_back(0.5 * w[j]);
        gaps.push_back(g.delta_pair(i, j));
      }
      weights.push_back(0.5 * w[j]);
      gaps.push_back(g.delta_prime(i, j));
    }
    const auto d = amplification(g.delta[i], weights, gaps);
    if (!d) {
      out.push_back(BoundValue::not_applicable());
      continue;
    }
    out.push_back(BoundValue::of(*d * (0.5 * w[i]), *d));
  }
  return out;
}

BoundList bound_weyl(const DenseVector &residual_norms) {
  BoundList out;
  out.reserve(static_cast<std::size_t>(residual_norms.size()));
  for (Index i = 0; i < residual_norms.size(); ++i) {
    out.push_back(BoundValue::of(residual_norms[i]));
  }
  return out;
}

BoundList bound_weyl(const DenseVector &residual_norms_e, const DenseVector &residual_norms_f) {
  require_size(residual_norms_f, residual_norms_e.size(), "bound_weyl");
  BoundList out;
  out.reserve(static_cast<std::size_t>(residual_norms_e.size()));
  for (Index i = 0; i < residual_norms_e.size(); ++i) {
    out.push_back(BoundValue::of(std::max(residual_norms_e[i], residual_norms_f[i])));
  }
  return out;
}

double residual_block_norm(const SymmetricPerturbation &p) {
  if (p.residual_block && p.residual_block->size() > 0) {
    return spectral_norm(*p.residual_block);
  }
  return p.residual_norms.norm();
}

double residual_block_norm_e(const SvdPerturbation &p) {
  if (p.e_block_zero) {
    return 0.0;
  }
  if (p.e_block && p.e_block->size() > 0) {
    return spectral_norm(*p.e_block);
  }
  return p.residual_norms_e.norm();
}

double residual_block_norm_f(const SvdPerturbation &p) {
  if (p.f_block && p.f_block->size() > 0) {
    return spectral_norm(*p.f_block);
  }
  return p.residual_norms_f.norm();
}

BoundList bound_lili(const SymmetricPerturbation &p, const GapData &g) {
  require_gaps(g, p.size(), "bound_lili");
  return lili_from_norm(g.eta, residual_block_norm(p));
}

BoundList bound_lili(const SvdPerturbation &p, const GapData &g) {
  require_gaps(g, p.size(), "bound_lili");
  return lili_from_norm(g.eta, std::max(residual_block_norm_e(p), residual_block_norm_f(p)));
}

BoundList bound_offdiag_quadratic(const SvdPerturbation &p, const GapData &g) {
  require_gaps(g, p.size(), "bound_offdiag_quadratic");
  const double m = std::max(residual_block_norm_e(p), residual_block_norm_f(p));
  BoundList out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (Index i = 0; i < p.size(); ++i) {
    const double denom = g.eta[i] - 2.0 * m;
    if (m == 0.0) {
      out.push_back(BoundValue::of(0.0));
    } else if (denom > 0.0) {
      out.push_back(BoundValue::of(2.0 * m * m / denom));
    } else {
      out.push_back(BoundValue::not_applicable());
    }
  }
  return out;
}

BoundList bound_classical(const SymmetricPerturbation &p, const GapData &g) {
  if (!g.classical_gap) {
    throw InvalidArgument("bound_classical: requires the full spectrum of A (exact gap mode)");
  }
  require_size(*g.classical_gap, p.size(), "bound_classical");
  BoundList out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (Index i = 0; i < p.size(); ++i) {
    const double e = p.residual_norms[i];
    const double gap = (*g.classical_gap)[i];
    if (e == 0.0) {
      out.push_back(BoundValue::of(0.0));
    } else if (gap > 0.0) {
      out.push_back(BoundValue::of(e * e / gap));
    } else {
      out.push_back(BoundValue::not_applicable());
    }
  }
  return out;
}

BoundList bound_asymptotic(const SymmetricPerturbation &p, const GapData &g) {
  require_gaps(g, p.size(), "bound_asymptotic");
  BoundList out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (Index i = 0; i < p.size(); ++i) {
    const double e = p.residual_norms[i];
    if (e == 0.0) {
      out.push_back(BoundValue::of(0.0));
    } else if (g.eta[i] > 0.0) {
      out.push_back(BoundValue::of(e * e / g.eta[i]));
    } else {
      out.push_back(BoundValue::not_applicable());
    }
  }
  return out;
}

BoundList bound_asymptotic(const SvdPerturbation &p, const GapData &g) {
  require_gaps(g, p.size(), "bound_asymptotic");
  const DenseVector w = svd_weights(p);
  BoundList out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (Index i = 0; i < p.size(); ++i) {
    const double gap = std::min(std::abs(p.theta[i]), g.eta[i]);
    if (w[i] == 0.0) {
      out.push_back(BoundValue::of(0.0));
    } else if (gap > 0.0) {
      out.push_back(BoundValue::of(0.5 * w[i] / gap));
    } else {
      out.push_back(BoundValue::not_applicable());
    }
  }
  return out;
}

DenseMatrix jordan_wielandt_augment(const DenseMatrix &a) {
  const Index m = a.rows();
  const Index n = a.cols();
  DenseMatrix out = DenseMatrix::Zero(m + n, m + n);
  out.topRightCorner(m, n) = a;
  out.bottomLeftCorner(n, m) = a.transpose();
  return out;
}

BoundTable symmetric_bounds(const SymmetricPerturbation &p, const GapData &g,
                            std::span<const ClusterSpec> clusters) {
  BoundTable t;
  t[BoundKind::thm_main] = bound_thm_main(p, g);
  t[BoundKind::thm_cluster] = bound_thm_cluster(p, clusters, g);
  t[BoundKind::weyl] = bound_weyl(p.residual_norms);
  t[BoundKind::lili] = bound_lili(p, g);
  if (g.classical_gap) {
    t[BoundKind::classical] = bound_classical(p, g);
  }
  t[BoundKind::asymptotic] = bound_asymptotic(p, g);
  return t;
}

BoundTable svd_bounds(const SvdPerturbation &p, const GapData &g) {
  BoundTable t;
  t[BoundKind::thm_svd] = bound_thm_svd(p, g);
  t[BoundKind::weyl] = bound_weyl(p.residual_norms_e, p.residual_norms_f);
  t[BoundKind::lili] = bound_lili(p, g);
  t[BoundKind::offdiag_quadratic] = bound_offdiag_quadratic(p, g);
  t[BoundKind::asymptotic] = bound_asymptotic(p, g);
  return t;
}

std::vector<BoundReport> match_and_report(const DenseVector &theta,
                                          const DenseVector &residual_norms_e,
                                          const std::optional<DenseVector> &residual_norms_f,
                                          const std::optional<Spectrum> &exact_spectrum,
                                          const BoundTable &bounds, GapMode mode,
                                          const std::optional<Spectrum> &tail_spectrum) {
  const Index k = theta.size();
  require_size(residual_norms_e, k, "match_and_report");
  if (residual_norms_f) {
    require_size(*residual_norms_f, k, "match_and_report");
  }
  if (exact_spectrum && exact_spectrum->size() < k) {
    throw InvalidArgument("match_and_report: exact spectrum shorter than theta");
  }
  for (const auto &[kind, list] : bounds) {
    if (static_cast<Index>(list.size()) != k) {
      throw InvalidArgument("match_and_report: bound list for " + std::string(to_string(kind)) +
                            " has the wrong length");
    }
  }
  // theta is sorted; read the exact values from the same end in the same direction.
  const bool theta_ascending = k < 2 || theta[0] <= theta[k - 1];
  const bool reversed =
      exact_spectrum &&
      (exact_spectrum->order() == SortOrder::ascending) != theta_ascending;

  std::vector<BoundReport> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    BoundReport r;
    r.index = i;
    r.theta = theta[i];
    r.residual_e = residual_norms_e[i];
    if (residual_norms_f) {
      r.residual_f = (*residual_norms_f)[i];
    }
    r.mode = mode;
    if (exact_spectrum) {
      // Rank of theta_i among theta and the tail spectrum, counted from the target end.
      Index pos = i;
      if (tail_spectrum) {
        for (Index j = 0; j < tail_spectrum->size(); ++j) {
          const double t = (*tail_spectrum)[j];
          pos += theta_ascending ? (t < theta[i]) : (t > theta[i]);
        }
      }
      pos = std::min(pos, exact_spectrum->size() - 1);
      const double exact = (*exact_spectrum)[reversed ? exact_spectrum->size() - 1 - pos : pos];
      r.exact_value = exact;
      r.exact_error = std::abs(exact - theta[i]);
    }
    for (const auto &[kind, list] : bounds) {
      r.bounds.emplace(kind, list[static_cast<std::size_t>(i)]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundReport> match_and_report(const SymmetricPerturbation &p,
                                          const std::optional<Spectrum> &exact_spectrum,
                                          const BoundTable &bounds, GapMode mode) {
  return match_and_report(p.theta, p.residual_norms, std::nullopt, exact_spectrum, bounds, mode,
                          p.tail_spectrum);
}

std::vector<BoundReport> match_and_report(const SvdPerturbation &p,
                                          const std::optional<Spectrum> &exact_spectrum,
                                          const BoundTable &bounds, GapMode mode) {
  auto out = match_and_report(p.theta, p.residual_norms_e, p.residual_norms_f, exact_spectrum,
                              bounds, mode, p.tail_spectrum);
  if (p.square()) {
    for (BoundReport &r : out) {
      r.square_augmented = true;
    }
  }
  return out;
}

bool covers(const BoundReport &report, BoundKind kind, double slack) {
  const auto it = report.bounds.find(kind);
  if (!report.exact_error || it == report.bounds.end() || !it->second.applicable()) {
    return true;
  }
  return *report.exact_error <= it->second.value() + slack;
}

} // namespace ritzbound
