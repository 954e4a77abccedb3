#include "ritzbound/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ritzbound/error.hpp"
#include "ritzbound/extraction.hpp"

namespace ritzbound {

namespace {

constexpr Index kShiftLanczosSteps = 30;
constexpr double kConvergedResidual = 1e-14;
constexpr std::uint64_t kShiftSeedSalt = 0x9e3779b97f4a7c15ULL;

// Orthonormalizes the columns of `m`; dependent columns are replaced by fresh
// Gaussian directions so that the result always has m.cols() columns.
DenseMatrix orth_with_refill(const DenseMatrix &m, SeededRng &rng, IterationStats &stats) {
  OrthonormalizeResult r = orthonormalize_columns(m);
  while (r.basis.cols() < m.cols()) {
    const Index missing = m.cols() - r.basis.cols();
    stats.rerandomized_columns += missing;
    DenseMatrix padded(m.rows(), m.cols());
    padded << r.basis, gaussian_matrix(m.rows(), missing, rng);
    r = orthonormalize_columns(padded);
  }
  return std::move(r.basis);
}

double abs_scale(const DenseMatrix &a) {
  const auto [lo, hi] = gershgorin_interval(a);
  return std::max(std::abs(lo), std::abs(hi));
}

} // namespace

double subspace_iteration_shift(const DenseMatrix &a, Target target, std::uint64_t seed) {
  const auto [lo, hi] = gershgorin_interval(a);
  const Index n = a.rows();
  SeededRng rng(seed ^ kShiftSeedSalt);
  DenseVector v0(n);
  for (Index i = 0; i < n; ++i) {
    v0[i] = rng.gaussian();
  }
  const LanczosFactorization f = lanczos(a, v0, std::min(n, kShiftLanczosSteps));
  const SymEig t = sym_eig(f.tridiagonal());
  const Index k = f.size();
  const auto residual = [&](Index i) {
    return f.next_vector ? std::abs(f.coupling * t.vectors(k - 1, i)) : 0.0;
  };
  if (target == Target::smallest) {
    return std::min(hi, t.values[k - 1] + residual(k - 1));
  }
  return std::max(lo, t.values[0] - residual(0));
}

SubspaceResult subspace_iteration(const DenseMatrix &a, const IterationConfig &cfg) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("subspace_iteration: matrix must be square");
  }
  require_finite(a, "subspace_iteration");
  const Index n = a.rows();
  const Index k = cfg.block_size;
  if (k < 1 || k > n) {
    throw InvalidArgument("subspace_iteration: block size must lie in [1, n]");
  }
  if (cfg.max_iters < 1) {
    throw InvalidArgument("subspace_iteration: max_iters must be at least 1");
  }

  SubspaceResult out;
  SeededRng rng(cfg.seed);
  DenseMatrix q = orth_with_refill(gaussian_matrix(n, k, rng), rng, out.stats);
  const double shift = subspace_iteration_shift(a, cfg.target, cfg.seed);
  for (Index it = 0; it < cfg.max_iters; ++it) {
    DenseMatrix y = a * q;
    if (cfg.target == Target::smallest) {
      y = shift * q - y;
    } else {
      y -= shift * q;
    }
    q = orth_with_refill(y, rng, out.stats);
  }
  out.basis = std::move(q);
  return out;
}

SubspaceResult lobpcg_basic(const DenseMatrix &a, const DenseMatrix &x0, Index iters,
                            Target target) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("lobpcg_basic: matrix must be square");
  }
  require_finite(a, "lobpcg_basic");
  const Index n = a.rows();
  const Index k = x0.cols();
  if (x0.rows() != n || k < 1 || 3 * k > n) {
    throw InvalidArgument("lobpcg_basic: need an n x k start block with 1 <= k <= n/3");
  }
  if (orthonormality_defect(x0) > 1e-10) {
    throw InvalidArgument("lobpcg_basic: start block is not orthonormal");
  }

  // Always minimize; the largest end is the smallest end of -A.
  const double sign = target == Target::smallest ? 1.0 : -1.0;
  const DenseMatrix b = sign * a;
  const double scale = abs_scale(a);

  SubspaceResult out;
  SymEig rr = sym_eig(x0.transpose() * (b * x0));
  DenseMatrix x = x0 * rr.vectors;
  DenseVector theta = rr.values.values();
  DenseMatrix p(n, 0);

  for (Index it = 0; it < iters; ++it) {
    DenseMatrix r = b * x;
    r.noalias() -= x * theta.asDiagonal();

    std::vector<Index> active;
    for (Index j = 0; j < k; ++j) {
      if (r.col(j).norm() > kConvergedResidual * scale) {
        active.push_back(j);
      }
    }
    out.stats.dropped_residual_columns += k - static_cast<Index>(active.size());
    DenseMatrix r_active(n, static_cast<Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) {
      r_active.col(static_cast<Index>(j)) = r.col(active[j]);
    }

    DenseMatrix trial(n, k + r_active.cols() + p.cols());
    trial << x, r_active, p;
    OrthonormalizeResult basis = orthonormalize_columns(trial);
    if (!basis.dependent.empty() && p.cols() > 0) {
      ++out.stats.dropped_p_blocks;
      DenseMatrix reduced(n, k + r_active.cols());
      reduced << x, r_active;
      basis = orthonormalize_columns(reduced);
    }
    for (Index j = 0; j < k; ++j) {
      if (j >= static_cast<Index>(basis.kept.size()) || basis.kept[j] != j) {
        throw Error("lobpcg_basic: current block lost orthonormality");
      }
    }
    const auto trial_dim = static_cast<Index>(basis.kept.size());
    out.stats.dropped_residual_columns += static_cast<Index>(basis.dependent.size());

    const DenseMatrix &q = basis.basis;
    const SymEig projected = sym_eig(q.transpose() * (b * q));
    const DenseMatrix c = projected.vectors.leftCols(k);
    theta = projected.values.values().head(k);
    x = q * c;
    p = q.rightCols(trial_dim - k) * c.bottomRows(trial_dim - k);
    out.ritz_value_sums.push_back(sign * theta.sum());
  }
  out.basis = std::move(x);
  return out;
}

SketchResult sketch_subspaces(const DenseMatrix &a, Index k, int power_passes, SeededRng &rng) {
  require_finite(a, "sketch_subspaces");
  const Index m = a.rows();
  const Index n = a.cols();
  if (k < 1 || k > std::min(m, n)) {
    throw InvalidArgument("sketch_subspaces: k must lie in [1, min(m, n)]");
  }
  if (power_passes != 1 && power_passes != 2) {
    throw InvalidArgument("sketch_subspaces: power_passes must be 1 or 2");
  }
  SketchResult out;
  const DenseMatrix omega1 = gaussian_matrix(n, k, rng);
  const DenseMatrix omega2 = gaussian_matrix(m, k, rng);

  out.left = orth_with_refill(a * omega1, rng, out.stats);
  if (power_passes == 2) {
    const DenseMatrix z = orth_with_refill(a.transpose() * out.left, rng, out.stats);
    out.left = orth_with_refill(a * z, rng, out.stats);
  }
  out.right = orth_with_refill(a.transpose() * omega2, rng, out.stats);
  if (power_passes == 2) {
    const DenseMatrix z = orth_with_refill(a * out.right, rng, out.stats);
    out.right = orth_with_refill(a.transpose() * z, rng, out.stats);
  }
  return out;
}

} // namespace ritzbound
