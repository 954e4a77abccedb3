#pragma once

#include <cstdint>
#include <vector>

#include "ritzbound/linalg.hpp"

namespace ritzbound {

enum class Target { smallest, largest };

struct IterationConfig {
  Index block_size = 1;
  Index max_iters = 1;
  Target target = Target::smallest;
  int power_passes = 1;
  std::uint64_t seed = 0;
};

/// Counters for the degenerate-basis fallbacks taken during an iteration.
struct IterationStats {
  Index rerandomized_columns = 0;   ///< subspace iteration / sketch refills
  Index dropped_p_blocks = 0;       ///< LOBPCG iterations run without P
  Index dropped_residual_columns = 0;  ///< converged or dependent LOBPCG residuals
};

struct SubspaceResult {
  DenseMatrix basis;  ///< orthonormal n x k
  IterationStats stats;
  /// Sum of the Ritz values after each iteration (LOBPCG only).
  std::vector<double> ritz_value_sums;
};

/// Block power iteration on a shifted A so that the target end of the spectrum
/// dominates. Starts from a Gaussian block drawn from cfg.seed.
SubspaceResult subspace_iteration(const DenseMatrix &a, const IterationConfig &cfg);

/// Shift used by subspace_iteration: for the smallest target, a value at or
/// near the top of the spectrum (the smaller of the Gershgorin bound and a
/// short Lanczos estimate); symmetric for the largest target.
double subspace_iteration_shift(const DenseMatrix &a, Target target, std::uint64_t seed);

/// Unpreconditioned block LOBPCG: Rayleigh-Ritz on span[X, R, P] each step.
SubspaceResult lobpcg_basic(const DenseMatrix &a, const DenseMatrix &x0, Index iters,
                            Target target = Target::smallest);

struct SketchResult {
  DenseMatrix left;   ///< Q1, m x k
  DenseMatrix right;  ///< Q2, n x k
  IterationStats stats;
};

/// Gaussian range sketches Q1 = orth((A A^T)^(p-1) A W1) and
/// Q2 = orth((A^T A)^(p-1) A^T W2), re-orthonormalized between products.
SketchResult sketch_subspaces(const DenseMatrix &a, Index k, int power_passes, SeededRng &rng);

} // namespace ritzbound
