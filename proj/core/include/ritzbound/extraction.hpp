#pragma once

#include <optional>

#include "ritzbound/linalg.hpp"

namespace ritzbound {

/// Whether an extraction also computes the (normally unavailable) spectrum of
/// the trailing block A2.
enum class TailMode { exact, approximate };

/// Block structure [diag(theta) E^T; E A2] orthogonally similar to a symmetric A.
///
/// `residual_block` holds the columns E_i in some orthonormal coordinate system
/// of the complement; only its Gram matrix E^T E is meaningful (ambient residual
/// vectors A x_i - theta_i x_i have the same Gram matrix).
struct SymmetricPerturbation {
  DenseVector theta;                  ///< Ritz values, ascending
  DenseVector residual_norms;         ///< ||E_i||_2
  std::optional<DenseMatrix> residual_block;
  std::optional<Spectrum> tail_spectrum;  ///< lambda(A2), ascending
  /// Stand-in for lambda(A2) built from available data (e.g. non-retained
  /// Ritz values). Used by approximate gap mode.
  std::optional<Spectrum> tail_estimate;
  /// Full n x n block matrix, when requested.
  std::optional<DenseMatrix> assembled;
  std::optional<DenseMatrix> ritz_vectors;  ///< n x k

  [[nodiscard]] Index size() const noexcept { return theta.size(); }
};

/// Block structure [diag(theta) E^T; F A2] with the singular values of A.
struct SvdPerturbation {
  DenseVector theta;  ///< approximate singular values, descending
  DenseVector residual_norms_e;  ///< ||A^T u_i - theta_i v_i||_2
  DenseVector residual_norms_f;  ///< ||A v_i - theta_i u_i||_2
  std::optional<DenseMatrix> e_block;  ///< Gram-equivalent columns E_i
  std::optional<DenseMatrix> f_block;  ///< Gram-equivalent columns F_i
  std::optional<Spectrum> tail_spectrum;  ///< sigma(A2), descending
  bool e_block_zero = false;  ///< E vanishes by construction (one-sided projection)
  Index rows = 0;             ///< m
  Index cols = 0;             ///< n
  std::optional<DenseMatrix> assembled;  ///< full m x n block matrix, when requested
  std::optional<DenseMatrix> left_vectors;   ///< m x k
  std::optional<DenseMatrix> right_vectors;  ///< n x k

  [[nodiscard]] Index size() const noexcept { return theta.size(); }
  [[nodiscard]] bool square() const noexcept { return rows > 0 && rows == cols; }
};

/// A Q1 = Q1 T + q_next t e_k^T.
struct LanczosFactorization {
  DenseMatrix basis;         ///< Q1, n x k
  DenseVector diagonal;      ///< T(i, i)
  DenseVector off_diagonal;  ///< T(i+1, i), length k-1
  double coupling = 0.0;     ///< t_{k+1,k}
  std::optional<DenseVector> next_vector;
  bool breakdown = false;    ///< stopped before the requested size
  double norm_estimate = 0.0;

  [[nodiscard]] Index size() const noexcept { return diagonal.size(); }
  [[nodiscard]] DenseMatrix tridiagonal() const;
};

struct ExtractionOptions {
  /// Number of Ritz pairs placed in the leading block; the others move to the
  /// tail. Defaults to all.
  std::optional<Index> keep;
  /// Also form the full block matrix (costly for large n).
  bool keep_blocks = false;
};

/// Rayleigh-Ritz on span(Q1). Ritz values ascending; the first `keep` pairs
/// form the leading block.
SymmetricPerturbation rayleigh_ritz(const DenseMatrix &a, const DenseMatrix &q1, TailMode mode,
                                    const ExtractionOptions &options = {});

/// Two-sided projection through the SVD of Q1^T A Q2 (Q2 has at least as many
/// columns as Q1).
SvdPerturbation petrov_galerkin(const DenseMatrix &a, const DenseMatrix &q1, const DenseMatrix &q2,
                                TailMode mode, bool keep_blocks = false);

/// One-sided projection Q1 Q1^T A; the E block is exactly zero.
SvdPerturbation hmt_structure(const DenseMatrix &a, const DenseMatrix &q1, TailMode mode,
                              bool keep_blocks = false);

/// Lanczos with full reorthogonalization (two-pass classical Gram-Schmidt).
/// Stops early when t_{j+1,j} < 1e-14 ||A||.
LanczosFactorization lanczos(const DenseMatrix &a, const DenseVector &v0, Index k);

/// ||A Q1 - Q1 T - q_next t e_k^T||_2.
double lanczos_recurrence_residual(const DenseMatrix &a, const LanczosFactorization &f);

/// Lanczos structure using only the factorization. The `keep` smallest Ritz
/// values form the leading block; the rest become the tail estimate.
SymmetricPerturbation lanczos_to_perturbation(const LanczosFactorization &f, Index keep);

/// As above, plus the exact tail spectrum computed with A.
SymmetricPerturbation lanczos_to_perturbation(const LanczosFactorization &f, Index keep,
                                              const DenseMatrix &a, bool keep_blocks = false);

/// Orthonormal basis [q_next, non-retained Ritz vectors, complement] of the
/// tail coordinates of the Lanczos structure.
DenseMatrix lanczos_tail_basis(const LanczosFactorization &f, Index keep);

/// Retained Ritz vectors Q1 U(:, 0:keep).
DenseMatrix lanczos_ritz_vectors(const LanczosFactorization &f, Index keep);

} // namespace ritzbound
