#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ritzbound/rng.hpp"

namespace ritzbound {

// All matrices are column-major Eigen matrices of double.
using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Unit roundoff of IEEE double (2^-53).
inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

/// Relative threshold below which orth() declares a column dependent.
inline constexpr double kOrthRankTolerance = 1e-12;

enum class SortOrder { ascending, descending };

/// A sorted list of eigenvalues or singular values.
class Spectrum {
public:
  Spectrum() = default;
  /// Throws InvalidArgument unless `values` is sorted in `order`.
  Spectrum(DenseVector values, SortOrder order);

  /// Sorts `values` into `order`.
  static Spectrum sorted(DenseVector values, SortOrder order);

  [[nodiscard]] const DenseVector &values() const noexcept { return values_; }
  [[nodiscard]] SortOrder order() const noexcept { return order_; }
  [[nodiscard]] Index size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.size() == 0; }
  double operator[](Index i) const { return values_[i]; }

  /// max |value|, or 0 when empty.
  [[nodiscard]] double max_abs() const noexcept;

private:
  DenseVector values_;
  SortOrder order_ = SortOrder::ascending;
};

struct SymEig {
  Spectrum values;     ///< ascending
  DenseMatrix vectors; ///< orthonormal, column j pairs with values[j]
};

enum class SvdVectors { thin, full };

struct Svd {
  DenseMatrix u;
  Spectrum values; ///< descending, nonnegative
  DenseMatrix v;
};

/// Throws InvalidArgument naming `what` if any entry is NaN or infinite.
void require_finite(const DenseMatrix &a, std::string_view what);

/// Symmetric eigendecomposition of (A + A^T)/2.
SymEig sym_eig(const DenseMatrix &a);

/// Eigenvalues only, ascending.
Spectrum sym_eigenvalues(const DenseMatrix &a);

Svd svd(const DenseMatrix &a, SvdVectors vectors = SvdVectors::thin);

/// Eigenvalues of the symmetrized matrix computed in extended (long double)
/// precision, ascending. Used as a high-accuracy reference.
std::vector<long double> sym_eigenvalues_extended(const DenseMatrix &a);

/// Singular values only, descending.
Spectrum singular_values(const DenseMatrix &a);

/// Spectral norm (largest singular value).
double spectral_norm(const DenseMatrix &a);

/// Orthonormal basis of span(A) with span(Q(:,0:j)) = span(A(:,0:j)) for all j.
/// Throws RankDeficientError for the first column whose component orthogonal
/// to its predecessors is below kOrthRankTolerance times its norm.
DenseMatrix orth(const DenseMatrix &a);

struct OrthonormalizeResult {
  DenseMatrix basis;             ///< retained orthonormal columns, in order
  std::vector<Index> kept;       ///< source column of each basis column
  std::vector<Index> dependent;  ///< source columns that were dropped
};

/// Two-pass classical Gram-Schmidt that drops dependent columns instead of
/// failing. `tolerance` is relative to each column's own norm.
OrthonormalizeResult orthonormalize_columns(const DenseMatrix &a,
                                            double tolerance = kOrthRankTolerance);

/// Orthonormal basis of the orthogonal complement of span(Q), Q orthonormal
/// (n x (n-k)), from a full Householder completion.
DenseMatrix orthogonal_complement(const DenseMatrix &q);

/// ||Q^T Q - I||_2.
double orthonormality_defect(const DenseMatrix &q);

/// i.i.d. standard normal rows x cols matrix (filled column by column).
DenseMatrix gaussian_matrix(Index rows, Index cols, SeededRng &rng);

/// Haar-distributed n x n orthogonal matrix: QR of a Gaussian matrix with the
/// signs of diag(R) absorbed into Q.
DenseMatrix haar_orthogonal(Index n, SeededRng &rng);

/// First `cols` columns of a Haar orthogonal matrix, without forming it.
DenseMatrix haar_stiefel(Index rows, Index cols, SeededRng &rng);

/// V diag(D) V^T with V Haar; symmetric to the last bit.
DenseMatrix sym_with_spectrum(const Spectrum &d, SeededRng &rng);

/// m x n matrix with singular values geometrically spaced from 1 to 1/kappa
/// and Haar singular vectors.
DenseMatrix geometric_randsvd(Index m, Index n, double kappa, SeededRng &rng);

/// Geometric singular value sequence used by geometric_randsvd.
DenseVector geometric_singular_values(Index n, double kappa);

/// Interval [lo, hi] containing the spectrum of symmetric A (Gershgorin).
std::pair<double, double> gershgorin_interval(const DenseMatrix &a);

} // namespace ritzbound
