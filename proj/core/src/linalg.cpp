#include "ritzbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/SVD>

#include "ritzbound/error.hpp"

namespace ritzbound {

namespace {

bool is_sorted(const DenseVector &v, SortOrder order) {
  for (Index i = 1; i < v.size(); ++i) {
    if (order == SortOrder::ascending ? v[i] < v[i - 1] : v[i] > v[i - 1]) {
      return false;
    }
  }
  return true;
}

DenseMatrix symmetrized(const DenseMatrix &a) {
  return 0.5 * (a + a.transpose());
}

// Multiplies column j of q by sign(r(j,j)) so the factorization is unique.
void fix_signs(DenseMatrix &q, const DenseMatrix &qr_packed) {
  const Index cols = std::min(q.cols(), qr_packed.cols());
  for (Index j = 0; j < cols; ++j) {
    if (qr_packed(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
}

} // namespace

Spectrum::Spectrum(DenseVector values, SortOrder order)
    : values_(std::move(values)), order_(order) {
  if (!values_.allFinite()) {
    throw InvalidArgument("Spectrum: non-finite value");
  }
  if (!is_sorted(values_, order_)) {
    throw InvalidArgument("Spectrum: values are not sorted in the declared order");
  }
}

Spectrum Spectrum::sorted(DenseVector values, SortOrder order) {
  std::vector<double> tmp(values.data(), values.data() + values.size());
  if (order == SortOrder::ascending) {
    std::sort(tmp.begin(), tmp.end());
  } else {
    std::sort(tmp.begin(), tmp.end(), std::greater<>());
  }
  return Spectrum(Eigen::Map<DenseVector>(tmp.data(), static_cast<Index>(tmp.size())), order);
}

double Spectrum::max_abs() const noexcept {
  return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
}

void require_finite(const DenseMatrix &a, std::string_view what) {
  if (!a.allFinite()) {
    throw InvalidArgument(std::string(what) + ": matrix has non-finite entries");
  }
}

SymEig sym_eig(const DenseMatrix &a) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("sym_eig: matrix is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", expected square");
  }
  require_finite(a, "sym_eig");
  if (a.rows() == 0) {
    return {Spectrum(DenseVector(0), SortOrder::ascending), DenseMatrix(0, 0)};
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(symmetrized(a));
  if (solver.info() != Eigen::Success) {
    throw Error("sym_eig: eigensolver did not converge");
  }
  return {Spectrum(solver.eigenvalues(), SortOrder::ascending), solver.eigenvectors()};
}

Spectrum sym_eigenvalues(const DenseMatrix &a) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("sym_eigenvalues: matrix is not square");
  }
  require_finite(a, "sym_eigenvalues");
  if (a.rows() == 0) {
    return Spectrum(DenseVector(0), SortOrder::ascending);
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(symmetrized(a), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("sym_eigenvalues: eigensolver did not converge");
  }
  return Spectrum(solver.eigenvalues(), SortOrder::ascending);
}

std::vector<long double> sym_eigenvalues_extended(const DenseMatrix &a) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("sym_eigenvalues_extended: matrix is not square");
  }
  require_finite(a, "sym_eigenvalues_extended");
  using ExtendedMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const ExtendedMatrix ext = a.cast<long double>();
  const ExtendedMatrix sym = (ext + ext.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<ExtendedMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("sym_eigenvalues_extended: eigensolver did not converge");
  }
  const auto &ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Svd svd(const DenseMatrix &a, SvdVectors vectors) {
  require_finite(a, "svd");
  if (a.size() == 0) {
    const bool full = vectors == SvdVectors::full;
    const Index r = std::min(a.rows(), a.cols());
    return {full ? DenseMatrix::Identity(a.rows(), a.rows()) : DenseMatrix::Identity(a.rows(), r),
            Spectrum(DenseVector(r), SortOrder::descending),
            full ? DenseMatrix::Identity(a.cols(), a.cols()) : DenseMatrix::Identity(a.cols(), r)};
  }
  const int options = vectors == SvdVectors::thin ? (Eigen::ComputeThinU | Eigen::ComputeThinV)
                                                  : (Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::BDCSVD<DenseMatrix> solver(a, options);
  if (solver.info() != Eigen::Success) {
    throw Error("svd: did not converge");
  }
  return {solver.matrixU(), Spectrum(solver.singularValues(), SortOrder::descending),
          solver.matrixV()};
}

Spectrum singular_values(const DenseMatrix &a) {
  require_finite(a, "singular_values");
  if (a.size() == 0) {
    return Spectrum(DenseVector(0), SortOrder::descending);
  }
  Eigen::BDCSVD<DenseMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error("singular_values: did not converge");
  }
  return Spectrum(solver.singularValues(), SortOrder::descending);
}

double spectral_norm(const DenseMatrix &a) {
  if (a.size() == 0) {
    return 0.0;
  }
  const Spectrum s = singular_values(a);
  return s[0];
}

OrthonormalizeResult orthonormalize_columns(const DenseMatrix &a, double tolerance) {
  OrthonormalizeResult out;
  out.basis.resize(a.rows(), std::min(a.rows(), a.cols()));
  Index filled = 0;
  for (Index j = 0; j < a.cols(); ++j) {
    DenseVector v = a.col(j);
    const double original = v.norm();
    if (filled > 0) {
      const auto q = out.basis.leftCols(filled);
      for (int pass = 0; pass < 2; ++pass) {
        v.noalias() -= q * (q.transpose() * v);
      }
    }
    const double remaining = v.norm();
    if (!(original > 0.0) || remaining <= tolerance * original || filled == a.rows()) {
      out.dependent.push_back(j);
      continue;
    }
    out.basis.col(filled) = v / remaining;
    out.kept.push_back(j);
    ++filled;
  }
  out.basis.conservativeResize(Eigen::NoChange, filled);
  return out;
}

DenseMatrix orth(const DenseMatrix &a) {
  if (a.cols() > a.rows()) {
    throw InvalidArgument("orth: " + std::to_string(a.cols()) + " columns exceed " +
                          std::to_string(a.rows()) + " rows");
  }
  require_finite(a, "orth");
  OrthonormalizeResult r = orthonormalize_columns(a);
  if (!r.dependent.empty()) {
    const auto col = static_cast<std::size_t>(r.dependent.front());
    throw RankDeficientError(col, "orth: rank deficient, column " + std::to_string(col) +
                                      " depends on the preceding columns");
  }
  return std::move(r.basis);
}

DenseMatrix orthogonal_complement(const DenseMatrix &q) {
  const Index n = q.rows();
  const Index k = q.cols();
  if (k > n) {
    throw InvalidArgument("orthogonal_complement: more columns than rows");
  }
  if (k == 0) {
    return DenseMatrix::Identity(n, n);
  }
  Eigen::HouseholderQR<DenseMatrix> qr(q);
  DenseMatrix full = qr.householderQ();
  return full.rightCols(n - k);
}

double orthonormality_defect(const DenseMatrix &q) {
  if (q.cols() == 0) {
    return 0.0;
  }
  const DenseMatrix g = q.transpose() * q - DenseMatrix::Identity(q.cols(), q.cols());
  return sym_eigenvalues(g).max_abs();
}

DenseMatrix gaussian_matrix(Index rows, Index cols, SeededRng &rng) {
  DenseMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      g(i, j) = rng.gaussian();
    }
  }
  return g;
}

DenseMatrix haar_orthogonal(Index n, SeededRng &rng) {
  if (n < 1) {
    throw InvalidArgument("haar_orthogonal: n must be at least 1");
  }
  return haar_stiefel(n, n, rng);
}

DenseMatrix haar_stiefel(Index rows, Index cols, SeededRng &rng) {
  if (rows < 1 || cols < 1 || cols > rows) {
    throw InvalidArgument("haar_stiefel: need 1 <= cols <= rows");
  }
  const DenseMatrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(rows, cols);
  fix_signs(q, qr.matrixQR());
  return q;
}

DenseMatrix sym_with_spectrum(const Spectrum &d, SeededRng &rng) {
  const Index n = d.size();
  if (n < 1) {
    throw InvalidArgument("sym_with_spectrum: empty spectrum");
  }
  const DenseMatrix v = haar_orthogonal(n, rng);
  const DenseMatrix a = v * d.values().asDiagonal() * v.transpose();
  return symmetrized(a);
}

DenseVector geometric_singular_values(Index n, double kappa) {
  DenseVector s(n);
  for (Index i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    s[i] = std::pow(kappa, -t);
  }
  return s;
}

DenseMatrix geometric_randsvd(Index m, Index n, double kappa, SeededRng &rng) {
  if (n < 1 || m < n) {
    throw InvalidArgument("geometric_randsvd: need m >= n >= 1");
  }
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("geometric_randsvd: kappa must be finite and >= 1");
  }
  const DenseMatrix u = haar_stiefel(m, n, rng);
  const DenseMatrix v = haar_orthogonal(n, rng);
  return u * geometric_singular_values(n, kappa).asDiagonal() * v.transpose();
}

std::pair<double, double> gershgorin_interval(const DenseMatrix &a) {
  double lo = 0.0;
  double hi = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    const double radius = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    const double l = a(i, i) - radius;
    const double h = a(i, i) + radius;
    lo = i == 0 ? l : std::min(lo, l);
    hi = i == 0 ? h : std::max(hi, h);
  }
  return {lo, hi};
}

} // namespace ritzbound
