#include "ritzbound/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ritzbound/error.hpp"

namespace ritzbound {

namespace {

constexpr double kOrthonormalTolerance = 1e-10;
constexpr double kBreakdownTolerance = 1e-14;

void require_orthonormal(const DenseMatrix &q, const char *what) {
  require_finite(q, what);
  const double defect = orthonormality_defect(q);
  if (!(defect <= kOrthonormalTolerance)) {
    throw InvalidArgument(std::string(what) + ": basis is not orthonormal (||Q^T Q - I|| = " +
                          std::to_string(defect) + ")");
  }
}

void require_square(const DenseMatrix &a, const char *what) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument(std::string(what) + ": matrix must be square");
  }
  require_finite(a, what);
}

DenseMatrix symmetric_block_matrix(const DenseVector &theta, const DenseMatrix &e,
                                   const DenseMatrix &tail) {
  const Index k = theta.size();
  const Index r = tail.rows();
  DenseMatrix out = DenseMatrix::Zero(k + r, k + r);
  out.topLeftCorner(k, k) = theta.asDiagonal();
  out.bottomLeftCorner(r, k) = e;
  out.topRightCorner(k, r) = e.transpose();
  out.bottomRightCorner(r, r) = 0.5 * (tail + tail.transpose());
  return out;
}

// Singular values of Q1perp^T A W without forming Q1perp: the nonzero singular
// values of (I - Q1 Q1^T) A W coincide with them.
Spectrum projected_tail_singular_values(const DenseMatrix &a, const DenseMatrix &q1,
                                        const DenseMatrix &w) {
  const Index m = a.rows();
  const Index k = q1.cols();
  const Index count = std::min(m - k, w.cols());
  if (count <= 0) {
    return Spectrum(DenseVector(0), SortOrder::descending);
  }
  DenseMatrix aw = a * w;
  aw.noalias() -= q1 * (q1.transpose() * aw);
  const Spectrum s = singular_values(aw);
  return Spectrum(s.values().head(count), SortOrder::descending);
}

} // namespace

DenseMatrix LanczosFactorization::tridiagonal() const {
  const Index k = size();
  DenseMatrix t = DenseMatrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) {
    t(i, i) = diagonal[i];
    if (i + 1 < k) {
      t(i + 1, i) = off_diagonal[i];
      t(i, i + 1) = off_diagonal[i];
    }
  }
  return t;
}

SymmetricPerturbation rayleigh_ritz(const DenseMatrix &a, const DenseMatrix &q1, TailMode mode,
                                    const ExtractionOptions &options) {
  require_square(a, "rayleigh_ritz");
  const Index n = a.rows();
  const Index k = q1.cols();
  if (q1.rows() != n || k < 1 || k > n) {
    throw InvalidArgument("rayleigh_ritz: Q1 must be n x k with 1 <= k <= n");
  }
  require_orthonormal(q1, "rayleigh_ritz");
  const Index keep = options.keep.value_or(k);
  if (keep < 1 || keep > k) {
    throw InvalidArgument("rayleigh_ritz: keep must lie in [1, k]");
  }

  const SymEig projected = sym_eig(q1.transpose() * (a * q1));
  const DenseMatrix x = q1 * projected.vectors;
  const DenseVector &theta_all = projected.values.values();

  SymmetricPerturbation p;
  p.theta = theta_all.head(keep);
  const DenseMatrix x_keep = x.leftCols(keep);
  DenseMatrix residual = a * x_keep;
  residual.noalias() -= x_keep * p.theta.asDiagonal();
  p.residual_norms = residual.colwise().norm().transpose();
  p.residual_block = std::move(residual);
  p.ritz_vectors = x_keep;
  if (keep < k) {
    p.tail_estimate = Spectrum(theta_all.tail(k - keep), SortOrder::ascending);
  }

  if (mode == TailMode::exact) {
    const DenseMatrix complement = orthogonal_complement(x);
    DenseMatrix w(n, n - keep);
    w << x.rightCols(k - keep), complement;
    const DenseMatrix tail = w.transpose() * (a * w);
    p.tail_spectrum = sym_eigenvalues(tail);
    if (options.keep_blocks) {
      const DenseMatrix e = w.transpose() * (a * x_keep);
      p.assembled = symmetric_block_matrix(p.theta, e, tail);
    }
  }
  return p;
}

SvdPerturbation petrov_galerkin(const DenseMatrix &a, const DenseMatrix &q1, const DenseMatrix &q2,
                                TailMode mode, bool keep_blocks) {
  require_finite(a, "petrov_galerkin");
  const Index m = a.rows();
  const Index n = a.cols();
  const Index k = q1.cols();
  const Index k2 = q2.cols();
  if (q1.rows() != m || q2.rows() != n) {
    throw InvalidArgument("petrov_galerkin: factor shapes do not match A");
  }
  if (k < 1 || k2 < k) {
    throw InvalidArgument("petrov_galerkin: need 1 <= k <= k2");
  }
  require_orthonormal(q1, "petrov_galerkin (Q1)");
  require_orthonormal(q2, "petrov_galerkin (Q2)");

  const DenseMatrix projected = q1.transpose() * (a * q2);  // k x k2
  const Svd small = svd(projected, SvdVectors::full);
  const DenseMatrix u_hat = q1 * small.u;   // m x k
  const DenseMatrix v_full = q2 * small.v;  // n x k2
  const DenseMatrix v_hat = v_full.leftCols(k);

  SvdPerturbation p;
  p.rows = m;
  p.cols = n;
  p.theta = small.values.values().head(k);
  DenseMatrix f = a * v_hat;
  f.noalias() -= u_hat * p.theta.asDiagonal();
  DenseMatrix e = a.transpose() * u_hat;
  e.noalias() -= v_hat * p.theta.asDiagonal();
  p.residual_norms_f = f.colwise().norm().transpose();
  p.residual_norms_e = e.colwise().norm().transpose();
  p.f_block = std::move(f);
  p.e_block = std::move(e);
  p.left_vectors = u_hat;
  p.right_vectors = v_hat;

  if (mode == TailMode::exact) {
    const DenseMatrix q2_perp = orthogonal_complement(q2);
    DenseMatrix w(n, n - k);
    w << v_full.rightCols(k2 - k), q2_perp;
    p.tail_spectrum = projected_tail_singular_values(a, q1, w);
    if (keep_blocks) {
      DenseMatrix left(m, m);
      left << u_hat, orthogonal_complement(u_hat);
      DenseMatrix right(n, n);
      right << v_full, q2_perp;
      DenseMatrix full = left.transpose() * a * right;
      full.topLeftCorner(k, k2).setZero();
      full.topLeftCorner(k, k).diagonal() = p.theta;
      p.assembled = std::move(full);
    }
  }
  return p;
}

SvdPerturbation hmt_structure(const DenseMatrix &a, const DenseMatrix &q1, TailMode mode,
                              bool keep_blocks) {
  require_finite(a, "hmt_structure");
  const Index m = a.rows();
  const Index n = a.cols();
  const Index k = q1.cols();
  if (q1.rows() != m || k < 1 || k > n) {
    throw InvalidArgument("hmt_structure: Q1 must be m x k with 1 <= k <= n");
  }
  require_orthonormal(q1, "hmt_structure");

  const Svd small = svd(q1.transpose() * a, SvdVectors::full);  // U0 [S0 0] [V0 V0perp]^T
  const DenseMatrix u_hat = q1 * small.u;
  const DenseMatrix v0 = small.v.leftCols(k);

  SvdPerturbation p;
  p.rows = m;
  p.cols = n;
  p.theta = small.values.values().head(k);
  DenseMatrix f = a * v0;
  f.noalias() -= u_hat * p.theta.asDiagonal();
  p.residual_norms_f = f.colwise().norm().transpose();
  p.residual_norms_e = DenseVector::Zero(k);
  p.f_block = std::move(f);
  p.e_block = DenseMatrix::Zero(1, k);
  p.e_block_zero = true;
  p.left_vectors = u_hat;
  p.right_vectors = v0;

  if (mode == TailMode::exact) {
    const DenseMatrix v0_perp = small.v.rightCols(n - k);
    p.tail_spectrum = projected_tail_singular_values(a, q1, v0_perp);
    if (keep_blocks) {
      DenseMatrix left(m, m);
      left << u_hat, orthogonal_complement(u_hat);
      DenseMatrix full = left.transpose() * a * small.v;
      full.topRows(k).setZero();
      full.topLeftCorner(k, k).diagonal() = p.theta;
      p.assembled = std::move(full);
    }
  }
  return p;
}

LanczosFactorization lanczos(const DenseMatrix &a, const DenseVector &v0, Index k) {
  require_square(a, "lanczos");
  const Index n = a.rows();
  if (v0.size() != n) {
    throw InvalidArgument("lanczos: start vector has wrong length");
  }
  if (k < 1 || k > n) {
    throw InvalidArgument("lanczos: need 1 <= k <= n");
  }
  const double start_norm = v0.norm();
  if (!(start_norm > 0.0) || !std::isfinite(start_norm)) {
    throw InvalidArgument("lanczos: start vector is zero");
  }

  LanczosFactorization f;
  f.basis.resize(n, k);
  f.diagonal.resize(k);
  f.off_diagonal.resize(std::max<Index>(k - 1, 0));

  DenseVector q = v0 / start_norm;
  Index size = 0;
  for (Index j = 0; j < k; ++j) {
    f.basis.col(j) = q;
    DenseVector w = a * q;
    f.norm_estimate = std::max(f.norm_estimate, w.norm());
    const double alpha = q.dot(w);
    w -= alpha * q;
    if (j > 0) {
      w -= f.off_diagonal[j - 1] * f.basis.col(j - 1);
    }
    const auto previous = f.basis.leftCols(j + 1);
    for (int pass = 0; pass < 2; ++pass) {
      w.noalias() -= previous * (previous.transpose() * w);
    }
    f.diagonal[j] = alpha;
    size = j + 1;
    const double beta = w.norm();
    if (beta < kBreakdownTolerance * f.norm_estimate) {
      f.breakdown = true;
      f.coupling = 0.0;
      break;
    }
    if (j + 1 == k) {
      f.coupling = beta;
      f.next_vector = w / beta;
    } else {
      f.off_diagonal[j] = beta;
      q = w / beta;
    }
  }
  if (size < k) {
    f.basis.conservativeResize(Eigen::NoChange, size);
    f.diagonal.conservativeResize(size);
    f.off_diagonal.conservativeResize(std::max<Index>(size - 1, 0));
  }
  return f;
}

double lanczos_recurrence_residual(const DenseMatrix &a, const LanczosFactorization &f) {
  const Index k = f.size();
  DenseMatrix r = a * f.basis - f.basis * f.tridiagonal();
  if (f.next_vector) {
    r.col(k - 1) -= f.coupling * *f.next_vector;
  }
  return spectral_norm(r);
}

namespace {

struct LanczosRitz {
  SymEig eig;
  Index keep;
};

LanczosRitz lanczos_ritz(const LanczosFactorization &f, Index keep) {
  if (keep < 1 || keep > f.size()) {
    throw InvalidArgument("lanczos_to_perturbation: keep = " + std::to_string(keep) +
                          " exceeds the factorization size " + std::to_string(f.size()));
  }
  return {sym_eig(f.tridiagonal()), keep};
}

} // namespace

DenseMatrix lanczos_ritz_vectors(const LanczosFactorization &f, Index keep) {
  const LanczosRitz r = lanczos_ritz(f, keep);
  return f.basis * r.eig.vectors.leftCols(keep);
}

DenseMatrix lanczos_tail_basis(const LanczosFactorization &f, Index keep) {
  const LanczosRitz r = lanczos_ritz(f, keep);
  const Index n = f.basis.rows();
  const Index k = f.size();
  DenseMatrix explored(n, k + (f.next_vector ? 1 : 0));
  explored.leftCols(k) = f.basis;
  if (f.next_vector) {
    explored.col(k) = *f.next_vector;
  }
  const DenseMatrix complement = orthogonal_complement(explored);
  DenseMatrix w(n, n - keep);
  Index col = 0;
  if (f.next_vector) {
    w.col(col++) = *f.next_vector;
  }
  w.middleCols(col, k - keep) = f.basis * r.eig.vectors.rightCols(k - keep);
  col += k - keep;
  w.rightCols(complement.cols()) = complement;
  return w;
}

SymmetricPerturbation lanczos_to_perturbation(const LanczosFactorization &f, Index keep) {
  const LanczosRitz r = lanczos_ritz(f, keep);
  const Index k = f.size();
  const DenseVector &theta_all = r.eig.values.values();

  SymmetricPerturbation p;
  p.theta = theta_all.head(keep);
  // Each residual column is t_{k+1,k} U(k, i) on the q_next coordinate only.
  DenseMatrix e = DenseMatrix::Zero(1, keep);
  if (f.next_vector) {
    e.row(0) = f.coupling * r.eig.vectors.row(k - 1).head(keep);
  }
  p.residual_norms = e.row(0).cwiseAbs().transpose();
  p.residual_block = std::move(e);
  p.ritz_vectors = f.basis * r.eig.vectors.leftCols(keep);
  if (keep < k) {
    p.tail_estimate = Spectrum(theta_all.tail(k - keep), SortOrder::ascending);
  }
  return p;
}

SymmetricPerturbation lanczos_to_perturbation(const LanczosFactorization &f, Index keep,
                                              const DenseMatrix &a, bool keep_blocks) {
  require_square(a, "lanczos_to_perturbation");
  if (a.rows() != f.basis.rows()) {
    throw InvalidArgument("lanczos_to_perturbation: matrix does not match the factorization");
  }
  SymmetricPerturbation p = lanczos_to_perturbation(f, keep);
  const DenseMatrix w = lanczos_tail_basis(f, keep);
  const DenseMatrix tail = w.transpose() * (a * w);
  p.tail_spectrum = sym_eigenvalues(tail);
  if (keep_blocks) {
    DenseMatrix e = DenseMatrix::Zero(w.cols(), keep);
    if (w.cols() > 0) {
      e.row(0) = p.residual_block->row(0);
    }
    p.assembled = symmetric_block_matrix(p.theta, e, tail);
  }
  return p;
}

} // namespace ritzbound
