#include <doctest.h>

#include <cmath>

#include "ritzbound/error.hpp"
#include "ritzbound/linalg.hpp"
#include "ritzbound/rng.hpp"

using namespace ritzbound;

namespace {

DenseVector range_vector(Index n) {
  DenseVector v(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = static_cast<double>(i + 1);
  }
  return v;
}

double max_rel_diff(const DenseVector &a, const DenseVector &b) {
  return ((a - b).cwiseAbs().array() / b.cwiseAbs().array().max(1e-300)).maxCoeff();
}

} // namespace

TEST_CASE("rng streams are reproducible") {
  SeededRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double x = a.gaussian();
    CHECK(x == b.gaussian());
  }
  CHECK(a.uniform() != c.uniform());
  SeededRng u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("gaussian samples have unit variance") {
  SeededRng rng(1);
  double sum = 0.0, sq = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double x = rng.gaussian();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / count) < 0.01);
  CHECK(std::abs(sq / count - 1.0) < 0.02);
}

TEST_CASE("spectrum validates order and finiteness") {
  DenseVector v(3);
  v << 1, 2, 3;
  CHECK_NOTHROW(Spectrum(v, SortOrder::ascending));
  CHECK_THROWS_AS(Spectrum(v, SortOrder::descending), InvalidArgument);
  v[1] = std::nan("");
  CHECK_THROWS_AS(Spectrum(v, SortOrder::ascending), InvalidArgument);
  DenseVector w(3);
  w << 3, -5, 1;
  const Spectrum s = Spectrum::sorted(w, SortOrder::descending);
  CHECK(s[0] == 3);
  CHECK(s[2] == -5);
  CHECK(s.max_abs() == 5);
}

TEST_CASE("sym_eig of a diagonal matrix") {
  DenseMatrix a = DenseMatrix::Zero(3, 3);
  a.diagonal() << 3, 1, 2;
  const SymEig e = sym_eig(a);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(2.0));
  CHECK(e.values[2] == doctest::Approx(3.0));
  CHECK(e.vectors.cwiseAbs().colwise().sum().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("sym_eig of a 2x2 matches the quadratic formula") {
  const double eps = 0.01, delta = 1.0;
  DenseMatrix a(2, 2);
  a << 0, eps, eps, delta;
  const Spectrum s = sym_eigenvalues(a);
  const double root = std::sqrt(delta * delta + 4 * eps * eps);
  // Stable forms of (delta -+ root) / 2.
  const double hi = 0.5 * (delta + root);
  const double lo = -eps * eps / hi;
  CHECK(std::abs(s[0] - lo) <= 1e-15 * hi);
  CHECK(std::abs(s[1] - hi) <= 1e-15 * hi);
}

TEST_CASE("sym_eig residual and orthogonality") {
  SeededRng rng(3);
  const DenseMatrix g = gaussian_matrix(60, 60, rng);
  const DenseMatrix a = g + g.transpose();
  const SymEig e = sym_eig(a);
  const double norm = e.values.max_abs();
  const DenseMatrix r = a * e.vectors - e.vectors * e.values.values().asDiagonal();
  CHECK(spectral_norm(r) <= 100 * 60 * kUnitRoundoff * norm);
  CHECK(orthonormality_defect(e.vectors) <= 100 * 60 * kUnitRoundoff);
}

TEST_CASE("sym_eig rejects bad input") {
  CHECK_THROWS_AS(sym_eig(DenseMatrix::Zero(2, 3)), InvalidArgument);
  DenseMatrix a = DenseMatrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(sym_eig(a), InvalidArgument);
}

TEST_CASE("extended precision eigenvalues agree with double") {
  SeededRng rng(5);
  const DenseMatrix a = sym_with_spectrum(Spectrum(range_vector(20), SortOrder::ascending), rng);
  const auto ext = sym_eigenvalues_extended(a);
  REQUIRE(ext.size() == 20);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    CHECK(std::abs(static_cast<double>(ext[i]) - static_cast<double>(i + 1)) < 1e-12);
  }
}

TEST_CASE("Haar-conjugated diagonal keeps its spectrum") {
  SeededRng rng(11);
  const Spectrum d(range_vector(50), SortOrder::ascending);
  const DenseMatrix a = sym_with_spectrum(d, rng);
  CHECK((a - a.transpose()).norm() == 0.0);
  CHECK(max_rel_diff(sym_eigenvalues(a).values(), d.values()) < 1e-12);
}

TEST_CASE("sym_with_spectrum of a constant is a multiple of the identity") {
  SeededRng rng(2);
  const DenseMatrix a =
      sym_with_spectrum(Spectrum(DenseVector::Constant(8, 4.5), SortOrder::ascending), rng);
  CHECK((a - 4.5 * DenseMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("clustered spectrum survives conjugation") {
  SeededRng rng(9);
  DenseVector d = range_vector(60);
  for (Index i = 19; i < 29; ++i) {
    d[i] = 20.0 + 1e-10 * rng.gaussian();
  }
  const Spectrum s = Spectrum::sorted(d, SortOrder::ascending);
  const DenseMatrix a = sym_with_spectrum(s, rng);
  const Spectrum back = sym_eigenvalues(a);
  CHECK((back.values() - s.values()).cwiseAbs().maxCoeff() < 1e-12 * 60);
}

TEST_CASE("svd of simple matrices") {
  DenseMatrix a = DenseMatrix::Zero(3, 2);
  a(0, 0) = 2;
  a(1, 1) = 1;
  const Spectrum s = singular_values(a);
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(1.0));

  DenseMatrix b(2, 2);
  b << 2, 0.02, 0.01, 1;
  // sigma^2 are the eigenvalues of B^T B, from the 2x2 quadratic.
  const DenseMatrix btb = b.transpose() * b;
  const double tr = btb.trace(), det = btb.determinant();
  const double big = 0.5 * (tr + std::sqrt(tr * tr - 4 * det));
  const double small = det / big;
  const Spectrum sb = singular_values(b);
  CHECK(sb[0] == doctest::Approx(std::sqrt(big)).epsilon(1e-14));
  CHECK(sb[1] == doctest::Approx(std::sqrt(small)).epsilon(1e-14));

  SeededRng rng(4);
  DenseVector u = gaussian_matrix(7, 1, rng).col(0).normalized();
  DenseVector v = gaussian_matrix(5, 1, rng).col(0).normalized();
  const Spectrum r1 = singular_values(u * v.transpose());
  CHECK(r1[0] == doctest::Approx(1.0));
  CHECK(r1[1] < 1e-15);
}

TEST_CASE("svd reconstructs the matrix") {
  SeededRng rng(8);
  const DenseMatrix a = gaussian_matrix(30, 12, rng);
  const Svd s = svd(a);
  const DenseMatrix back = s.u * s.values.values().asDiagonal() * s.v.transpose();
  CHECK(spectral_norm(a - back) <= 100 * 30 * kUnitRoundoff * s.values[0]);
  const Svd f = svd(a, SvdVectors::full);
  CHECK(f.u.cols() == 30);
  CHECK(orthonormality_defect(f.u) < 1e-13);
  CHECK(svd(DenseMatrix::Zero(0, 0)).values.size() == 0);
}

TEST_CASE("orth") {
  CHECK((orth(DenseMatrix::Identity(4, 4)) - DenseMatrix::Identity(4, 4)).norm() == 0.0);

  DenseMatrix dep(5, 2);
  dep.col(0) << 1, 2, 3, 4, 5;
  dep.col(1) = 2 * dep.col(0);
  try {
    (void)orth(dep);
    FAIL("expected a rank deficiency error");
  } catch (const RankDeficientError &e) {
    CHECK(e.column() == 1);
  }

  SeededRng rng(21);
  const DenseMatrix g = gaussian_matrix(100, 10, rng);
  const DenseMatrix q = orth(g);
  CHECK(orthonormality_defect(q) <= 1e-12);
  // span(Q) = span(G): G is reproduced by projecting onto Q.
  CHECK((g - q * (q.transpose() * g)).norm() <= 1e-12 * g.norm());
  CHECK_THROWS_AS(orth(gaussian_matrix(3, 4, rng)), InvalidArgument);
}

TEST_CASE("orthogonal complement") {
  SeededRng rng(6);
  const DenseMatrix q = haar_stiefel(12, 4, rng);
  const DenseMatrix c = orthogonal_complement(q);
  CHECK(c.cols() == 8);
  CHECK(orthonormality_defect(c) < 1e-13);
  CHECK((q.transpose() * c).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Haar samples") {
  SeededRng rng(1);
  const DenseMatrix one = haar_orthogonal(1, rng);
  CHECK(std::abs(one(0, 0)) == 1.0);
  SeededRng a(100), b(100), c(101);
  const DenseMatrix qa = haar_orthogonal(50, a);
  CHECK(orthonormality_defect(qa) <= 1e-12);
  CHECK((qa - haar_orthogonal(50, b)).norm() == 0.0);
  CHECK((qa - haar_orthogonal(50, c)).norm() > 1.0);
  CHECK_THROWS_AS(haar_orthogonal(0, a), InvalidArgument);
}

TEST_CASE("geometric randsvd") {
  SeededRng rng(13);
  const DenseMatrix flat = geometric_randsvd(20, 6, 1.0, rng);
  CHECK((singular_values(flat).values().array() - 1.0).abs().maxCoeff() < 1e-14);

  const DenseMatrix a = geometric_randsvd(50, 10, 1e6, rng);
  const DenseVector expect = geometric_singular_values(10, 1e6);
  CHECK(expect[0] == 1.0);
  CHECK(expect[9] == doctest::Approx(1e-6));
  CHECK(max_rel_diff(singular_values(a).values(), expect) < 1e-10);
  CHECK_THROWS_AS(geometric_randsvd(5, 6, 10.0, rng), InvalidArgument);
  CHECK_THROWS_AS(geometric_randsvd(6, 5, 0.5, rng), InvalidArgument);
}

TEST_CASE("gershgorin interval encloses the spectrum") {
  SeededRng rng(17);
  const DenseMatrix a = sym_with_spectrum(Spectrum(range_vector(30), SortOrder::ascending), rng);
  const auto [lo, hi] = gershgorin_interval(a);
  CHECK(lo <= 1.0);
  CHECK(hi >= 30.0);
}
