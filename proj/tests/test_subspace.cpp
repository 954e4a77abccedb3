#include <doctest.h>

#include "ritzbound/error.hpp"
#include "ritzbound/extraction.hpp"
#include "ritzbound/linalg.hpp"
#include "ritzbound/subspace.hpp"

using namespace ritzbound;

namespace {

DenseMatrix uniform_matrix(Index n, SeededRng &rng) {
  DenseVector d(n);
  for (Index i = 0; i < n; ++i) {
    d[i] = static_cast<double>(i + 1);
  }
  return sym_with_spectrum(Spectrum(d, SortOrder::ascending), rng);
}

} // namespace

TEST_CASE("subspace iteration on a diagonal matrix with k = n") {
  DenseMatrix a = DenseMatrix::Zero(5, 5);
  a.diagonal() << 2, 4, 1, 5, 3;
  IterationConfig cfg;
  cfg.block_size = 5;
  cfg.max_iters = 3;
  const SubspaceResult r = subspace_iteration(a, cfg);
  CHECK(orthonormality_defect(r.basis) < 1e-12);
  const SymmetricPerturbation p = rayleigh_ritz(a, r.basis, TailMode::approximate);
  CHECK(p.residual_norms.maxCoeff() < 1e-12);
}

TEST_CASE("subspace iteration yields graded residuals") {
  SeededRng rng(60);
  const DenseMatrix a = uniform_matrix(500, rng);
  IterationConfig cfg;
  cfg.block_size = 50;
  cfg.max_iters = 100;
  cfg.seed = 1234;
  const SubspaceResult r = subspace_iteration(a, cfg);
  CHECK(orthonormality_defect(r.basis) < 1e-12);
  const SymmetricPerturbation p = rayleigh_ritz(a, r.basis, TailMode::approximate);
  CHECK(p.residual_norms[0] * 10 <= p.residual_norms[49]);

  const SubspaceResult again = subspace_iteration(a, cfg);
  CHECK((again.basis - r.basis).norm() == 0.0);
}

TEST_CASE("subspace iteration targets the largest eigenvalues") {
  SeededRng rng(61);
  const DenseMatrix a = uniform_matrix(60, rng);
  IterationConfig cfg;
  cfg.block_size = 3;
  cfg.max_iters = 200;
  cfg.target = Target::largest;
  const SubspaceResult r = subspace_iteration(a, cfg);
  const SymmetricPerturbation p = rayleigh_ritz(a, r.basis, TailMode::approximate);
  CHECK(p.theta[2] == doctest::Approx(60.0).epsilon(1e-6));
}

TEST_CASE("subspace iteration shift lies above the spectrum") {
  SeededRng rng(62);
  const DenseMatrix a = uniform_matrix(80, rng);
  CHECK(subspace_iteration_shift(a, Target::smallest, 1) >= 80.0 * (1 - 1e-8));
  CHECK(subspace_iteration_shift(a, Target::largest, 1) <= 1.0 * (1 + 1e-8));
}

TEST_CASE("subspace iteration validates its configuration") {
  const DenseMatrix a = DenseMatrix::Identity(4, 4);
  IterationConfig cfg;
  cfg.block_size = 5;
  CHECK_THROWS_AS(subspace_iteration(a, cfg), InvalidArgument);
  cfg.block_size = 2;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(subspace_iteration(a, cfg), InvalidArgument);
}

TEST_CASE("lobpcg keeps an invariant subspace") {
  DenseMatrix a = DenseMatrix::Zero(9, 9);
  a.diagonal() << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const SubspaceResult r = lobpcg_basic(a, DenseMatrix::Identity(9, 3), 5);
  const SymmetricPerturbation p = rayleigh_ritz(a, r.basis, TailMode::approximate);
  CHECK(p.residual_norms.maxCoeff() < 1e-14);
  CHECK(p.theta[0] == doctest::Approx(1.0));
  CHECK(p.theta[2] == doctest::Approx(3.0));
}

TEST_CASE("lobpcg Ritz value sums decrease") {
  SeededRng rng(63);
  const DenseMatrix a = uniform_matrix(500, rng);
  const DenseMatrix x0 = haar_stiefel(500, 50, rng);
  const SubspaceResult r = lobpcg_basic(a, x0, 40);
  REQUIRE(r.ritz_value_sums.size() >= 40);
  for (std::size_t i = 1; i < r.ritz_value_sums.size(); ++i) {
    CHECK(r.ritz_value_sums[i] <= r.ritz_value_sums[i - 1] + 1e-12 * 500 * 50);
  }
  CHECK(r.ritz_value_sums.back() < r.ritz_value_sums.front());
  CHECK(orthonormality_defect(r.basis) < 1e-12);
}

TEST_CASE("lobpcg rejects oversized blocks") {
  const DenseMatrix a = DenseMatrix::Identity(8, 8);
  CHECK_THROWS_AS(lobpcg_basic(a, DenseMatrix::Identity(8, 3), 2), InvalidArgument);
  CHECK_THROWS_AS(lobpcg_basic(a, 2.0 * DenseMatrix::Identity(8, 2), 2), InvalidArgument);
}

TEST_CASE("sketches of an orthogonal matrix are orthonormal") {
  SeededRng rng(64);
  const DenseMatrix a = haar_orthogonal(30, rng);
  const SketchResult s = sketch_subspaces(a, 10, 1, rng);
  CHECK(orthonormality_defect(s.left) <= 1e-12);
  CHECK(orthonormality_defect(s.right) <= 1e-12);
  CHECK(s.left.cols() == 10);
}

TEST_CASE("double pass sketch gives graded Petrov-Galerkin residuals") {
  SeededRng rng(65);
  const DenseMatrix a = geometric_randsvd(200, 80, 1e12, rng);
  const SketchResult s = sketch_subspaces(a, 20, 2, rng);
  CHECK(orthonormality_defect(s.left) <= 1e-12);
  CHECK(orthonormality_defect(s.right) <= 1e-12);
  const SvdPerturbation p = petrov_galerkin(a, s.left, s.right, TailMode::approximate);
  const double first = std::max(p.residual_norms_e[0], p.residual_norms_f[0]);
  const double last = std::max(p.residual_norms_e[19], p.residual_norms_f[19]);
  CHECK(first * 1e2 <= last);
}

TEST_CASE("sketches are deterministic and validated") {
  SeededRng a1(66), a2(66);
  const DenseMatrix a = geometric_randsvd(40, 20, 1e3, a1);
  (void)geometric_randsvd(40, 20, 1e3, a2);
  const SketchResult s1 = sketch_subspaces(a, 5, 1, a1);
  const SketchResult s2 = sketch_subspaces(a, 5, 1, a2);
  CHECK((s1.left - s2.left).norm() == 0.0);
  CHECK((s1.right - s2.right).norm() == 0.0);
  CHECK_THROWS_AS(sketch_subspaces(a, 21, 1, a1), InvalidArgument);
  CHECK_THROWS_AS(sketch_subspaces(a, 5, 3, a1), InvalidArgument);
}
