#include <benchmark/benchmark.h>

#include "ritzbound/bounds.hpp"
#include "ritzbound/extraction.hpp"
#include "ritzbound/linalg.hpp"
#include "ritzbound/subspace.hpp"

using namespace ritzbound;

namespace {

SymmetricPerturbation synthetic_symmetric(Index k, Index tail) {
  SeededRng rng(1);
  SymmetricPerturbation p;
  p.theta.resize(k);
  p.residual_norms.resize(k);
  for (Index i = 0; i < k; ++i) {
    p.theta[i] = static_cast<double>(i + 1);
    p.residual_norms[i] = 1e-8 * std::pow(10.0, 6.0 * static_cast<double>(i) / k) * (1 + rng.uniform());
  }
  DenseVector t(tail);
  for (Index i = 0; i < tail; ++i) {
    t[i] = static_cast<double>(k + 1 + i);
  }
  p.tail_spectrum = Spectrum(t, SortOrder::ascending);
  return p;
}

DenseMatrix uniform_matrix(Index n) {
  SeededRng rng(2);
  DenseVector d(n);
  for (Index i = 0; i < n; ++i) {
    d[i] = static_cast<double>(i + 1);
  }
  return sym_with_spectrum(Spectrum(d, SortOrder::ascending), rng);
}

void BM_GapsSymmetric(benchmark::State &state) {
  const SymmetricPerturbation p = synthetic_symmetric(state.range(0), 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaps_symmetric(p, GapMode::exact));
  }
}
BENCHMARK(BM_GapsSymmetric)->Arg(30)->Arg(100)->Arg(400);

void BM_ThmMain(benchmark::State &state) {
  const SymmetricPerturbation p = synthetic_symmetric(state.range(0), 1000);
  const GapData g = gaps_symmetric(p, GapMode::exact);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bound_thm_main(p, g));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ThmMain)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

void BM_ThmCluster(benchmark::State &state) {
  const SymmetricPerturbation p = synthetic_symmetric(state.range(0), 1000);
  const GapData g = gaps_symmetric(p, GapMode::exact);
  const std::vector<ClusterSpec> clusters = detect_clusters(p.theta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bound_thm_cluster(p, clusters, g));
  }
}
BENCHMARK(BM_ThmCluster)->Arg(30)->Arg(100)->Arg(400);

void BM_ThmSvd(benchmark::State &state) {
  const Index k = state.range(0);
  SvdPerturbation p;
  p.theta.resize(k);
  for (Index i = 0; i < k; ++i) {
    p.theta[i] = std::pow(10.0, -12.0 * static_cast<double>(i) / k);
  }
  p.residual_norms_e = 1e-10 * p.theta;
  p.residual_norms_f = 2e-10 * p.theta;
  p.tail_spectrum = Spectrum(DenseVector::Constant(1, 1e-13), SortOrder::descending);
  const GapData g = gaps_svd(p, GapMode::exact);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bound_thm_svd(p, g));
  }
}
BENCHMARK(BM_ThmSvd)->Arg(20)->Arg(200);

void BM_RayleighRitz(benchmark::State &state) {
  const Index n = state.range(0);
  const DenseMatrix a = uniform_matrix(n);
  SeededRng rng(3);
  const DenseMatrix q = haar_stiefel(n, 30, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rayleigh_ritz(a, q, TailMode::approximate));
  }
}
BENCHMARK(BM_RayleighRitz)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Lanczos(benchmark::State &state) {
  const DenseMatrix a = uniform_matrix(300);
  SeededRng rng(4);
  const DenseVector v0 = gaussian_matrix(300, 1, rng).col(0).normalized();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lanczos(a, v0, state.range(0)));
  }
}
BENCHMARK(BM_Lanczos)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_SketchPetrovGalerkin(benchmark::State &state) {
  SeededRng rng(5);
  const DenseMatrix a = geometric_randsvd(200, 80, 1e12, rng);
  for (auto _ : state) {
    SeededRng r(6);
    const SketchResult s = sketch_subspaces(a, 20, static_cast<int>(state.range(0)), r);
    benchmark::DoNotOptimize(petrov_galerkin(a, s.left, s.right, TailMode::exact));
  }
}
BENCHMARK(BM_SketchPetrovGalerkin)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
