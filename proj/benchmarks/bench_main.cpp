#include <benchmark/benchmark.h>

#include "simplexdyn/simplexdyn.hpp"

using namespace simplexdyn;

namespace {

Matrix telema() { return Matrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}; }

void BM_IlrRoundTrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ContrastMatrix c = contrast_matrix(n);
  Rng rng(1);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector x(n - 1);
  for (int i = 0; i < n - 1; ++i) x[i] = nd(rng);
  for (auto _ : state) {
    const Composition p = ilr_inv(IlrPoint(x), c);
    benchmark::DoNotOptimize(ilr(p, c));
  }
}
BENCHMARK(BM_IlrRoundTrip)->Arg(3)->Arg(8)->Arg(32);

void BM_ChartDriftEval(benchmark::State& state) {
  ChartDrift f = ChartDrift::replicator(PayoffMatrix(telema() - 10 * Matrix::Identity(3, 3)));
  Vector x = Vector::Zero(2), out(2);
  for (auto _ : state) {
    f.eval(x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ChartDriftEval);

void BM_SdeTerminal(benchmark::State& state) {
  SdeConfig cfg;
  cfg.dt = 1e-3;
  const DriftKind d = ReplicatorDrift{PayoffMatrix(-3 * Matrix::Identity(3, 3))};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.master_seed = seed++;
    benchmark::DoNotOptimize(sde_terminal_ilr(d, Composition::barycenter(3), cfg));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SdeTerminal);

void BM_IntegrateReplicator(benchmark::State& state) {
  OdeConfig cfg;
  cfg.t_end = 10.0;
  cfg.dt = 0.01;
  cfg.record_every = 100;
  const PayoffMatrix a(telema() - 10 * Matrix::Identity(3, 3));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_replicator(a, Composition::barycenter(3), cfg));
}
BENCHMARK(BM_IntegrateReplicator);

void BM_EnumerateNash(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  std::normal_distribution<double> nd(0.0, 3.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = nd(rng);
  const PayoffMatrix a(m);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_nash(a));
}
BENCHMARK(BM_EnumerateNash)->DenseRange(2, 5);

void BM_JkoStep(benchmark::State& state) {
  const auto q0 = QuantileDensity::gaussian(static_cast<int>(state.range(0)), 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(jko_step(q0, 0.01));
}
BENCHMARK(BM_JkoStep)->Arg(100)->Arg(1000);

void BM_EnergyDistance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Vector> a(n, Vector(2)), b(n, Vector(2));
  for (int k = 0; k < n; ++k) {
    a[k] << nd(rng), nd(rng);
    b[k] << nd(rng), nd(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(energy_distance(a, b));
}
BENCHMARK(BM_EnergyDistance)->Arg(500)->Arg(2000);

}  // namespace
BENCHMARK_MAIN();
