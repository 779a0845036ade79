#include <benchmark/benchmark.h>

#include "sspec/calculus.hpp"
#include "sspec/quadratic.hpp"
#include "sspec/s_spectrum.hpp"

namespace {

constexpr double kTheta = 1.2;

sspec::CliffordOperator testOperator(int n, int m) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    a(i, i) = (i % 2 ? -1.0 : 1.0) * (1.0 + i);
    if (i + 1 < m) a(i, i + 1) = 0.5;
  }
  return sspec::CliffordOperator::fromRealMatrix(n, a);
}

sspec::BisectorReport certified(const sspec::CliffordOperator& t) {
  sspec::RaySamplingPlan plan;
  plan.phis = {0.65, kTheta};
  return sspec::checkBisectorial(t, 0.1, plan);
}

void BM_ScanSlice(benchmark::State& state) {
  const auto t = testOperator(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const sspec::ScanGrid grid{-4.0, 4.0, 0.0, 2.0, 81, 41};
  for (auto _ : state) benchmark::DoNotOptimize(sspec::scanSpectrumSlice(t, grid));
}
BENCHMARK(BM_ScanSlice)->Args({1, 2})->Args({2, 4})->Args({3, 4})->Unit(benchmark::kMillisecond);

void BM_CheckBisectorial(benchmark::State& state) {
  const auto t = testOperator(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(certified(t));
}
BENCHMARK(BM_CheckBisectorial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_OmegaCalculus(benchmark::State& state) {
  const auto t = testOperator(1, static_cast<int>(state.range(0)));
  const auto report = certified(t);
  const auto e = sspec::regularizer(kTheta);
  sspec::ContourConfig cfg;
  cfg.nodes = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sspec::omegaCalculus(e, t, report, cfg));
}
BENCHMARK(BM_OmegaCalculus)->Args({2, 500})->Args({2, 2000})->Args({4, 2000})->Unit(benchmark::kMillisecond);

void BM_HInfCalculus(benchmark::State& state) {
  const auto t = testOperator(1, 2);
  const auto report = certified(t);
  const auto f = sspec::withSampledCertificates(sspec::rationalFunction({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, kTheta));
  for (auto _ : state) benchmark::DoNotOptimize(sspec::hInfCalculus(f, t, report));
}
BENCHMARK(BM_HInfCalculus)->Unit(benchmark::kMillisecond);

void BM_FrameBounds(benchmark::State& state) {
  const auto t = testOperator(1, 2);
  const auto report = certified(t);
  const auto e = sspec::regularizer(kTheta);
  sspec::QuadGridConfig q;
  q.nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sspec::frameBounds(e, t, report, q));
}
BENCHMARK(BM_FrameBounds)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SignIdentity(benchmark::State& state) {
  std::vector<Eigen::VectorXd> w;
  for (int k = 0; k < 2 * state.range(0); ++k) w.push_back(Eigen::VectorXd::Constant(4, 1.0 + k));
  for (auto _ : state) benchmark::DoNotOptimize(sspec::signIdentity(w));
}
BENCHMARK(BM_SignIdentity)->Arg(3)->Arg(6)->Arg(10);

}  // namespace
BENCHMARK_MAIN();
