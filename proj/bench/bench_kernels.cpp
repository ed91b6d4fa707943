// Serial reference vs OpenMP kernels for the two Monte Carlo drivers.

#include "shrinkreg/crossval.hpp"
#include "shrinkreg/io.hpp"
#include "shrinkreg/simulation.hpp"

#include <benchmark/benchmark.h>

using namespace shrinkreg;

namespace {

SimConfig sweep_config(int threads) {
  SimConfig cfg;
  cfg.replications = 200;
  cfg.seed = 1;
  cfg.threads = threads;
  return cfg;
}

struct CvSetup {
  Analysis analysis;
  CvConfig cfg;
};

CvSetup cv_setup(int threads) {
  AnalysisSpec spec;
  spec.data = "prostate";
  spec.sub = {"lcavol", "lweight"};
  CvSetup s{build_analysis(spec), {}};
  s.cfg.repetitions = 100;
  s.cfg.seed = 1;
  s.cfg.threads = threads;
  for (auto kind : {EstimatorKind::Unrestricted, EstimatorKind::Restricted, EstimatorKind::PositiveStein,
                    EstimatorKind::Pretest}) {
    s.cfg.estimators.push_back({kind, s.analysis.restriction, ""});
  }
  return s;
}

void BM_SweepSerial(benchmark::State& state) {
  const SimConfig cfg = sweep_config(1);
  for (auto _ : state) benchmark::DoNotOptimize(rmse_sweep_serial(cfg));
}

void BM_SweepParallel(benchmark::State& state) {
  const SimConfig cfg = sweep_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rmse_sweep(cfg));
}

void BM_CvSerial(benchmark::State& state) {
  const CvSetup s = cv_setup(1);
  for (auto _ : state) benchmark::DoNotOptimize(repeated_cv_serial(s.analysis.data, s.cfg));
}

void BM_CvParallel(benchmark::State& state) {
  const CvSetup s = cv_setup(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(repeated_cv(s.analysis.data, s.cfg));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CvSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CvParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
