// Serial reference vs OpenMP estimate(), plus the per-replicate kernels.

#include <benchmark/benchmark.h>

#include "dfwer/exact_tests.hpp"
#include "dfwer/goldens.hpp"
#include "dfwer/procedures.hpp"
#include "dfwer/simulation.hpp"

namespace {

dfwer::SimConfig bench_config(std::size_t replicates) {
  dfwer::SimConfig cfg;
  cfg.test_kind = dfwer::TestKind::FET;
  cfg.m = 10;
  cfg.pi0 = 0.8;
  cfg.sample_size = 100;
  cfg.replicates = replicates;
  return cfg;
}

constexpr std::array kProcedures{dfwer::ProcedureId::MBonf, dfwer::ProcedureId::MHolm, dfwer::ProcedureId::MHoch,
                                 dfwer::ProcedureId::Tarone, dfwer::ProcedureId::Bonf};

void BM_EstimateSerial(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dfwer::estimate_serial(cfg, kProcedures));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateSerial)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_EstimateOpenMP(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dfwer::estimate(cfg, kProcedures));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateOpenMP)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FisherExact(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dfwer::fisher_exact({n / 10, n / 5, n, n}, dfwer::Alternative::TwoSided));
  }
}
BENCHMARK(BM_FisherExact)->Arg(50)->Arg(600);

void BM_ClinicalAllProcedures(benchmark::State& state) {
  const auto family = dfwer::clinical_family();
  for (auto _ : state) {
    for (auto id : dfwer::all_procedures()) benchmark::DoNotOptimize(dfwer::apply(id, family, 0.05));
  }
}
BENCHMARK(BM_ClinicalAllProcedures);

}  // namespace

BENCHMARK_MAIN();
