#include <benchmark/benchmark.h>

#include "cfdim/oracle.hpp"
#include "cfdim/spectral.hpp"
#include "cfdim/transfer.hpp"

using namespace cfdim;

static void BM_IntervalPow(benchmark::State& state) {
  RInterval x = RInterval::ratio(7, 3), t(-1.644);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pow(x, t));
  }
}
BENCHMARK(BM_IntervalPow);

// Deposits are M * (N + 1) per matrix; report them as items.
static void BM_AssembleOdd(benchmark::State& state) {
  Alphabet a = Alphabet::parse("odd");
  const auto M = static_cast<std::size_t>(state.range(0));
  const auto N = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    TransferPair tp = assemble(a, M, N, RInterval(0.8212), true);
    benchmark::DoNotOptimize(tp.B.nnz());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(M * (N + 1)));
}
BENCHMARK(BM_AssembleOdd)->Args({10000, 100})->Args({100000, 100})->Unit(benchmark::kMillisecond);

static void BM_AssemblePowers(benchmark::State& state) {
  Alphabet a = Alphabet::parse("powers:2");
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    TransferPair tp = assemble(a, 50, N, RInterval(0.4720715), true);
    benchmark::DoNotOptimize(tp.A.nnz());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(50 * (N + 1)));
}
BENCHMARK(BM_AssemblePowers)->Arg(1000)->Arg(6000)->Unit(benchmark::kMillisecond);

static void BM_Perron(benchmark::State& state) {
  TransferPair tp = assemble(Alphabet::parse("powers:2"), 50, static_cast<std::size_t>(state.range(0)), RInterval(0.4720715), true);
  for (auto _ : state) {
    PerronEstimate e = estimate_perron(tp.B);
    benchmark::DoNotOptimize(e.radius);
  }
}
BENCHMARK(BM_Perron)->Arg(1000)->Arg(6000)->Unit(benchmark::kMillisecond);

static void BM_CertifyFinite(benchmark::State& state) {
  Alphabet a = Alphabet::parse("explicit:1,4,7,10,13");
  BisectionOptions bo;
  bo.tol = 1e-6;
  for (auto _ : state) {
    DimensionCertificate c = certify_dimension(a, 0, 1000, Strategy::Finite, bo);
    benchmark::DoNotOptimize(c.h_hi);
  }
}
BENCHMARK(BM_CertifyFinite)->Unit(benchmark::kMillisecond);

static void BM_OracleDimension(benchmark::State& state) {
  for (auto _ : state) {
    auto b = oracle::dimension_oracle({1, 2}, 1e-12, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(b.estimate);
  }
}
BENCHMARK(BM_OracleDimension)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
