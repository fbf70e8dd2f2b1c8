#include <benchmark/benchmark.h>

#include "stabgen/pipeline.hpp"

using namespace stabgen;

namespace {

CMatrix random_matrix(std::size_t n, Rng& rng) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.normal();
  }
  return m;
}

void BM_Eigenvalues(benchmark::State& state) {
  Rng rng(1);
  const CMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues)->Arg(2)->Arg(4)->Arg(6)->Arg(9);

void BM_Gramian(benchmark::State& state) {
  Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const CMatrix a = random_matrix(n, rng);
  CMatrix b(n, 1);
  for (std::size_t i = 0; i < n; ++i) b(i, 0) = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(gramian_integral(a, b, 1.0));
}
BENCHMARK(BM_Gramian)->Arg(2)->Arg(4)->Arg(6);

void BM_Differentiate(benchmark::State& state) {
  DistributionConfig cfg;
  TreeSampler trees(cfg);
  Rng rng(3);
  const std::vector<Var> vars = {Var::state(0), Var::state(1), Var::state(2)};
  std::vector<Expr> exprs;
  for (int i = 0; i < 256; ++i) exprs.push_back(trees.sample(static_cast<int>(state.range(0)), vars, rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(differentiate(exprs[i++ % exprs.size()], vars[0]));
}
BENCHMARK(BM_Differentiate)->Arg(4)->Arg(12);

void BM_Record(benchmark::State& state) {
  const Task task = kAllTasks[static_cast<std::size_t>(state.range(0))];
  DistributionConfig cfg = default_config_for(std::string(task_name(task)));
  RecordFactory f(task, cfg);
  Rng rng(4);
  std::int64_t made = 0;
  for (auto _ : state) {
    try {
      made += f.next(rng).index() == 0;
    } catch (const Error&) {
    }
  }
  state.SetLabel(std::string(task_name(task)));
  state.counters["records/s"] = benchmark::Counter(static_cast<double>(made), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Record)->DenseRange(0, 5);

}  // namespace
BENCHMARK_MAIN();
