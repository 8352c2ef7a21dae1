// Serial vs OpenMP timings for the batched QP solver and multi-scenario runs.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "inputsafe/qp.hpp"
#include "inputsafe/scenario.hpp"
#include "inputsafe/sim.hpp"

using namespace inputsafe;

namespace {

std::vector<QPProblem> random_problems(std::size_t n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<QPProblem> out(n);
  for (auto& p : out) {
    p.dim = 2;
    for (int r = 0; r < 3; ++r) {
      QPRow row;
      row.a = Eigen::Vector2d(g(rng), g(rng));
      row.b = g(rng);
      row.sense = r == 0 ? Sense::LE : Sense::GE;
      row.kind = r == 0 ? RowKind::CLF : RowKind::CBF;
      p.rows.push_back(row);
    }
  }
  return out;
}

std::vector<Scenario> sweep(std::size_t n) {
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < n; ++i) {
    Scenario s = builtin_scenario("case1");
    s.run.horizon = 2.0;
    s.x0(0) = 3.0 + 0.1 * static_cast<double>(i);
    out.push_back(s);
  }
  return out;
}

void BM_QpBatchSerial(benchmark::State& st) {
  const auto probs = random_problems(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_batch_serial(probs));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_QpBatchOmp(benchmark::State& st) {
  const auto probs = random_problems(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(solve_batch(probs));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_RunManySerial(benchmark::State& st) {
  const auto runs = sweep(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(run_many_serial(runs));
}

void BM_RunManyOmp(benchmark::State& st) {
  const auto runs = sweep(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(run_many(runs));
}

}  // namespace

BENCHMARK(BM_QpBatchSerial)->Arg(10000)->Arg(100000)->UseRealTime();
BENCHMARK(BM_QpBatchOmp)->Arg(10000)->Arg(100000)->UseRealTime();
BENCHMARK(BM_RunManySerial)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RunManyOmp)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
