#include <benchmark/benchmark.h>

#include "voi/voi.hpp"

namespace {

using namespace voi;

void BM_SamplePosteriorBlock(benchmark::State& state) {
  const Index d = state.range(0);
  const PosteriorOperator op = random_bounded_operator(d, SpectralBand(0.5, 2.0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_posterior_block(op, 0, 4096, 7));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_SamplePosteriorBlock)->Arg(8)->Arg(64)->Arg(512);

void BM_EstimateVoi(benchmark::State& state) {
  const Index d = state.range(0);
  const PosteriorOperator op = random_bounded_operator(d, SpectralBand(0.5, 2.0), 1);
  const ActionSet set = ActionSet::linf_ball(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_voi(op, set, 100000, 3).mean);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_EstimateVoi)->Arg(8)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GreedyPacking(benchmark::State& state) {
  const Index d = 4;
  const ActionSet set = ActionSet::l2_ball(d);
  const PointCloud cloud = PointCloud::generate(set, state.range(0), CloudProvenance::LowDiscrepancy, 1);
  const IntrinsicMetric metric(random_bounded_operator(d, SpectralBand(0.5, 2.0), 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_packing(cloud, metric, 0.5).size());
  }
}
BENCHMARK(BM_GreedyPacking)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_DudleyUpper(benchmark::State& state) {
  const Index d = state.range(0);
  const PosteriorOperator op = random_bounded_operator(d, SpectralBand(0.5, 2.0), 1);
  const ActionSet set = ActionSet::l2_ball(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dudley_upper(set, op, 512));
  }
}
BENCHMARK(BM_DudleyUpper)->Arg(16)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
