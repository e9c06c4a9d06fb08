#include <benchmark/benchmark.h>

#include "rsimle/datasets.hpp"
#include "rsimle/distributions.hpp"
#include "rsimle/metrics.hpp"
#include "rsimle/net.hpp"
#include "rsimle/nn_index.hpp"
#include "rsimle/sampler.hpp"
#include "rsimle/trainer.hpp"

namespace {

rsimle::Tensor2 toy_data() {
  rsimle::ToyDatasetSpec spec;
  spec.shape = rsimle::ToyShape::kInfinitySymbol;
  spec.n_points = 20;
  return rsimle::make_dataset(spec);
}

void BM_ForwardBatch(benchmark::State& state) {
  const rsimle::GeneratorNet net({2, 32, 32, 2}, rsimle::Activation::kTanh, 1);
  rsimle::PriorSampler prior(2, 2);
  const rsimle::Tensor2 z = prior.draw_gaussian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(z));
  }
}
BENCHMARK(BM_ForwardBatch)->Arg(20)->Arg(200);

void BM_ForwardBackward(benchmark::State& state) {
  const rsimle::GeneratorNet net({2, 32, 32, 2}, rsimle::Activation::kTanh, 1);
  rsimle::PriorSampler prior(2, 2);
  const rsimle::Tensor2 z = prior.draw_gaussian(20);
  rsimle::Tensor2 grad(20, 2, 1.0);
  for (auto _ : state) {
    rsimle::GradientTape tape;
    benchmark::DoNotOptimize(net.forward(z, tape));
    benchmark::DoNotOptimize(net.backward(tape, grad));
  }
}
BENCHMARK(BM_ForwardBackward);

void BM_PairwiseDistances(benchmark::State& state) {
  const rsimle::Tensor2 data = toy_data();
  rsimle::PriorSampler prior(2, 3);
  const rsimle::Tensor2 samples = prior.draw_gaussian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsimle::pairwise_distances(data, samples));
  }
}
BENCHMARK(BM_PairwiseDistances)->Arg(200)->Arg(1000);

void BM_RejectionEpochDraw(benchmark::State& state) {
  const rsimle::GeneratorNet net({2, 32, 32, 2}, rsimle::Activation::kTanh, 1);
  const rsimle::Tensor2 data = toy_data();
  for (auto _ : state) {
    rsimle::PriorSampler prior(2, 4);
    benchmark::DoNotOptimize(rsimle::rejection_sample(prior, net, data, 0.2, 200));
  }
}
BENCHMARK(BM_RejectionEpochDraw);

void BM_NoncentralChiSquaredCdf(benchmark::State& state) {
  const rsimle::NoncentralChiSquared dist(3.0, 2.0);
  double x = 0.0;
  for (auto _ : state) {
    x += 0.1;
    if (x > 20.0) x = 0.1;
    benchmark::DoNotOptimize(dist.cdf(x));
  }
}
BENCHMARK(BM_NoncentralChiSquaredCdf);

void BM_FrechetDistance(benchmark::State& state) {
  rsimle::PriorSampler prior(2, 5);
  const rsimle::GaussianFit a = rsimle::fit_gaussian(prior.draw_gaussian(500));
  const rsimle::GaussianFit b = rsimle::fit_gaussian(prior.draw_gaussian(500));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsimle::frechet_distance(a, b));
  }
}
BENCHMARK(BM_FrechetDistance);

void BM_TrainEpoch(benchmark::State& state) {
  rsimle::TrainerConfig cfg;
  cfg.objective = rsimle::Objective::kRsImle;
  cfg.epsilon = 0.2;
  cfg.epochs = 1;
  for (auto _ : state) {
    state.PauseTiming();
    rsimle::Trainer trainer(cfg, toy_data());
    state.ResumeTiming();
    benchmark::DoNotOptimize(trainer.run_epoch());
  }
}
BENCHMARK(BM_TrainEpoch);

}  // namespace

BENCHMARK_MAIN();
