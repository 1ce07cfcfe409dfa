#include <benchmark/benchmark.h>

#include "mbsp/sampler.hpp"
#include "mbsp/simulation.hpp"

namespace {

mbsp::Dataset make_data(Eigen::Index n, Eigen::Index p, Eigen::Index q) {
  mbsp::ExperimentConfig config;
  config.n = n;
  config.p = p;
  config.q = q;
  config.n_active = std::min<Eigen::Index>(10, p);
  mbsp::RngStream rng(1);
  return mbsp::gen_synthetic(config, rng).first;
}

// One B draw for n = 100, q = 3 as p grows; range(1) selects the path.
void BM_CoefficientDraw(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(0));
  const auto path = state.range(1) == 0 ? mbsp::CoefficientPath::naive : mbsp::CoefficientPath::fast;
  const auto data = make_data(100, p, 3);
  const mbsp::CoefficientSampler sampler(data, path);
  const mbsp::Vector psi = mbsp::Vector::Constant(p, 0.5);
  const mbsp::Matrix sigma = mbsp::Matrix::Identity(3, 3);
  mbsp::RngStream rng(2);
  mbsp::StreamNoise noise(rng);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(sigma, psi, noise));
  state.SetComplexityN(p);
}
BENCHMARK(BM_CoefficientDraw)
    ->ArgsProduct({{50, 100, 200, 500, 1000}, {0, 1}})
    ->Unit(benchmark::kMicrosecond);

// Full Gibbs iterations on a preset design; reported per iteration.
void BM_ChainIteration(benchmark::State& state) {
  const auto config = mbsp::experiment_preset(static_cast<int>(state.range(0)));
  mbsp::RngStream rng(3);
  const auto data = mbsp::gen_synthetic(config, rng).first;
  mbsp::Hyperparameters hyper;
  hyper.iterations = 50;
  hyper.burn_in = 49;
  for (auto _ : state) benchmark::DoNotOptimize(mbsp::run_chain(data, hyper));
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_ChainIteration)->Arg(1)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
