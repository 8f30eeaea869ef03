#include <benchmark/benchmark.h>

#include <grasspca/channel.hpp>
#include <grasspca/estimators.hpp>
#include <grasspca/harness.hpp>
#include <grasspca/scenario.hpp>

using namespace grasspca;

namespace {

std::vector<ReceivedSymbol> reference_symbols(int devices) {
  const double gamma = db_to_linear(10.0);
  const double sigma_d_sq = data_snr_to_sigma(8, 200, gamma);
  const double sigma_c_sq =
      channel_snr_to_sigma(transmit_power(8, 200, gamma), gamma);
  Rng truth_rng(derive_seed(1, 0, 0, 0, StreamRole::kTruth));
  const SubspaceBasis truth = random_subspace(8, 200, truth_rng);

  std::vector<ReceivedSymbol> received;
  for (int k = 0; k < devices; ++k) {
    Rng data(derive_seed(1, 0, k, 0, StreamRole::kData));
    Rng chan(derive_seed(1, 0, k, 0, StreamRole::kChannel));
    Rng noise(derive_seed(1, 0, k, 0, StreamRole::kNoise));
    const Matrix local =
        truth.matrix() + gaussian_matrix(8, 200, sigma_d_sq, data);
    received.push_back(
        transmit(local, draw_channel(16, 8, chan), sigma_c_sq, noise, k));
  }
  return received;
}

}  // namespace

static void BM_GaussianMatrix(benchmark::State& state) {
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_matrix(32, 200, 1.0, rng));
  }
  state.SetItemsProcessed(state.iterations() * 32 * 200);
}
BENCHMARK(BM_GaussianMatrix);

static void BM_DrawChannel(benchmark::State& state) {
  Rng rng(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_channel(16, 8, rng));
  }
}
BENCHMARK(BM_DrawChannel);

static void BM_DetectSingleSymbol(benchmark::State& state) {
  const auto received = reference_symbols(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect_single_symbol(received.front(), 8));
  }
}
BENCHMARK(BM_DetectSingleSymbol);

static void BM_CoherentEstimate(benchmark::State& state) {
  const auto received = reference_symbols(static_cast<int>(state.range(0)));
  const CoherentInput input{received, 0.004, 0.0072};
  for (auto _ : state) {
    benchmark::DoNotOptimize(coherent_estimate(input, 8));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoherentEstimate)->Arg(10)->Arg(100)->Complexity();

static void BM_BlindEstimate(benchmark::State& state) {
  const auto received = reference_symbols(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blind_estimate(received, 8));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BlindEstimate)->Arg(10)->Arg(100)->Complexity();

static void BM_RunTrial(benchmark::State& state) {
  ScenarioConfig config;
  config.devices = state.range(0);
  config.estimator = EstimatorKind::kBoth;
  long trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trial(config, trial++));
  }
}
BENCHMARK(BM_RunTrial)->Arg(100);

BENCHMARK_MAIN();
