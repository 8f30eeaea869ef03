#include "grasspca/harness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "grasspca/channel.hpp"
#include "grasspca/estimators.hpp"
#include "grasspca/scenario.hpp"

namespace grasspca {

namespace {

struct NoiseSetup {
  double sigma_d_sq = 0.0;
  double sigma_c_sq = 0.0;
};

NoiseSetup noise_from_config(const ScenarioConfig& config) {
  const double gamma_d = db_to_linear(config.gamma_d_db);
  const double gamma_c = db_to_linear(config.gamma_c_db);
  const double sigma_d_sq =
      data_snr_to_sigma(config.subspace_dim, config.ambient_dim, gamma_d);
  const double power =
      transmit_power(config.subspace_dim, config.ambient_dim, gamma_d);
  return NoiseSetup{sigma_d_sq, channel_snr_to_sigma(power, gamma_c)};
}

int partition_blocks(const ScenarioConfig& config) {
  return (config.subspace_dim + config.transmit_antennas - 1) /
         config.transmit_antennas;
}

struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  long count = 0;

  void add(double value) {
    sum += value;
    sum_sq += value * value;
    ++count;
  }

  double mean() const { return count > 0 ? sum / count : 0.0; }

  double std_error() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

}  // namespace

TrialOutcome run_trial(const ScenarioConfig& config, long trial_index) {
  config.validate();
  const NoiseSetup noise = noise_from_config(config);
  const auto t = static_cast<std::uint64_t>(trial_index);
  const std::uint64_t truth_trial = config.fixed_truth ? 0 : t;

  Rng truth_rng(
      derive_seed(config.master_seed, truth_trial, 0, 0, StreamRole::kTruth));
  const SubspaceBasis truth =
      random_subspace(config.subspace_dim, config.ambient_dim, truth_rng);

  const bool want_coherent = config.estimator == EstimatorKind::kCoherent ||
                             config.estimator == EstimatorKind::kBoth;
  const bool want_blind = config.estimator == EstimatorKind::kBlind ||
                          config.estimator == EstimatorKind::kBoth;
  const bool want_uniform = config.estimator == EstimatorKind::kUniform;
  const bool need_channel = want_coherent || want_blind;

  std::vector<ReceivedSymbol> received;
  std::vector<Matrix> locals;
  if (need_channel) received.reserve(config.devices);
  if (want_uniform) locals.reserve(config.devices);
  int redraws = 0;

  try {
    for (long k = 0; k < config.devices; ++k) {
      const auto device = static_cast<std::uint64_t>(k);
      Rng data_rng(derive_seed(config.master_seed, t, device, 0,
                               StreamRole::kData));
      Matrix local = truth.matrix();
      if (noise.sigma_d_sq > 0.0) {
        local += gaussian_matrix(config.subspace_dim, config.ambient_dim,
                                 noise.sigma_d_sq, data_rng);
      }
      if (want_uniform) {
        locals.push_back(std::move(local));
        continue;
      }

      Rng noise_rng(derive_seed(config.master_seed, t, device, 0,
                                StreamRole::kNoise));
      switch (config.extension) {
        case ExtensionKind::kNone: {
          Rng chan_rng(derive_seed(config.master_seed, t, device, 0,
                                   StreamRole::kChannel));
          const RealStackedChannel channel =
              draw_channel(config.receive_antennas, config.subspace_dim,
                           chan_rng, &redraws);
          received.push_back(transmit(local, channel, noise.sigma_c_sq,
                                      noise_rng, static_cast<int>(k)));
          break;
        }
        case ExtensionKind::kAdaptUp: {
          Rng chan_rng(derive_seed(config.master_seed, t, device, 0,
                                   StreamRole::kChannel));
          Rng map_rng(derive_seed(config.master_seed, t, device, 0,
                                  StreamRole::kMapping));
          const RealStackedChannel channel = draw_channel(
              config.receive_antennas, config.transmit_antennas, chan_rng,
              &redraws);
          const Matrix mapping = draw_antenna_mapping(
              config.transmit_antennas, config.subspace_dim, map_rng);
          received.push_back(transmit_mapped(local, channel, mapping,
                                             noise.sigma_c_sq, noise_rng,
                                             static_cast<int>(k)));
          break;
        }
        case ExtensionKind::kPartition: {
          std::vector<RealStackedChannel> blocks;
          const int count = partition_blocks(config);
          blocks.reserve(count);
          for (int b = 0; b < count; ++b) {
            Rng chan_rng(derive_seed(config.master_seed, t, device,
                                     static_cast<std::uint64_t>(b),
                                     StreamRole::kChannel));
            blocks.push_back(draw_channel(config.receive_antennas,
                                          config.transmit_antennas, chan_rng,
                                          &redraws));
          }
          received.push_back(partition_transmit(local, blocks,
                                                noise.sigma_c_sq, noise_rng,
                                                static_cast<int>(k)));
          break;
        }
      }
    }

    TrialOutcome outcome;
    outcome.channel_redraws = redraws;
    if (want_coherent) {
      const Estimate estimate = coherent_estimate(
          CoherentInput{received, noise.sigma_d_sq, noise.sigma_c_sq},
          config.subspace_dim);
      outcome.coherent = subspace_distance_squared(estimate.basis, truth);
    }
    if (want_blind) {
      const Estimate estimate = blind_estimate(received, config.subspace_dim);
      outcome.blind = subspace_distance_squared(estimate.basis, truth);
    }
    if (want_uniform) {
      const Estimate estimate = uniform_aggregate(locals, config.subspace_dim);
      outcome.uniform = subspace_distance_squared(estimate.basis, truth);
    }
    return outcome;
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError(
        "trial " + std::to_string(trial_index) + ": " + e.what(), e.detail());
  }
}

double matching_bound(const ScenarioConfig& config, EstimatorKind estimator) {
  const NoiseSetup noise = noise_from_config(config);
  const BoundInput input{config.subspace_dim, config.ambient_dim,
                         static_cast<int>(config.devices),
                         config.receive_antennas, noise.sigma_d_sq,
                         noise.sigma_c_sq};
  const bool partitioned = config.extension == ExtensionKind::kPartition;
  switch (estimator) {
    case EstimatorKind::kCoherent:
      return partitioned
                 ? coherent_bound_partitioned(input, config.transmit_antennas)
                 : coherent_bound(input);
    case EstimatorKind::kBlind:
      return partitioned
                 ? blind_bound_partitioned(input, config.transmit_antennas)
                 : blind_bound(input);
    case EstimatorKind::kUniform:
      return uniform_aggregation_bound(config.subspace_dim,
                                       config.ambient_dim,
                                       static_cast<int>(config.devices),
                                       noise.sigma_d_sq);
    case EstimatorKind::kBoth:
      throw InvalidInputError("matching_bound: pick a single estimator");
  }
  throw InvalidInputError("matching_bound: unknown estimator");
}

std::vector<std::pair<EstimatorKind, MssdEstimate>> run_ensemble(
    const ScenarioConfig& config) {
  config.validate();
  const long trials = config.trials;

  std::vector<EstimatorKind> kinds;
  if (config.estimator == EstimatorKind::kBoth) {
    kinds = {EstimatorKind::kCoherent, EstimatorKind::kBlind};
  } else {
    kinds = {config.estimator};
  }

  // NaN marks an excluded (degenerate) trial.
  const double nan = std::nan("");
  std::vector<std::vector<double>> results(
      kinds.size(), std::vector<double>(trials, nan));
  std::vector<char> excluded(trials, 0);
  std::vector<int> redraws(trials, 0);

  int thread_count = config.threads > 0
                         ? config.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (thread_count < 1) thread_count = 1;
  thread_count = static_cast<int>(
      std::min<long>(thread_count, trials));

  auto worker = [&](long begin, long end) {
    for (long trial = begin; trial < end; ++trial) {
      try {
        const TrialOutcome outcome = run_trial(config, trial);
        redraws[trial] = outcome.channel_redraws;
        for (std::size_t i = 0; i < kinds.size(); ++i) {
          const auto& value = kinds[i] == EstimatorKind::kCoherent
                                  ? outcome.coherent
                                  : kinds[i] == EstimatorKind::kBlind
                                        ? outcome.blind
                                        : outcome.uniform;
          if (value) results[i][trial] = *value;
        }
      } catch (const DegenerateInputError&) {
        excluded[trial] = 1;
      }
    }
  };

  if (thread_count == 1) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    const long chunk = (trials + thread_count - 1) / thread_count;
    for (int i = 0; i < thread_count; ++i) {
      const long begin = i * chunk;
      const long end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& thread : pool) thread.join();
  }

  long excluded_count = 0;
  long redraw_count = 0;
  for (long trial = 0; trial < trials; ++trial) {
    if (excluded[trial]) ++excluded_count;
    redraw_count += redraws[trial];
  }
  if (excluded_count * 1000 >= trials) {
    throw Error("run_ensemble: degenerate-trial rate " +
                std::to_string(excluded_count) + "/" + std::to_string(trials) +
                " exceeds 0.1%");
  }

  std::vector<std::pair<EstimatorKind, MssdEstimate>> out;
  out.reserve(kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    MeanAccumulator acc;
    for (long trial = 0; trial < trials; ++trial) {  // ascending, one thread
      if (!excluded[trial]) acc.add(results[i][trial]);
    }
    MssdEstimate estimate;
    estimate.mean = acc.mean();
    estimate.std_error = acc.std_error();
    estimate.trials = acc.count;
    estimate.bound = matching_bound(config, kinds[i]);
    estimate.excluded_trials = excluded_count;
    estimate.channel_redraws = redraw_count;
    estimate.single_sample = acc.count == 1;
    out.emplace_back(kinds[i], estimate);
  }
  return out;
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "K") return SweepAxis::kDevices;
  if (name == "gamma_d") return SweepAxis::kGammaD;
  if (name == "gamma_c") return SweepAxis::kGammaC;
  if (name == "M") return SweepAxis::kSubspaceDim;
  if (name == "N_r") return SweepAxis::kReceiveAntennas;
  throw InvalidInputError("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kDevices: return "K";
    case SweepAxis::kGammaD: return "gamma_d";
    case SweepAxis::kGammaC: return "gamma_c";
    case SweepAxis::kSubspaceDim: return "M";
    case SweepAxis::kReceiveAntennas: return "N_r";
  }
  return "?";
}

namespace {

ScenarioConfig with_axis_value(const ScenarioConfig& base, SweepAxis axis,
                               double value) {
  ScenarioConfig config = base;
  switch (axis) {
    case SweepAxis::kDevices:
      config.devices = static_cast<long>(value);
      break;
    case SweepAxis::kGammaD:
      config.gamma_d_db = value;
      break;
    case SweepAxis::kGammaC:
      config.gamma_c_db = value;
      break;
    case SweepAxis::kSubspaceDim:
      config.subspace_dim = static_cast<int>(value);
      break;
    case SweepAxis::kReceiveAntennas:
      config.receive_antennas = static_cast<int>(value);
      break;
  }
  return config;
}

SweepRow row_skeleton(const ScenarioConfig& config, SweepAxis axis,
                      double value) {
  SweepRow row;
  row.axis = to_string(axis);
  row.axis_value = value;
  row.subspace_dim = config.subspace_dim;
  row.ambient_dim = config.ambient_dim;
  row.transmit_antennas = config.transmit_antennas;
  row.receive_antennas = config.receive_antennas;
  row.devices = config.devices;
  row.gamma_d_db = config.gamma_d_db;
  row.gamma_c_db = config.gamma_c_db;
  row.trials = config.trials;
  row.master_seed = config.master_seed;
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const ScenarioConfig& config, SweepAxis axis,
                            const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  for (double value : values) {
    const ScenarioConfig point = with_axis_value(config, axis, value);
    std::vector<EstimatorKind> kinds;
    if (point.estimator == EstimatorKind::kBoth) {
      kinds = {EstimatorKind::kCoherent, EstimatorKind::kBlind};
    } else {
      kinds = {point.estimator};
    }
    try {
      const auto ensembles = run_ensemble(point);
      for (const auto& [kind, estimate] : ensembles) {
        SweepRow row = row_skeleton(point, axis, value);
        row.estimator = to_string(kind);
        row.mssd_mean = estimate.mean;
        row.mssd_stderr = estimate.std_error;
        row.bound = estimate.bound;
        row.trials = estimate.trials;
        row.excluded_trials = estimate.excluded_trials;
        rows.push_back(std::move(row));
      }
    } catch (const Error&) {
      // Point-level failure: keep the grid going, mark the row.
      const double nan = std::nan("");
      for (EstimatorKind kind : kinds) {
        SweepRow row = row_skeleton(point, axis, value);
        row.estimator = to_string(kind);
        row.mssd_mean = nan;
        row.mssd_stderr = nan;
        row.bound = nan;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

long empirical_analog_devices(const ScenarioConfig& config, double target) {
  if (!(target > 0.0)) {
    throw InvalidInputError("empirical_analog_devices: need target > 0");
  }
  ScenarioConfig probe = config;
  if (probe.estimator == EstimatorKind::kBoth) {
    probe.estimator = EstimatorKind::kCoherent;
  }

  auto measured = [&](long devices) {
    probe.devices = devices;
    return run_ensemble(probe).front().second.mean;
  };

  // Bracket around the bound-based guess, then bisect.
  long upper = std::max<long>(
      1, static_cast<long>(std::ceil(matching_bound(probe, probe.estimator) /
                                     target)));
  while (measured(upper) > target) {
    upper *= 2;
    if (upper > (1L << 24)) {
      throw Error("empirical_analog_devices: target unreachable");
    }
  }
  long lower = 1;
  if (measured(lower) <= target) return lower;
  while (upper - lower > 1) {
    const long mid = lower + (upper - lower) / 2;
    if (measured(mid) <= target) {
      upper = mid;
    } else {
      lower = mid;
    }
  }
  return upper;
}

}  // namespace grasspca
