// Acceptance suite: runs every acceptance criterion at its stated trial
// count and tolerance, printing one [PASS]/[FAIL] line per criterion.
// Nonzero exit when any criterion fails.
//
// Run a single criterion with `acceptance --criterion N` while iterating;
// the full suite takes roughly half an hour on two cores.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <grasspca/channel.hpp>
#include <grasspca/digital_baseline.hpp>
#include <grasspca/estimators.hpp>
#include <grasspca/harness.hpp>
#include <grasspca/scenario.hpp>

using namespace grasspca;

namespace {

constexpr std::uint64_t kSeed = 20250810;
constexpr long kGridTrials = 2000;

ScenarioConfig default_config() {
  ScenarioConfig config;  // M=8, N=200, N_t=8, N_r=16 defaults
  config.trials = kGridTrials;
  config.estimator = EstimatorKind::kBoth;
  config.master_seed = kSeed;
  return config;
}

struct GridPoint {
  MssdEstimate coherent;
  MssdEstimate blind;
};

// (snr_db, K) -> ensembles, computed once and shared across criteria 1-5.
class GridCache {
 public:
  const GridPoint& at(double snr_db, long devices) {
    const auto key = std::make_pair(snr_db, devices);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    ScenarioConfig config = default_config();
    config.gamma_d_db = snr_db;
    config.gamma_c_db = snr_db;
    config.devices = devices;
    std::fprintf(stderr, "  [grid] K=%ld, %g dB, %ld trials...\n", devices,
                 snr_db, config.trials);
    const auto results = run_ensemble(config);
    GridPoint point{results[0].second, results[1].second};
    return cache_.emplace(key, std::move(point)).first->second;
  }

 private:
  std::map<std::pair<double, long>, GridPoint> cache_;
};

const std::vector<double> kSnrGrid = {0.0, 5.0, 10.0};
const std::vector<long> kDeviceGrid = {10, 100, 1000};

double regression_slope(const std::vector<double>& devices,
                        const std::vector<double>& means) {
  const std::size_t n = devices.size();
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_mean += std::log(devices[i]);
    y_mean += std::log(means[i]);
  }
  x_mean /= n;
  y_mean /= n;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(devices[i]) - x_mean;
    num += dx * (std::log(means[i]) - y_mean);
    den += dx * dx;
  }
  return num / den;
}

struct Criterion {
  int id;
  const char* title;
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_double(v); }

// --- criteria -------------------------------------------------------------

Criterion criterion_1(GridCache& grid) {
  Criterion c{1, "coherent MSSD within the analytic bound on the full grid"};
  c.pass = true;
  const double reference = coherent_bound(BoundInput{8, 200, 1000, 16,
                                                     0.004, 0.0072});
  if (std::abs(reference - 1.3250e-2) / 1.3250e-2 > 1e-3) {
    c.pass = false;
    c.detail = "reference bound mismatch: " + fmt(reference);
    return c;
  }
  double worst_margin = -1e9;
  for (double snr : kSnrGrid) {
    for (long devices : kDeviceGrid) {
      const auto& point = grid.at(snr, devices);
      const double slack = point.coherent.bound +
                           3.0 * point.coherent.std_error -
                           point.coherent.mean;
      worst_margin = std::max(worst_margin, -slack);
      if (slack < 0.0) {
        c.pass = false;
        c.detail += " violated at (" + std::to_string(devices) + ", " +
                    fmt(snr) + " dB): mean " + fmt(point.coherent.mean) +
                    " vs bound " + fmt(point.coherent.bound) + ";";
      }
    }
  }
  if (c.pass) {
    c.detail = "9/9 points compliant; worst mean-(bound+3se) = " +
               fmt(worst_margin) + "; bound(K=1000,10dB) = " + fmt(reference);
  }
  return c;
}

Criterion criterion_2(GridCache& grid) {
  Criterion c{2, "blind MSSD within twice the coherent bound on the grid"};
  c.pass = true;
  double worst_margin = -1e9;
  for (double snr : kSnrGrid) {
    for (long devices : kDeviceGrid) {
      const auto& point = grid.at(snr, devices);
      const double slack = point.blind.bound + 3.0 * point.blind.std_error -
                           point.blind.mean;
      worst_margin = std::max(worst_margin, -slack);
      if (slack < 0.0) {
        c.pass = false;
        c.detail += " violated at (" + std::to_string(devices) + ", " +
                    fmt(snr) + " dB);";
      }
    }
  }
  if (c.pass) {
    c.detail = "9/9 points compliant; worst mean-(bound+3se) = " +
               fmt(worst_margin);
  }
  return c;
}

Criterion criterion_3(GridCache& grid) {
  Criterion c{3, "coherent bound tightness at 10 dB for K >= 100"};
  c.pass = true;
  for (long devices : {100L, 1000L}) {
    const auto& point = grid.at(10.0, devices);
    const double ratio = point.coherent.mean / point.coherent.bound;
    c.detail += "K=" + std::to_string(devices) + ": " + fmt(ratio) + "  ";
    if (ratio < 0.2 || ratio > 1.0) c.pass = false;
  }
  return c;
}

Criterion criterion_4(GridCache& grid) {
  Criterion c{4, "MSSD scales as 1/K at 10 dB for both estimators"};
  c.pass = true;
  for (const bool blind : {false, true}) {
    std::vector<double> devices;
    std::vector<double> means;
    for (long k : kDeviceGrid) {
      const auto& point = grid.at(10.0, k);
      devices.push_back(static_cast<double>(k));
      means.push_back(blind ? point.blind.mean : point.coherent.mean);
    }
    const double slope = regression_slope(devices, means);
    c.detail += std::string(blind ? "blind" : "coherent") + ": slope " +
                fmt(slope) + "  ";
    if (std::abs(slope + 1.0) > 0.15) c.pass = false;
  }
  // Lower SNRs reported for reference; the K=10 points there run into the
  // distance ceiling, so the asymptotic law is asserted at 10 dB only.
  for (double snr : {0.0, 5.0}) {
    std::vector<double> devices;
    std::vector<double> means;
    for (long k : kDeviceGrid) {
      devices.push_back(static_cast<double>(k));
      means.push_back(grid.at(snr, k).coherent.mean);
    }
    c.detail += "[" + fmt(snr) + " dB coherent: " +
                fmt(regression_slope(devices, means)) + "] ";
  }
  return c;
}

Criterion criterion_5(GridCache& grid) {
  Criterion c{5, "blind/coherent MSSD ratio in [1, 2.5] at 10 dB"};
  c.pass = true;
  for (long devices : kDeviceGrid) {
    const auto& point = grid.at(10.0, devices);
    const double ratio = point.blind.mean / point.coherent.mean;
    c.detail += "K=" + std::to_string(devices) + ": " + fmt(ratio) + "  ";
    if (ratio < 1.0 || ratio > 2.5) c.pass = false;
  }
  return c;
}

Criterion criterion_6() {
  Criterion c{6, "averaged aggregation matrices converge to the truth"};
  const PropertyResult coherent = check_unbiasedness_coherent(kSeed, 10000);
  const PropertyResult blind = check_unbiasedness_blind(kSeed + 1, 10000);
  c.pass = coherent.pass && blind.pass;
  c.detail = "coherent: " + coherent.detail + " | blind: " + blind.detail;
  return c;
}

Criterion criterion_7() {
  Criterion c{7, "noise-free estimation is exact on every path"};
  ScenarioConfig config = default_config();
  config.gamma_d_db = std::numeric_limits<double>::infinity();
  config.gamma_c_db = std::numeric_limits<double>::infinity();
  config.devices = 5;
  const TrialOutcome outcome = run_trial(config, 0);

  Rng truth_rng(derive_seed(kSeed, 9, 0, 0, StreamRole::kTruth));
  Rng chan_rng(derive_seed(kSeed, 9, 0, 0, StreamRole::kChannel));
  const SubspaceBasis truth = random_subspace(8, 200, truth_rng);
  const RealStackedChannel channel = draw_channel(16, 8, chan_rng);
  Rng unused(0);
  const SubspaceBasis detected = detect_single_symbol(
      transmit(truth.matrix(), channel, 0.0, unused), 8);
  const double single = subspace_distance(detected, truth);

  const double coherent = std::sqrt(*outcome.coherent);
  const double blind = std::sqrt(*outcome.blind);
  c.pass = coherent < 1e-6 && blind < 1e-6 && single < 1e-6;
  c.detail = "d coherent=" + fmt(coherent) + " blind=" + fmt(blind) +
             " single-symbol=" + fmt(single);
  return c;
}

Criterion criterion_8() {
  Criterion c{8, "per-symbol detection aggregates to the blind estimate"};
  ScenarioConfig config = default_config();
  config.devices = 50;

  const double gamma = db_to_linear(10.0);
  const double sigma_d_sq = data_snr_to_sigma(8, 200, gamma);
  const double sigma_c_sq =
      channel_snr_to_sigma(transmit_power(8, 200, gamma), gamma);

  Rng truth_rng(derive_seed(kSeed, 8, 0, 0, StreamRole::kTruth));
  const SubspaceBasis truth = random_subspace(8, 200, truth_rng);
  std::vector<ReceivedSymbol> received;
  for (int k = 0; k < 50; ++k) {
    Rng data(derive_seed(kSeed, 8, k, 0, StreamRole::kData));
    Rng chan(derive_seed(kSeed, 8, k, 0, StreamRole::kChannel));
    Rng noise(derive_seed(kSeed, 8, k, 0, StreamRole::kNoise));
    const Matrix local =
        truth.matrix() + gaussian_matrix(8, 200, sigma_d_sq, data);
    received.push_back(transmit(local, draw_channel(16, 8, chan),
                                sigma_c_sq, noise, k));
  }

  std::vector<SubspaceBasis> detections;
  for (const auto& symbol : received) {
    detections.push_back(detect_single_symbol(symbol, 8));
  }
  const SubspaceBasis aggregated =
      dominant_eigenspace(blind_aggregation(detections), 8).basis;
  const Estimate direct = blind_estimate(received, 8);

  const bool bit_exact = aggregated.matrix() == direct.basis.matrix();
  const double distance = subspace_distance(aggregated, direct.basis);
  c.pass = bit_exact && distance == 0.0;
  c.detail = std::string("bit-exact: ") + (bit_exact ? "yes" : "NO") +
             ", distance = " + fmt(distance);
  return c;
}

Criterion criterion_9() {
  Criterion c{9, "perturbation residual scales cubically"};
  const PropertyResult result = check_perturbation_order(kSeed);
  c.pass = result.pass;
  c.detail = result.detail;
  return c;
}

Criterion criterion_10() {
  Criterion c{10, "mean projector of shifted Gaussian bases is diagonal"};
  const PropertyResult result = check_projector_mean_diagonal(kSeed, 10000);
  c.pass = result.pass;
  c.detail = result.detail;
  return c;
}

Criterion criterion_11() {
  Criterion c{11, "inverse Gram mean matches 1/(2Nr-M-1)"};
  const PropertyResult result = check_inverse_wishart_moment(kSeed, 10000);
  c.pass = result.pass;
  c.detail = result.detail;
  return c;
}

Criterion criterion_12() {
  Criterion c{12, "channel-inverted approximation improves with channel SNR"};
  const PropertyResult result = check_projection_approximation(kSeed, 1000);
  c.pass = result.pass;
  c.detail = result.detail;
  return c;
}

Criterion criterion_13() {
  Criterion c{13, "analog latency beats both digital baselines"};
  LatencyConfig config;
  config.seed = kSeed;
  const std::vector<double> targets = {1e-2, 5e-3, 2e-3};
  const auto rows = latency_curve(targets, config);

  c.pass = true;
  std::vector<double> fixed_ratios;
  std::vector<double> adaptive_ratios;
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    const auto& analog = rows[i];
    const auto& fixed = rows[i + 1];
    const auto& adaptive = rows[i + 2];
    const double fixed_ratio =
        static_cast<double>(fixed.total_uses) / analog.total_uses;
    const double adaptive_ratio =
        static_cast<double>(adaptive.total_uses) / analog.total_uses;
    fixed_ratios.push_back(fixed_ratio);
    adaptive_ratios.push_back(adaptive_ratio);
    if (!(analog.total_uses < adaptive.total_uses &&
          adaptive.total_uses < fixed.total_uses && fixed_ratio >= 5.0)) {
      c.pass = false;
    }
  }
  for (double ratio : fixed_ratios) {
    if (std::abs(ratio - fixed_ratios.front()) / fixed_ratios.front() > 0.10)
      c.pass = false;
  }
  for (double ratio : adaptive_ratios) {
    if (std::abs(ratio - adaptive_ratios.front()) / adaptive_ratios.front() >
        0.10)
      c.pass = false;
  }
  c.detail = "fixed/analog = " + fmt(fixed_ratios.front()) +
             ", adaptive/analog = " + fmt(adaptive_ratios.front()) +
             " (constant across targets)";
  return c;
}

Criterion criterion_14() {
  Criterion c{14, "1/K scaling survives partitioned transmission"};
  c.pass = true;
  ScenarioConfig config = default_config();
  config.extension = ExtensionKind::kPartition;
  config.transmit_antennas = 4;

  std::vector<double> devices;
  std::vector<double> coherent_means;
  std::vector<double> blind_means;
  std::vector<bool> compliant;
  for (long k : kDeviceGrid) {
    config.devices = k;
    std::fprintf(stderr, "  [partition] K=%ld, %ld trials...\n", k,
                 config.trials);
    const auto results = run_ensemble(config);
    devices.push_back(static_cast<double>(k));
    coherent_means.push_back(results[0].second.mean);
    blind_means.push_back(results[1].second.mean);
    compliant.push_back(
        results[0].second.mean <=
            results[0].second.bound + 3 * results[0].second.std_error &&
        results[1].second.mean <=
            results[1].second.bound + 3 * results[1].second.std_error);
  }
  const double coherent_slope = regression_slope(devices, coherent_means);
  const double blind_slope = regression_slope(devices, blind_means);
  if (std::abs(coherent_slope + 1.0) > 0.15) c.pass = false;
  if (std::abs(blind_slope + 1.0) > 0.15) c.pass = false;
  c.detail = "coherent slope " + fmt(coherent_slope) + ", blind slope " +
             fmt(blind_slope) + "; block bounds respected: ";
  for (bool ok : compliant) c.detail += ok ? "y" : "n";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
  }

  GridCache grid;
  using Runner = std::function<Criterion()>;
  const std::vector<Runner> runners = {
      [&] { return criterion_1(grid); },  [&] { return criterion_2(grid); },
      [&] { return criterion_3(grid); },  [&] { return criterion_4(grid); },
      [&] { return criterion_5(grid); },  [] { return criterion_6(); },
      [] { return criterion_7(); },       [] { return criterion_8(); },
      [] { return criterion_9(); },       [] { return criterion_10(); },
      [] { return criterion_11(); },      [] { return criterion_12(); },
      [] { return criterion_13(); },      [] { return criterion_14(); },
  };

  bool all_pass = true;
  for (std::size_t i = 0; i < runners.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    const Criterion result = runners[i]();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s — %s (%.1fs)\n",
                result.pass ? "PASS" : "FAIL", result.id, result.title,
                result.detail.c_str(), seconds);
    std::fflush(stdout);
    all_pass = all_pass && result.pass;
  }
  return all_pass ? 0 : 1;
}
