#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grasspca/bounds.hpp"
#include "grasspca/config.hpp"
#include "grasspca/csv.hpp"

namespace grasspca {

/// Monte Carlo estimate of the mean square subspace distance.
struct MssdEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long trials = 0;
  double bound = 0.0;
  long excluded_trials = 0;
  long channel_redraws = 0;
  bool single_sample = false;
};

/// Squared subspace distances from one joint draw; only the estimators
/// selected by the config are filled. channel_redraws counts rejected
/// near-singular channel draws (probability zero in theory).
struct TrialOutcome {
  std::optional<double> coherent;
  std::optional<double> blind;
  std::optional<double> uniform;
  int channel_redraws = 0;
};

/// Runs one trial: fresh ground truth (frozen at trial 0 when fixed_truth
/// is set), K locals, K channel/noise draws, selected estimators.
/// Deterministic given (master_seed, trial_index).
TrialOutcome run_trial(const ScenarioConfig& config, long trial_index);

/// The analytic bound matching an estimator under this configuration.
double matching_bound(const ScenarioConfig& config, EstimatorKind estimator);

/// Trials run in parallel on per-trial streams; the reduction is a
/// single-threaded pass in ascending trial order, so results are
/// bit-identical for any thread count. Degenerate trials are excluded and
/// counted; an exclusion rate >= 0.1% fails the run.
std::vector<std::pair<EstimatorKind, MssdEstimate>> run_ensemble(
    const ScenarioConfig& config);

enum class SweepAxis { kDevices, kGammaD, kGammaC, kSubspaceDim, kReceiveAntennas };

SweepAxis sweep_axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

/// One CSV row per (axis value, estimator); per-point failures are
/// recorded in-row as NaN statistics and the sweep continues.
std::vector<SweepRow> sweep(const ScenarioConfig& config, SweepAxis axis,
                            const std::vector<double>& values);

/// Smallest K whose measured MSSD (config.trials trials per probe) is at
/// most the target. Used by the latency CLI in --empirical mode.
long empirical_analog_devices(const ScenarioConfig& config, double target);

/// Named property checks behind the `validate` CLI subcommand; also the
/// backbone of the acceptance suite.
struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// trials <= 0 selects each property's default count.
PropertyResult check_rotation_invariance(std::uint64_t seed, long trials);
PropertyResult check_unbiasedness_coherent(std::uint64_t seed, long trials);
PropertyResult check_unbiasedness_blind(std::uint64_t seed, long trials);
PropertyResult check_perturbation_order(std::uint64_t seed);
PropertyResult check_projector_mean_diagonal(std::uint64_t seed, long trials);
PropertyResult check_inverse_wishart_moment(std::uint64_t seed, long trials);
PropertyResult check_projection_approximation(std::uint64_t seed, long trials);

std::vector<PropertyResult> run_validation_suite(const std::string& suite,
                                                 std::uint64_t seed,
                                                 long trials);

}  // namespace grasspca
