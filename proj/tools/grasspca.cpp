// Command-line driver: Monte Carlo experiments for one-shot distributed PCA
// over analog MIMO links, with CSV output.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "grasspca/channel.hpp"
#include "grasspca/digital_baseline.hpp"
#include "grasspca/harness.hpp"

namespace {

using grasspca::ScenarioConfig;

struct FlagOverrides {
  std::optional<int> subspace_dim, ambient_dim, transmit_antennas,
      receive_antennas, threads;
  std::optional<long> devices, trials;
  std::optional<double> gamma_d_db, gamma_c_db;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> estimator, extension;
  bool fixed_truth = false;
};

void add_shared_options(CLI::App* cmd, FlagOverrides& flags,
                        std::string& config_path, std::string& out_path) {
  cmd->add_option("--config", config_path, "flat key = value config file");
  cmd->add_option("--seed", flags.seed, "master seed (64-bit)")
      ->envname("GRASSPCA_SEED");
  cmd->add_option("--trials", flags.trials, "Monte Carlo trials per point");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (speed only, never results)");
  cmd->add_option("--out", out_path, "output path (default stdout)");
  cmd->add_option("--estimator", flags.estimator,
                  "coherent|blind|uniform|both");
  cmd->add_option("--extension", flags.extension,
                  "none|adapt-up|partition");
  cmd->add_flag("--fixed-truth", flags.fixed_truth,
                "freeze the ground truth across trials");
  cmd->add_option("--M", flags.subspace_dim, "subspace dimension");
  cmd->add_option("--N", flags.ambient_dim, "ambient dimension");
  cmd->add_option("--N-t", flags.transmit_antennas, "device antennas");
  cmd->add_option("--N-r", flags.receive_antennas, "server antennas");
  cmd->add_option("--K", flags.devices, "device count");
  cmd->add_option("--gamma-d-db", flags.gamma_d_db, "data SNR in dB");
  cmd->add_option("--gamma-c-db", flags.gamma_c_db, "channel SNR in dB");
}

ScenarioConfig resolve_config(const FlagOverrides& flags,
                              const std::string& config_path) {
  ScenarioConfig config;
  if (!config_path.empty()) {
    config = grasspca::load_config_file(config_path, config);
  }
  if (flags.subspace_dim) config.subspace_dim = *flags.subspace_dim;
  if (flags.ambient_dim) config.ambient_dim = *flags.ambient_dim;
  if (flags.transmit_antennas) config.transmit_antennas = *flags.transmit_antennas;
  if (flags.receive_antennas) config.receive_antennas = *flags.receive_antennas;
  if (flags.devices) config.devices = *flags.devices;
  if (flags.trials) config.trials = *flags.trials;
  if (flags.threads) config.threads = *flags.threads;
  if (flags.gamma_d_db) config.gamma_d_db = *flags.gamma_d_db;
  if (flags.gamma_c_db) config.gamma_c_db = *flags.gamma_c_db;
  if (flags.seed) config.master_seed = *flags.seed;
  if (flags.estimator) {
    config.estimator = grasspca::estimator_from_string(*flags.estimator);
  }
  if (flags.extension) {
    config.extension = grasspca::extension_from_string(*flags.extension);
  }
  if (flags.fixed_truth) config.fixed_truth = true;
  return config;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw grasspca::ConfigError("cannot open output file '" + out_path + "'");
  }
  out << text;
}

int fail_with_report(const std::string& kind, const std::string& message) {
  nlohmann::json report;
  report["error"] = kind;
  report["message"] = message;
  std::cerr << report.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "grasspca: distributed-PCA-over-analog-MIMO Monte Carlo simulator"};
  app.require_subcommand(1);

  FlagOverrides flags;
  std::string config_path;
  std::string out_path;

  auto* simulate = app.add_subcommand(
      "simulate", "run a single Monte Carlo ensemble and emit one CSV row "
                  "per estimator");
  add_shared_options(simulate, flags, config_path, out_path);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "run a parameter sweep and emit one CSV row per point");
  add_shared_options(sweep_cmd, flags, config_path, out_path);
  std::string axis_name = "K";
  std::vector<double> sweep_values;
  sweep_cmd->add_option("--axis", axis_name, "K|gamma_d|gamma_c|M|N_r");
  sweep_cmd
      ->add_option("--values", sweep_values,
                   "comma-separated grid values")
      ->delimiter(',')
      ->required();

  auto* latency = app.add_subcommand(
      "latency", "channel-use comparison against digital baselines");
  add_shared_options(latency, flags, config_path, out_path);
  std::vector<double> targets;
  bool empirical = false;
  grasspca::DigitalScheme fixed_scheme;
  grasspca::DigitalScheme adaptive_scheme{grasspca::DigitalKind::kAdaptiveEigenmode};
  int adaptive_trials = 1000;
  latency
      ->add_option("--targets", targets, "target MSSD grid")
      ->delimiter(',')
      ->required();
  latency->add_flag("--empirical", empirical,
                    "size the analog fleet from measured MSSD instead of the "
                    "analytic bound");
  latency->add_option("--quant-bits", fixed_scheme.quant_bits,
                      "payload quantization bits per entry");
  latency->add_option("--code-rate", fixed_scheme.code_rate, "channel code rate");
  latency->add_option("--qam-bits", fixed_scheme.qam_bits_per_symbol,
                      "fixed scheme constellation bits (1,2,4,6,8)");
  latency->add_option("--gap-db", fixed_scheme.snr_gap_db,
                      "SNR gap for constellation feasibility");
  latency->add_option("--adaptive-trials", adaptive_trials,
                      "channel draws behind the adaptive-rate average");

  auto* validate = app.add_subcommand(
      "validate", "run statistical property checks");
  add_shared_options(validate, flags, config_path, out_path);
  std::string suite = "all";
  validate->add_option("--suite", suite,
                       "all|rotation-invariance|unbiasedness-coherent|"
                       "unbiasedness-blind|perturbation-order|"
                       "projector-mean-diagonal|inverse-wishart-moment|"
                       "projection-approximation");

  CLI11_PARSE(app, argc, argv);

  try {
    const ScenarioConfig config = resolve_config(flags, config_path);

    if (simulate->parsed()) {
      const auto ensembles = grasspca::run_ensemble(config);
      std::vector<grasspca::SweepRow> rows;
      for (const auto& [kind, estimate] : ensembles) {
        grasspca::SweepRow row;
        row.axis = "K";
        row.axis_value = static_cast<double>(config.devices);
        row.estimator = grasspca::to_string(kind);
        row.subspace_dim = config.subspace_dim;
        row.ambient_dim = config.ambient_dim;
        row.transmit_antennas = config.transmit_antennas;
        row.receive_antennas = config.receive_antennas;
        row.devices = config.devices;
        row.gamma_d_db = config.gamma_d_db;
        row.gamma_c_db = config.gamma_c_db;
        row.trials = estimate.trials;
        row.mssd_mean = estimate.mean;
        row.mssd_stderr = estimate.std_error;
        row.bound = estimate.bound;
        row.excluded_trials = estimate.excluded_trials;
        row.master_seed = config.master_seed;
        rows.push_back(std::move(row));
        std::fprintf(stderr,
                     "%s: mssd=%s stderr=%s bound=%s (%ld trials, %ld "
                     "excluded, %ld channel redraws)\n",
                     grasspca::to_string(kind).c_str(),
                     grasspca::format_double(estimate.mean).c_str(),
                     grasspca::format_double(estimate.std_error).c_str(),
                     grasspca::format_double(estimate.bound).c_str(),
                     estimate.trials, estimate.excluded_trials,
                     estimate.channel_redraws);
      }
      write_output(out_path, grasspca::to_csv(rows));
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const auto axis = grasspca::sweep_axis_from_string(axis_name);
      const auto rows = grasspca::sweep(config, axis, sweep_values);
      write_output(out_path, grasspca::to_csv(rows));
      return 0;
    }

    if (latency->parsed()) {
      grasspca::LatencyConfig lc;
      lc.subspace_dim = config.subspace_dim;
      lc.ambient_dim = config.ambient_dim;
      lc.transmit_antennas = config.transmit_antennas;
      lc.receive_antennas = config.receive_antennas;
      lc.gamma_d_db = config.gamma_d_db;
      lc.gamma_c_db = config.gamma_c_db;
      lc.blind_analog = config.estimator == grasspca::EstimatorKind::kBlind;
      lc.fixed = fixed_scheme;
      adaptive_scheme.quant_bits = fixed_scheme.quant_bits;
      adaptive_scheme.code_rate = fixed_scheme.code_rate;
      adaptive_scheme.snr_gap_db = fixed_scheme.snr_gap_db;
      lc.adaptive = adaptive_scheme;
      lc.adaptive_channel_trials = adaptive_trials;
      lc.seed = config.master_seed;
      if (empirical) {
        lc.empirical_analog_devices = [&config](double target) {
          return grasspca::empirical_analog_devices(config, target);
        };
      }
      const auto rows = grasspca::latency_curve(targets, lc);
      write_output(out_path, grasspca::to_csv(rows));
      return 0;
    }

    if (validate->parsed()) {
      const auto results = grasspca::run_validation_suite(
          suite, config.master_seed, flags.trials.value_or(0));
      bool all_pass = true;
      std::string report;
      for (const auto& result : results) {
        report += (result.pass ? "PASS " : "FAIL ") + result.name + ": " +
                  result.detail + "\n";
        all_pass = all_pass && result.pass;
      }
      write_output(out_path, report);
      if (!all_pass) {
        nlohmann::json failures = nlohmann::json::array();
        for (const auto& result : results) {
          if (!result.pass) {
            failures.push_back({{"name", result.name},
                                {"detail", result.detail}});
          }
        }
        nlohmann::json error;
        error["error"] = "validation-failure";
        error["failures"] = failures;
        std::cerr << error.dump() << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const grasspca::Error& e) {
    return fail_with_report("grasspca-error", e.what());
  } catch (const std::exception& e) {
    return fail_with_report("unexpected-error", e.what());
  }
  return 0;
}
