#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace grasspca {

enum class EstimatorKind { kCoherent, kBlind, kUniform, kBoth };
enum class ExtensionKind { kNone, kAdaptUp, kPartition };

std::string to_string(EstimatorKind kind);
std::string to_string(ExtensionKind kind);
EstimatorKind estimator_from_string(const std::string& name);
ExtensionKind extension_from_string(const std::string& name);

/// Full experiment configuration. SNRs are in dB and may be "inf" (noise
/// off). Defaults follow the reference system: 8x200 PCs, an 8-antenna
/// device array and a 16-antenna server array.
struct ScenarioConfig {
  int subspace_dim = 8;       // M
  int ambient_dim = 200;      // N
  int transmit_antennas = 8;  // N_t
  int receive_antennas = 16;  // N_r
  long devices = 1000;        // K
  double gamma_d_db = 10.0;
  double gamma_c_db = 10.0;
  long trials = 2000;
  std::uint64_t master_seed = 1;
  EstimatorKind estimator = EstimatorKind::kCoherent;
  ExtensionKind extension = ExtensionKind::kNone;
  bool fixed_truth = false;
  int threads = 0;  // 0: hardware concurrency; affects speed, never results

  void validate() const;
};

/// Parses a flat key = value config file ('#' comments). Unknown keys are
/// rejected; keys mirror the CLI flags.
ScenarioConfig load_config_file(const std::string& path,
                                const ScenarioConfig& base = {});

/// Applies one key/value pair (shared by the file loader and tests).
void apply_config_entry(ScenarioConfig& config, const std::string& key,
                        const std::string& value);

}  // namespace grasspca
