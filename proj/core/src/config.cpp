#include "grasspca/config.hpp"

#include <algorithm>
#include <fstream>

#include "grasspca/csv.hpp"
#include "grasspca/errors.hpp"

namespace grasspca {

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kCoherent: return "coherent";
    case EstimatorKind::kBlind: return "blind";
    case EstimatorKind::kUniform: return "uniform";
    case EstimatorKind::kBoth: return "both";
  }
  return "?";
}

std::string to_string(ExtensionKind kind) {
  switch (kind) {
    case ExtensionKind::kNone: return "none";
    case ExtensionKind::kAdaptUp: return "adapt-up";
    case ExtensionKind::kPartition: return "partition";
  }
  return "?";
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "coherent") return EstimatorKind::kCoherent;
  if (name == "blind") return EstimatorKind::kBlind;
  if (name == "uniform") return EstimatorKind::kUniform;
  if (name == "both") return EstimatorKind::kBoth;
  throw InvalidInputError("unknown estimator '" + name + "'");
}

ExtensionKind extension_from_string(const std::string& name) {
  if (name == "none") return ExtensionKind::kNone;
  if (name == "adapt-up" || name == "adapt_up") return ExtensionKind::kAdaptUp;
  if (name == "partition") return ExtensionKind::kPartition;
  throw InvalidInputError("unknown extension '" + name + "'");
}

void ScenarioConfig::validate() const {
  if (subspace_dim < 1 || ambient_dim <= subspace_dim) {
    throw ConfigError("config: need 1 <= M < N");
  }
  if (devices < 1 || trials < 1) {
    throw ConfigError("config: need K >= 1 and trials >= 1");
  }
  if (2 * receive_antennas <= std::min(transmit_antennas, subspace_dim)) {
    throw ConfigError("config: need 2*N_r > min(N_t, M)");
  }
  switch (extension) {
    case ExtensionKind::kNone:
      if (transmit_antennas != subspace_dim) {
        throw ConfigError(
            "config: N_t != M requires --extension adapt-up or partition");
      }
      break;
    case ExtensionKind::kAdaptUp:
      if (transmit_antennas < subspace_dim) {
        throw ConfigError("config: adapt-up needs N_t >= M");
      }
      break;
    case ExtensionKind::kPartition:
      if (transmit_antennas > subspace_dim) {
        throw ConfigError("config: partition needs N_t <= M");
      }
      break;
  }
}

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

void apply_config_entry(ScenarioConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "M") {
    config.subspace_dim = static_cast<int>(parse_double(value));
  } else if (key == "N") {
    config.ambient_dim = static_cast<int>(parse_double(value));
  } else if (key == "N_t") {
    config.transmit_antennas = static_cast<int>(parse_double(value));
  } else if (key == "N_r") {
    config.receive_antennas = static_cast<int>(parse_double(value));
  } else if (key == "K") {
    config.devices = static_cast<long>(parse_double(value));
  } else if (key == "gamma_d_db") {
    config.gamma_d_db = parse_double(value);
  } else if (key == "gamma_c_db") {
    config.gamma_c_db = parse_double(value);
  } else if (key == "trials") {
    config.trials = static_cast<long>(parse_double(value));
  } else if (key == "seed" || key == "master_seed") {
    config.master_seed = static_cast<std::uint64_t>(std::stoull(value));
  } else if (key == "estimator") {
    config.estimator = estimator_from_string(value);
  } else if (key == "extension") {
    config.extension = extension_from_string(value);
  } else if (key == "fixed_truth") {
    config.fixed_truth = value == "true" || value == "1";
  } else if (key == "threads") {
    config.threads = static_cast<int>(parse_double(value));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

ScenarioConfig load_config_file(const std::string& path,
                                const ScenarioConfig& base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  ScenarioConfig config = base;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_number) +
                        " is not 'key = value'");
    }
    apply_config_entry(config, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace grasspca
