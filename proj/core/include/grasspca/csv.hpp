#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grasspca/digital_baseline.hpp"

namespace grasspca {

/// One row of the sweep CSV schema:
/// axis,axis_value,estimator,M,N,N_t,N_r,K,gamma_d_db,gamma_c_db,trials,
/// mssd_mean,mssd_stderr,bound,excluded_trials,master_seed
struct SweepRow {
  std::string axis;
  double axis_value = 0.0;
  std::string estimator;
  int subspace_dim = 0;
  int ambient_dim = 0;
  int transmit_antennas = 0;
  int receive_antennas = 0;
  long devices = 0;
  double gamma_d_db = 0.0;
  double gamma_c_db = 0.0;
  long trials = 0;
  double mssd_mean = 0.0;
  double mssd_stderr = 0.0;
  double bound = 0.0;
  long excluded_trials = 0;
  std::uint64_t master_seed = 0;

  bool operator==(const SweepRow&) const = default;
};

/// Shortest decimal representation that parses back to the same double
/// (including inf/nan spellings).
std::string format_double(double value);
double parse_double(const std::string& text);

std::string sweep_csv_header();
std::string to_csv(const SweepRow& row);
std::string to_csv(const std::vector<SweepRow>& rows);  // header + rows

/// Parses a full sweep CSV (header mandatory). Inverse of to_csv.
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

/// Latency CSV schema:
/// target_mssd,scheme,K,uses_per_device,total_uses,feasible,notes
std::string latency_csv_header();
std::string to_csv(const LatencyResult& row);
std::string to_csv(const std::vector<LatencyResult>& rows);
std::vector<LatencyResult> parse_latency_csv(const std::string& text);

}  // namespace grasspca
