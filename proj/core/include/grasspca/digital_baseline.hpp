#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grasspca/rng.hpp"

namespace grasspca {

enum class DigitalKind { kFixedQamZf, kAdaptiveEigenmode };

/// Transport parameters of the digital benchmark. This is a rate/latency
/// accounting model gated by an SNR-gap feasibility rule, not a bit-true
/// codec.
struct DigitalScheme {
  DigitalKind kind = DigitalKind::kFixedQamZf;
  int quant_bits = 16;
  double code_rate = 0.5;
  int qam_bits_per_symbol = 4;  // fixed scheme: 16-QAM
  double snr_gap_db = 6.0;
};

/// One row of the latency comparison.
struct LatencyResult {
  double target_mssd = 0.0;
  std::string scheme;
  long devices = 0;
  long uses_per_device = 0;
  long total_uses = 0;
  bool feasible = true;
  std::string notes;
};

/// Quantized payload of one M x N local PC matrix.
std::int64_t payload_bits(int subspace_dim, int ambient_dim, int quant_bits);

struct FixedRateResult {
  long uses_per_device = 0;
  int bits_per_symbol = 0;  // constellation actually used
  bool feasible = true;     // false: even BPSK fails the gap rule
};

/// Fixed-constellation ZF scheme. Mean post-ZF per-stream SNR is modeled
/// as (gamma_c / N_t) * (2 N_r - N_t); the configured constellation is
/// stepped down to the largest b in {8,6,4,2,1} satisfying
/// SNR >= (2^b - 1) * gap. Bits per channel use: N_t * b * code_rate;
/// uses per device: ceil(payload / bits_per_use).
FixedRateResult per_device_uses_fixed(const DigitalScheme& scheme,
                                      int subspace_dim, int ambient_dim,
                                      int transmit_antennas,
                                      int receive_antennas, double gamma_c);

struct AdaptiveRateResult {
  long uses_per_device = 0;
  double mean_bits_per_use = 0.0;
};

/// Eigen-mode scheme with water-filling power allocation and per-mode
/// constellations b_i = max{b : SNR_i >= (2^b - 1) * gap}, averaged over
/// fresh channel draws.
AdaptiveRateResult per_device_uses_adaptive(const DigitalScheme& scheme,
                                            int subspace_dim, int ambient_dim,
                                            int transmit_antennas,
                                            int receive_antennas,
                                            double gamma_c,
                                            int channel_trials, Rng& rng);

/// Everything latency_curve needs. Error models are c/K in both cases:
/// analog uses the estimator's analytic MSSD bound, digital the
/// error-free-link uniform-aggregation law.
struct LatencyConfig {
  int subspace_dim = 8;
  int ambient_dim = 200;
  int transmit_antennas = 8;
  int receive_antennas = 16;
  double gamma_d_db = 10.0;
  double gamma_c_db = 10.0;
  bool blind_analog = false;  // analog path bound: Theorem-2 vs Theorem-4 form
  DigitalScheme fixed = DigitalScheme{DigitalKind::kFixedQamZf};
  DigitalScheme adaptive = DigitalScheme{DigitalKind::kAdaptiveEigenmode};
  int adaptive_channel_trials = 1000;
  std::uint64_t seed = 1;
  /// Optional empirical analog device count: min K with measured MSSD
  /// below target. When absent the analytic bound is inverted.
  std::function<long(double target)> empirical_analog_devices;
};

/// Latency rows for each target: analog, digital-fixed, digital-adaptive.
std::vector<LatencyResult> latency_curve(const std::vector<double>& targets,
                                         const LatencyConfig& config);

}  // namespace grasspca
