#include "grasspca/digital_baseline.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>

#include "grasspca/bounds.hpp"
#include "grasspca/channel.hpp"
#include "grasspca/errors.hpp"
#include "grasspca/scenario.hpp"

namespace grasspca {

namespace {

constexpr int kConstellations[] = {8, 6, 4, 2, 1};

// ceil with a relative slack of 1e-9 so that a target exactly equal to a
// c/K model value inverts to K instead of K+1.
long ceil_div_positive(double numerator, double denominator) {
  return static_cast<long>(std::ceil(numerator / denominator *
                                     (1.0 - 1e-9)));
}

// Water-filling over mode gains g_i with unit power budget: per-mode SNRs
// q_i * g_i with q_i = max(0, mu - 1/g_i), sum q_i = 1.
std::vector<double> waterfill_snrs(std::vector<double> gains) {
  std::sort(gains.begin(), gains.end(), std::greater<double>());
  while (!gains.empty() && gains.back() <= 0.0) gains.pop_back();
  std::vector<double> snrs;
  if (gains.empty()) return snrs;

  std::size_t active = gains.size();
  double level = 0.0;
  for (; active >= 1; --active) {
    double inverse_sum = 0.0;
    for (std::size_t i = 0; i < active; ++i) inverse_sum += 1.0 / gains[i];
    level = (1.0 + inverse_sum) / static_cast<double>(active);
    if (level > 1.0 / gains[active - 1]) break;
  }
  snrs.resize(gains.size(), 0.0);
  for (std::size_t i = 0; i < active; ++i) {
    snrs[i] = (level - 1.0 / gains[i]) * gains[i];
  }
  return snrs;
}

int largest_feasible_bits(double snr, double gap, int at_most) {
  for (int bits : kConstellations) {
    if (bits > at_most) continue;
    if (snr >= (std::pow(2.0, bits) - 1.0) * gap) return bits;
  }
  return 0;
}

}  // namespace

std::int64_t payload_bits(int subspace_dim, int ambient_dim, int quant_bits) {
  if (subspace_dim < 1 || ambient_dim < 1 || quant_bits < 1) {
    throw InvalidInputError("payload_bits: need positive arguments");
  }
  return static_cast<std::int64_t>(quant_bits) * subspace_dim * ambient_dim;
}

FixedRateResult per_device_uses_fixed(const DigitalScheme& scheme,
                                      int subspace_dim, int ambient_dim,
                                      int transmit_antennas,
                                      int receive_antennas, double gamma_c) {
  if (scheme.kind != DigitalKind::kFixedQamZf) {
    throw InvalidInputError("per_device_uses_fixed: wrong scheme kind");
  }
  if (2 * receive_antennas <= transmit_antennas) {
    throw ConfigError("per_device_uses_fixed: ZF needs 2*N_r > N_t");
  }
  if (!(gamma_c > 0.0) || scheme.code_rate <= 0.0 || scheme.code_rate > 1.0) {
    throw InvalidInputError("per_device_uses_fixed: invalid rate parameters");
  }
  bool listed = false;
  for (int bits : kConstellations) listed = listed || bits == scheme.qam_bits_per_symbol;
  if (!listed) {
    throw InvalidInputError(
        "per_device_uses_fixed: constellation bits must be 1, 2, 4, 6 or 8");
  }

  const double gap = db_to_linear(scheme.snr_gap_db);
  const double per_stream_snr = gamma_c / transmit_antennas *
                                (2.0 * receive_antennas - transmit_antennas);
  int bits = largest_feasible_bits(per_stream_snr, gap,
                                   scheme.qam_bits_per_symbol);
  const bool feasible = bits > 0;
  if (!feasible) bits = 1;  // fallback, flagged

  const double payload = static_cast<double>(
      payload_bits(subspace_dim, ambient_dim, scheme.quant_bits));
  const double bits_per_use = transmit_antennas * bits * scheme.code_rate;
  return FixedRateResult{ceil_div_positive(payload, bits_per_use), bits,
                         feasible};
}

AdaptiveRateResult per_device_uses_adaptive(const DigitalScheme& scheme,
                                            int subspace_dim, int ambient_dim,
                                            int transmit_antennas,
                                            int receive_antennas,
                                            double gamma_c, int channel_trials,
                                            Rng& rng) {
  if (scheme.kind != DigitalKind::kAdaptiveEigenmode) {
    throw InvalidInputError("per_device_uses_adaptive: wrong scheme kind");
  }
  if (channel_trials < 1) {
    throw InvalidInputError("per_device_uses_adaptive: need trials >= 1");
  }
  const double gap = db_to_linear(scheme.snr_gap_db);

  // Eigen-modes of the real-stacked channel, the same receive dimension
  // the fixed scheme's array-gain rule assumes.
  double bits_sum = 0.0;
  for (int trial = 0; trial < channel_trials; ++trial) {
    const RealStackedChannel channel =
        draw_channel(receive_antennas, transmit_antennas, rng);
    Eigen::JacobiSVD<Matrix> svd(channel.matrix());
    std::vector<double> gains;
    gains.reserve(svd.singularValues().size());
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      const double s = svd.singularValues()(i);
      gains.push_back(gamma_c * s * s);
    }
    for (double snr : waterfill_snrs(std::move(gains))) {
      bits_sum += largest_feasible_bits(snr, gap, kConstellations[0]);
    }
  }
  const double mean_bits_per_use =
      scheme.code_rate * bits_sum / channel_trials;
  if (mean_bits_per_use <= 0.0) {
    throw ConfigError(
        "per_device_uses_adaptive: zero spectral efficiency at this SNR");
  }
  const double payload = static_cast<double>(
      payload_bits(subspace_dim, ambient_dim, scheme.quant_bits));
  return AdaptiveRateResult{ceil_div_positive(payload, mean_bits_per_use),
                            mean_bits_per_use};
}

std::vector<LatencyResult> latency_curve(const std::vector<double>& targets,
                                         const LatencyConfig& config) {
  const int m = config.subspace_dim;
  const int n = config.ambient_dim;
  const double gamma_d = db_to_linear(config.gamma_d_db);
  const double gamma_c = db_to_linear(config.gamma_c_db);
  const double sigma_d_sq = data_snr_to_sigma(m, n, gamma_d);
  const double power = transmit_power(m, n, gamma_d);
  const double sigma_c_sq = channel_snr_to_sigma(power, gamma_c);

  // Analog model constant: bound(K) = analog_c / K.
  BoundInput unit{m, n, 1, config.receive_antennas, sigma_d_sq, sigma_c_sq};
  const double analog_c =
      config.blind_analog
          ? blind_bound_partitioned(unit, config.transmit_antennas)
          : coherent_bound_partitioned(unit, config.transmit_antennas);
  const double digital_c = uniform_aggregation_bound(m, n, 1, sigma_d_sq);
  const long blocks =
      (m + config.transmit_antennas - 1) / config.transmit_antennas;

  // Per-device channel uses are target-independent; compute once.
  const FixedRateResult fixed =
      per_device_uses_fixed(config.fixed, m, n, config.transmit_antennas,
                            config.receive_antennas, gamma_c);

  Rng adaptive_rng(derive_seed(config.seed, 0, 0, 0, StreamRole::kChannel));
  const AdaptiveRateResult adaptive = per_device_uses_adaptive(
      config.adaptive, m, n, config.transmit_antennas,
      config.receive_antennas, gamma_c, config.adaptive_channel_trials,
      adaptive_rng);

  std::vector<LatencyResult> rows;
  rows.reserve(targets.size() * 3);
  for (double target : targets) {
    if (!(target > 0.0)) {
      for (const char* scheme : {"analog", "digital-fixed", "digital-adaptive"}) {
        rows.push_back(LatencyResult{target, scheme, 0, 0, 0, false,
                                     "unreachable target"});
      }
      continue;
    }

    long analog_devices;
    std::string analog_notes;
    if (config.empirical_analog_devices) {
      analog_devices = config.empirical_analog_devices(target);
      analog_notes = "empirical";
    } else {
      analog_devices = ceil_div_positive(analog_c, target);
      analog_notes = config.blind_analog ? "bound=blind" : "bound=coherent";
    }
    const long analog_uses = static_cast<long>(n) * blocks;
    rows.push_back(LatencyResult{target, "analog", analog_devices,
                                 analog_uses, analog_devices * analog_uses,
                                 true, analog_notes});

    const long digital_devices =
        ceil_div_positive(digital_c, target);
    rows.push_back(LatencyResult{
        target, "digital-fixed", digital_devices, fixed.uses_per_device,
        digital_devices * fixed.uses_per_device, fixed.feasible,
        "qam_bits=" + std::to_string(fixed.bits_per_symbol) +
            (fixed.feasible ? "" : " (gap rule unmet, BPSK fallback)")});

    rows.push_back(LatencyResult{
        target, "digital-adaptive", digital_devices,
        adaptive.uses_per_device,
        digital_devices * adaptive.uses_per_device, true,
        "mean_bits_per_use=" + std::to_string(adaptive.mean_bits_per_use)});
  }
  return rows;
}

}  // namespace grasspca
