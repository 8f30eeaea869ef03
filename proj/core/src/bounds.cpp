#include "grasspca/bounds.hpp"

#include <cmath>

#include "grasspca/channel.hpp"
#include "grasspca/scenario.hpp"

namespace grasspca {

namespace {

void require_valid(const BoundInput& input) {
  if (input.subspace_dim < 1 || input.ambient_dim <= input.subspace_dim) {
    throw InvalidInputError("bound: need 1 <= M < N");
  }
  if (input.devices < 1) {
    throw InvalidInputError("bound: need K >= 1");
  }
  if (input.sigma_d_sq < 0.0 || input.sigma_c_sq < 0.0) {
    throw InvalidInputError("bound: negative noise variance");
  }
  if (2 * input.receive_antennas - input.subspace_dim <= 1) {
    throw ConfigError("bound: need 2*N_r - M > 1");
  }
}

std::vector<int> partition_widths(int subspace_dim, int transmit_antennas) {
  if (transmit_antennas < 1) {
    throw InvalidInputError("bound: need N_t >= 1");
  }
  if (transmit_antennas >= subspace_dim) return {subspace_dim};
  std::vector<int> widths;
  int remaining = subspace_dim;
  while (remaining > 0) {
    const int width = std::min(transmit_antennas, remaining);
    widths.push_back(width);
    remaining -= width;
  }
  return widths;
}

double partitioned_noise_sum(const BoundInput& input, int transmit_antennas) {
  double sum = 0.0;
  for (int width : partition_widths(input.subspace_dim, transmit_antennas)) {
    const int dof = 2 * input.receive_antennas - width - 1;
    if (dof <= 0) {
      throw ConfigError("bound: need 2*N_r - M' > 1 for every block");
    }
    sum += width * (input.sigma_d_sq + input.sigma_c_sq / dof);
  }
  return sum;
}

}  // namespace

double coherent_bound(const BoundInput& input) {
  require_valid(input);
  const double m = input.subspace_dim;
  const double n = input.ambient_dim;
  const double diversity = 2.0 * input.receive_antennas - m - 1.0;
  return 2.0 * m * (n - m) / input.devices *
         (input.sigma_d_sq + input.sigma_c_sq / diversity);
}

double coherent_bound_snr(int subspace_dim, int ambient_dim, int devices,
                          int receive_antennas, double gamma_d,
                          double gamma_c) {
  BoundInput shape{subspace_dim, ambient_dim, devices, receive_antennas, 0.0,
                   0.0};
  require_valid(shape);
  if (!(gamma_d > 0.0) || !(gamma_c > 0.0)) {
    throw InvalidInputError("bound: SNRs must be positive");
  }
  const double m = subspace_dim;
  const double n = ambient_dim;
  const double diversity = 2.0 * receive_antennas - m - 1.0;
  const double inv_gd = std::isinf(gamma_d) ? 0.0 : 1.0 / gamma_d;
  const double inv_gc = std::isinf(gamma_c) ? 0.0 : 1.0 / gamma_c;
  return 2.0 * m * m * (n - m) / (devices * n) *
         (inv_gd + (1.0 + m * inv_gd) * inv_gc / diversity);
}

double blind_bound(const BoundInput& input) { return 2.0 * coherent_bound(input); }

double blind_bound_snr(int subspace_dim, int ambient_dim, int devices,
                       int receive_antennas, double gamma_d, double gamma_c) {
  return 2.0 * coherent_bound_snr(subspace_dim, ambient_dim, devices,
                                  receive_antennas, gamma_d, gamma_c);
}

double coherent_bound_partitioned(const BoundInput& input,
                                  int transmit_antennas) {
  require_valid(input);
  const double m = input.subspace_dim;
  const double n = input.ambient_dim;
  return 2.0 * (n - m) / input.devices *
         partitioned_noise_sum(input, transmit_antennas);
}

double blind_bound_partitioned(const BoundInput& input,
                               int transmit_antennas) {
  return 2.0 * coherent_bound_partitioned(input, transmit_antennas);
}

double uniform_aggregation_bound(int subspace_dim, int ambient_dim,
                                 int devices, double sigma_d_sq) {
  if (subspace_dim < 1 || ambient_dim <= subspace_dim || devices < 1 ||
      sigma_d_sq < 0.0) {
    throw InvalidInputError("uniform_aggregation_bound: invalid arguments");
  }
  const double m = subspace_dim;
  const double n = ambient_dim;
  return 2.0 * m * (n - m) * sigma_d_sq / devices;
}

PerturbationCheck perturbation_distance_check(const SubspaceBasis& base,
                                              const Matrix& perturbation_a,
                                              const Matrix& perturbation_b,
                                              double eps) {
  const int m = base.subspace_dim();
  if (perturbation_a.rows() != m || perturbation_b.rows() != m ||
      perturbation_a.cols() != base.ambient_dim() ||
      perturbation_b.cols() != base.ambient_dim()) {
    throw DimensionError("perturbation_distance_check: shape mismatch");
  }
  const Matrix g1 = base.matrix() + eps * perturbation_a;
  const Matrix g2 = base.matrix() + eps * perturbation_b;
  const SubspaceBasis v1 = dominant_row_space(g1, m).basis;
  const SubspaceBasis v2 = dominant_row_space(g2, m).basis;

  const SubspaceBasis complement = orthogonal_complement(base);
  const Matrix delta = perturbation_a - perturbation_b;
  const double first_order =
      2.0 * eps * eps * (delta * complement.matrix().transpose()).squaredNorm();
  return PerturbationCheck{subspace_distance_squared(v1, v2), first_order};
}

std::vector<ApproximationPoint> validate_projection_approximation(
    const ApproximationConfig& config) {
  const int m = config.subspace_dim;
  const int n = config.ambient_dim;
  const double gamma_d = db_to_linear(config.gamma_d_db);
  const double sigma_d_sq = data_snr_to_sigma(m, n, gamma_d);
  const double power = transmit_power(m, n, gamma_d);

  std::vector<ApproximationPoint> curve;
  curve.reserve(config.gamma_c_db_grid.size());
  for (std::size_t point = 0; point < config.gamma_c_db_grid.size(); ++point) {
    const double gamma_c = db_to_linear(config.gamma_c_db_grid[point]);
    const double sigma_c_sq = channel_snr_to_sigma(power, gamma_c);

    double sum = 0.0;
    double sum_sq = 0.0;
    for (long trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t t = static_cast<std::uint64_t>(trial);
      const std::uint64_t block = static_cast<std::uint64_t>(point);
      Rng truth_rng(derive_seed(config.seed, t, 0, block, StreamRole::kTruth));
      Rng data_rng(derive_seed(config.seed, t, 0, block, StreamRole::kData));
      Rng chan_rng(derive_seed(config.seed, t, 0, block, StreamRole::kChannel));
      Rng noise_rng(derive_seed(config.seed, t, 0, block, StreamRole::kNoise));

      const SubspaceBasis truth = random_subspace(m, n, truth_rng);
      const Matrix noisy_local =
          truth.matrix() + gaussian_matrix(m, n, sigma_d_sq, data_rng);
      const RealStackedChannel channel =
          draw_channel(config.receive_antennas, m, chan_rng);
      const Matrix noise =
          stacked_noise(channel.rows(), n, sigma_c_sq, noise_rng);

      const Matrix received = channel.matrix() * noisy_local + noise;
      const SubspaceBasis exact = dominant_row_space(received, m).basis;
      const Matrix approximation =
          noisy_local + channel.pseudo_inverse() * noise;
      const SubspaceBasis approx_basis =
          dominant_row_space(approximation, m).basis;

      const double d = subspace_distance(exact, approx_basis);
      sum += d;
      sum_sq += d * d;
    }
    const double mean = sum / config.trials;
    const double variance =
        config.trials > 1
            ? std::max(0.0, (sum_sq - config.trials * mean * mean) /
                                (config.trials - 1))
            : 0.0;
    curve.push_back(ApproximationPoint{
        config.gamma_c_db_grid[point], mean,
        std::sqrt(variance / static_cast<double>(config.trials))});
  }
  return curve;
}

}  // namespace grasspca
