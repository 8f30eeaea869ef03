#pragma once

#include <cstdint>
#include <vector>

#include "grasspca/grassmann.hpp"

namespace grasspca {

/// Parameters of the analytic MSSD bounds.
struct BoundInput {
  int subspace_dim = 0;   // M
  int ambient_dim = 0;    // N
  int devices = 0;        // K
  int receive_antennas = 0;  // N_r
  double sigma_d_sq = 0.0;
  double sigma_c_sq = 0.0;
};

/// Coherent-estimator MSSD bound (variance form):
///   2 M (N - M) / K * (sigma_d^2 + sigma_c^2 / (2 N_r - M - 1)).
double coherent_bound(const BoundInput& input);

/// Same bound expressed directly in the SNR domain:
///   2 M^2 (N - M) / (K N) * [1/gamma_d + (1 + M/gamma_d) / ((2 N_r - M - 1) gamma_c)].
/// Agrees with the variance form to 1e-12 relative after conversion.
double coherent_bound_snr(int subspace_dim, int ambient_dim, int devices,
                          int receive_antennas, double gamma_d,
                          double gamma_c);

/// Blind-estimator bound: exactly twice the coherent bound.
double blind_bound(const BoundInput& input);
double blind_bound_snr(int subspace_dim, int ambient_dim, int devices,
                       int receive_antennas, double gamma_d, double gamma_c);

/// Bound under partitioned transmission (M > N_t): the receiver-noise
/// coefficient becomes a per-block inverse-Wishart moment,
///   sum_t m_t (sigma_d^2 + sigma_c^2 / (2 N_r - m_t - 1))
/// over block widths m_t (full blocks of N_t rows, remainder last).
/// With N_t >= M this reduces to coherent_bound().
double coherent_bound_partitioned(const BoundInput& input,
                                  int transmit_antennas);
double blind_bound_partitioned(const BoundInput& input, int transmit_antennas);

/// Uniform-aggregation error model over error-free links:
///   2 M (N - M) sigma_d^2 / K.
double uniform_aggregation_bound(int subspace_dim, int ambient_dim,
                                 int devices, double sigma_d_sq);

/// First-order perturbation check: for G_i = F + eps E_i,
///   exact        = d^2(rowspace(G_1), rowspace(G_2))
///   first_order  = 2 eps^2 Tr(dE Fperp^T Fperp dE^T),  dE = E_1 - E_2.
/// The residual |exact - first_order| is cubic in eps.
struct PerturbationCheck {
  double exact = 0.0;
  double first_order = 0.0;
};
PerturbationCheck perturbation_distance_check(const SubspaceBasis& base,
                                              const Matrix& perturbation_a,
                                              const Matrix& perturbation_b,
                                              double eps);

/// Monte Carlo comparison of the blind per-symbol subspace against its
/// channel-inverted approximation rowspace(U + Z + H^+ W), per channel
/// SNR. Runs with N_t = M.
struct ApproximationConfig {
  int subspace_dim = 8;    // M (= N_t)
  int ambient_dim = 200;   // N
  int receive_antennas = 16;
  double gamma_d_db = 10.0;
  std::vector<double> gamma_c_db_grid = {0.0, 5.0, 10.0, 15.0, 20.0};
  long trials = 1000;
  std::uint64_t seed = 1;
};

struct ApproximationPoint {
  double gamma_c_db = 0.0;
  double mean_distance = 0.0;
  double std_error = 0.0;
};

std::vector<ApproximationPoint> validate_projection_approximation(
    const ApproximationConfig& config);

}  // namespace grasspca
