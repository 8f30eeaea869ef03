#pragma once

#include <vector>

#include "grasspca/grassmann.hpp"

namespace grasspca {

/// Data-noise model parameters. The data SNR gamma_d and the noise
/// variance sigma_d_sq are tied by gamma_d = M / (N sigma_d_sq).
struct DataModel {
  int subspace_dim = 0;   // M
  int ambient_dim = 0;    // N
  double sigma_d_sq = 0.0;
  double gamma_d = 0.0;   // linear scale
};

/// Ground truth plus K noisy local principal-component estimates
/// U_k = U* + Z_k. Locals are deliberately not re-orthonormalized: the
/// additive model is what the transmit-power calibration assumes.
struct LocalPcSet {
  SubspaceBasis ground_truth;
  std::vector<Matrix> locals;
};

/// sigma_d^2 = M / (N gamma_d). gamma_d may be +infinity (noise off).
double data_snr_to_sigma(int subspace_dim, int ambient_dim, double gamma_d);

/// gamma_d = M / (N sigma_d^2); +infinity when sigma_d_sq == 0.
double sigma_to_data_snr(int subspace_dim, int ambient_dim,
                         double sigma_d_sq);

/// Average power per column of a transmitted local PC matrix:
/// P = (M + M^2 / gamma_d) / N.
double transmit_power(int subspace_dim, int ambient_dim, double gamma_d);

/// Draws K locals U* + Z_k with Z_k entries i.i.d. N(0, sigma_d_sq),
/// independent across devices; reproducible from the rng state.
LocalPcSet generate_local_pcs(const SubspaceBasis& ground_truth, int devices,
                              double sigma_d_sq, Rng& rng);

/// Centralized-PCA oracle: dominant eigenspace of the sample covariance
/// (1/L) sum_l x_l x_l^T. Used to validate the noise model, not by the
/// simulation pipeline.
EigenspaceResult centralized_pca(const std::vector<Vector>& samples,
                                 int subspace_dim);

}  // namespace grasspca
