#include "grasspca/scenario.hpp"

#include <cmath>
#include <limits>

namespace grasspca {

namespace {

void require_dims(int subspace_dim, int ambient_dim, const char* what) {
  if (subspace_dim < 1 || ambient_dim <= subspace_dim) {
    throw InvalidInputError(std::string(what) + ": need 1 <= M < N");
  }
}

}  // namespace

double data_snr_to_sigma(int subspace_dim, int ambient_dim, double gamma_d) {
  require_dims(subspace_dim, ambient_dim, "data_snr_to_sigma");
  if (!(gamma_d > 0.0)) {
    throw InvalidInputError("data_snr_to_sigma: gamma_d must be positive");
  }
  if (std::isinf(gamma_d)) return 0.0;
  return static_cast<double>(subspace_dim) /
         (static_cast<double>(ambient_dim) * gamma_d);
}

double sigma_to_data_snr(int subspace_dim, int ambient_dim,
                         double sigma_d_sq) {
  require_dims(subspace_dim, ambient_dim, "sigma_to_data_snr");
  if (sigma_d_sq < 0.0) {
    throw InvalidInputError("sigma_to_data_snr: negative variance");
  }
  if (sigma_d_sq == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(subspace_dim) /
         (static_cast<double>(ambient_dim) * sigma_d_sq);
}

double transmit_power(int subspace_dim, int ambient_dim, double gamma_d) {
  require_dims(subspace_dim, ambient_dim, "transmit_power");
  if (!(gamma_d > 0.0)) {
    throw InvalidInputError("transmit_power: gamma_d must be positive");
  }
  const double m = subspace_dim;
  const double noise_power = std::isinf(gamma_d) ? 0.0 : m * m / gamma_d;
  return (m + noise_power) / static_cast<double>(ambient_dim);
}

LocalPcSet generate_local_pcs(const SubspaceBasis& ground_truth, int devices,
                              double sigma_d_sq, Rng& rng) {
  if (devices < 1) {
    throw InvalidInputError("generate_local_pcs: need K >= 1");
  }
  if (sigma_d_sq < 0.0) {
    throw InvalidInputError("generate_local_pcs: negative variance");
  }
  LocalPcSet set{ground_truth, {}};
  set.locals.reserve(devices);
  const int m = ground_truth.subspace_dim();
  const int n = ground_truth.ambient_dim();
  for (int k = 0; k < devices; ++k) {
    Matrix local = ground_truth.matrix();
    if (sigma_d_sq > 0.0) {
      local += gaussian_matrix(m, n, sigma_d_sq, rng);
    }
    set.locals.push_back(std::move(local));
  }
  return set;
}

EigenspaceResult centralized_pca(const std::vector<Vector>& samples,
                                 int subspace_dim) {
  if (samples.size() < static_cast<std::size_t>(subspace_dim)) {
    throw DegenerateInputError(
        "centralized_pca: fewer samples than requested dimensions",
        static_cast<double>(samples.size()));
  }
  const Eigen::Index n = samples.front().size();
  Matrix covariance = Matrix::Zero(n, n);
  for (const Vector& x : samples) {
    if (x.size() != n) {
      throw DimensionError("centralized_pca: inconsistent sample length");
    }
    if (!x.allFinite()) {
      throw InvalidInputError("centralized_pca: non-finite sample");
    }
    covariance.noalias() += x * x.transpose();
  }
  covariance /= static_cast<double>(samples.size());
  return dominant_eigenspace(covariance, subspace_dim);
}

}  // namespace grasspca
