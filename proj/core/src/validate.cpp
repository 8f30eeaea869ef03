#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "grasspca/channel.hpp"
#include "grasspca/estimators.hpp"
#include "grasspca/harness.hpp"
#include "grasspca/scenario.hpp"

namespace grasspca {

namespace {

std::string fmt(double value) { return format_double(value); }

struct DeviceTermSetup {
  int subspace_dim = 8;
  int ambient_dim = 200;
  int receive_antennas = 16;
  double sigma_d_sq = 0.0;
  double sigma_c_sq = 0.0;
};

DeviceTermSetup default_device_setup() {
  DeviceTermSetup s;
  const double gamma = db_to_linear(10.0);
  s.sigma_d_sq = data_snr_to_sigma(s.subspace_dim, s.ambient_dim, gamma);
  s.sigma_c_sq = channel_snr_to_sigma(
      transmit_power(s.subspace_dim, s.ambient_dim, gamma), gamma);
  return s;
}

}  // namespace

PropertyResult check_rotation_invariance(std::uint64_t seed, long trials) {
  if (trials <= 0) trials = 50;
  const int m = 4;
  const int n = 24;
  double worst_quotient = 0.0;
  double worst_rotation = 0.0;
  double worst_end_to_end = 0.0;

  for (long trial = 0; trial < trials; ++trial) {
    const auto t = static_cast<std::uint64_t>(trial);
    Rng rng(derive_seed(seed, t, 0, 0, StreamRole::kTruth));
    const SubspaceBasis basis = random_subspace(m, n, rng);

    // Same point after any left orthonormal factor.
    const Matrix q = random_stiefel(m, m, rng);
    const SubspaceBasis rotated(q * basis.matrix());
    worst_quotient =
        std::max(worst_quotient, subspace_distance(basis, rotated));

    // A full-column-rank left factor preserves the row space.
    const Matrix h = gaussian_matrix(9, m, 1.0, rng);
    const Matrix hu = h * basis.matrix();
    const SubspaceBasis recovered =
        dominant_eigenspace(hu.transpose() * hu, m).basis;
    worst_rotation =
        std::max(worst_rotation, subspace_distance(recovered, basis));

    // End to end: noiseless transmission is invertible by blind detection.
    Rng chan_rng(derive_seed(seed, t, 0, 0, StreamRole::kChannel));
    const RealStackedChannel channel = draw_channel(6, m, chan_rng);
    Rng unused_noise(0);
    const ReceivedSymbol received =
        transmit(basis.matrix(), channel, 0.0, unused_noise);
    const SubspaceBasis detected = detect_single_symbol(received, m);
    worst_end_to_end =
        std::max(worst_end_to_end, subspace_distance(detected, basis));
  }

  const bool pass = worst_quotient < 1e-8 && worst_rotation < 1e-6 &&
                    worst_end_to_end < 1e-6;
  return PropertyResult{
      "rotation-invariance", pass,
      "max quotient=" + fmt(worst_quotient) + " rotation=" +
          fmt(worst_rotation) + " end-to-end=" + fmt(worst_end_to_end) +
          " over " + std::to_string(trials) + " trials"};
}

namespace {

// Shared scaffolding for the two unbiasedness checks: averages a per-trial
// aggregation matrix with a fixed ground truth and reports the distance at
// logarithmic checkpoints.
template <typename TermFn>
PropertyResult unbiasedness_check(const std::string& name, std::uint64_t seed,
                                  long trials, TermFn&& term) {
  if (trials <= 0) trials = 10000;
  const DeviceTermSetup setup = default_device_setup();
  Rng truth_rng(derive_seed(seed, 0, 0, 0, StreamRole::kTruth));
  const SubspaceBasis truth =
      random_subspace(setup.subspace_dim, setup.ambient_dim, truth_rng);

  std::vector<long> checkpoints = {trials / 100, trials / 10, trials};
  checkpoints.erase(std::remove_if(checkpoints.begin(), checkpoints.end(),
                                   [](long c) { return c < 1; }),
                    checkpoints.end());

  std::vector<double> distances;
  long next = 0;
  Matrix running;
  for (long trial = 0; trial < trials; ++trial) {
    term(setup, truth, static_cast<std::uint64_t>(trial), running);
    if (next < static_cast<long>(checkpoints.size()) &&
        trial + 1 == checkpoints[next]) {
      // Square accumulators are lower-triangular rank-update storage.
      const bool square = running.rows() == running.cols();
      const Matrix averaged =
          (square ? Matrix(running.template selfadjointView<Eigen::Lower>())
                  : running) /
          static_cast<double>(trial + 1);
      const SubspaceBasis projected =
          square ? dominant_eigenspace(averaged, setup.subspace_dim).basis
                 : dominant_row_space(averaged, setup.subspace_dim).basis;
      distances.push_back(subspace_distance(projected, truth));
      ++next;
    }
  }

  bool pass = distances.back() < 0.05;
  for (std::size_t i = 1; i < distances.size(); ++i) {
    pass = pass && distances[i] < distances[i - 1];
  }
  std::string detail = "d at checkpoints:";
  for (double d : distances) detail += " " + fmt(d);
  return PropertyResult{name, pass, detail};
}

}  // namespace

PropertyResult check_unbiasedness_coherent(std::uint64_t seed, long trials) {
  return unbiasedness_check(
      "unbiasedness-coherent", seed, trials,
      [seed](const DeviceTermSetup& s, const SubspaceBasis& truth,
             std::uint64_t trial, Matrix& running) {
        Rng data_rng(derive_seed(seed, trial, 0, 0, StreamRole::kData));
        Rng chan_rng(derive_seed(seed, trial, 0, 0, StreamRole::kChannel));
        Rng noise_rng(derive_seed(seed, trial, 0, 0, StreamRole::kNoise));
        const Matrix local =
            truth.matrix() + gaussian_matrix(s.subspace_dim, s.ambient_dim,
                                             s.sigma_d_sq, data_rng);
        const RealStackedChannel channel =
            draw_channel(s.receive_antennas, s.subspace_dim, chan_rng);
        const ReceivedSymbol received =
            transmit(local, channel, s.sigma_c_sq, noise_rng);

        Matrix inverted = channel.gram_inverse() *
                          (channel.matrix().transpose() * received.matrix);
        Matrix regularizer = s.sigma_c_sq * channel.gram_inverse();
        regularizer.diagonal().array() += s.sigma_d_sq;
        const Matrix term = regularizer.ldlt().solve(inverted);
        if (running.size() == 0) {
          running = term;
        } else {
          running += term;
        }
      });
}

PropertyResult check_unbiasedness_blind(std::uint64_t seed, long trials) {
  return unbiasedness_check(
      "unbiasedness-blind", seed, trials,
      [seed](const DeviceTermSetup& s, const SubspaceBasis& truth,
             std::uint64_t trial, Matrix& running) {
        Rng data_rng(derive_seed(seed, trial, 0, 0, StreamRole::kData));
        Rng chan_rng(derive_seed(seed, trial, 0, 0, StreamRole::kChannel));
        Rng noise_rng(derive_seed(seed, trial, 0, 0, StreamRole::kNoise));
        const Matrix local =
            truth.matrix() + gaussian_matrix(s.subspace_dim, s.ambient_dim,
                                             s.sigma_d_sq, data_rng);
        const RealStackedChannel channel =
            draw_channel(s.receive_antennas, s.subspace_dim, chan_rng);
        const ReceivedSymbol received =
            transmit(local, channel, s.sigma_c_sq, noise_rng);
        const SubspaceBasis detected =
            detect_single_symbol(received, s.subspace_dim);
        if (running.size() == 0) {
          running = Matrix::Zero(s.ambient_dim, s.ambient_dim);
        }
        running.selfadjointView<Eigen::Lower>().rankUpdate(
            detected.matrix().transpose(), 1.0);
      });
}

PropertyResult check_perturbation_order(std::uint64_t seed) {
  const int m = 4;
  const int n = 24;
  const std::vector<double> eps_grid = {1e-1, 5e-2, 2.5e-2, 1.25e-2};
  const int draws = 64;

  std::vector<double> residual_means(eps_grid.size(), 0.0);
  for (int draw = 0; draw < draws; ++draw) {
    const auto d = static_cast<std::uint64_t>(draw);
    Rng rng(derive_seed(seed, d, 0, 0, StreamRole::kTruth));
    const SubspaceBasis base = random_subspace(m, n, rng);
    auto unit_spectral = [&rng, m, n]() {
      Matrix e = gaussian_matrix(m, n, 1.0, rng);
      Eigen::JacobiSVD<Matrix> svd(e);
      return Matrix(e / svd.singularValues()(0));
    };
    const Matrix e1 = unit_spectral();
    const Matrix e2 = unit_spectral();
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      const PerturbationCheck check =
          perturbation_distance_check(base, e1, e2, eps_grid[i]);
      residual_means[i] += std::abs(check.exact - check.first_order) / draws;
    }
  }

  // Cubic residual: halving eps divides it by ~8.
  bool pass = true;
  std::string detail = "residual ratios:";
  for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i) {
    const double ratio = residual_means[i] / residual_means[i + 1];
    detail += " " + fmt(ratio);
    pass = pass && ratio >= 6.0 && ratio <= 10.0;
  }
  return PropertyResult{"perturbation-order", pass, detail};
}

PropertyResult check_projector_mean_diagonal(std::uint64_t seed, long trials) {
  if (trials <= 0) trials = 10000;
  const int m = 8;
  const int n = 200;
  const double sigma_d_sq = data_snr_to_sigma(m, n, db_to_linear(10.0));

  Rng q_rng(derive_seed(seed, 0, 0, 0, StreamRole::kTruth));
  const SubspaceBasis truth = random_subspace(m, n, q_rng);
  const SubspaceBasis complement = orthogonal_complement(truth);
  Matrix q(n, n);
  q.topRows(m) = truth.matrix();
  q.bottomRows(n - m) = complement.matrix();

  Matrix identity_block = Matrix::Zero(m, n);
  identity_block.leftCols(m) = Matrix::Identity(m, m);

  Matrix mean = Matrix::Zero(n, n);
  for (long trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial), 0, 0,
                        StreamRole::kData));
    const Matrix z = gaussian_matrix(m, n, sigma_d_sq, rng);
    const Matrix shifted = identity_block + z * q.transpose();
    const SubspaceBasis projector_basis = dominant_row_space(shifted, m).basis;
    mean.selfadjointView<Eigen::Lower>().rankUpdate(
        projector_basis.matrix().transpose(), 1.0 / trials);
  }

  // Only the lower triangle was accumulated; it is all we inspect.
  double max_offdiag = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      max_offdiag = std::max(max_offdiag, std::abs(mean(i, j)));
    }
  }
  const double threshold = 5.0 / std::sqrt(static_cast<double>(trials));
  return PropertyResult{
      "projector-mean-diagonal", max_offdiag < threshold,
      "max |offdiag|=" + fmt(max_offdiag) + " threshold=" + fmt(threshold) +
          " at " + std::to_string(trials) + " trials"};
}

PropertyResult check_inverse_wishart_moment(std::uint64_t seed, long trials) {
  if (trials <= 0) trials = 10000;
  const int receive_antennas = 16;
  const int columns = 8;
  const double expected = 1.0 / (2.0 * receive_antennas - columns - 1);

  Matrix mean = Matrix::Zero(columns, columns);
  for (long trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial), 0, 0,
                        StreamRole::kChannel));
    mean += draw_channel(receive_antennas, columns, rng).gram_inverse();
  }
  mean /= static_cast<double>(trials);

  double max_diag_error = 0.0;
  double max_offdiag = 0.0;
  for (int i = 0; i < columns; ++i) {
    max_diag_error = std::max(max_diag_error,
                              std::abs(mean(i, i) - expected) / expected);
    for (int j = 0; j < i; ++j) {
      max_offdiag = std::max(max_offdiag, std::abs(mean(i, j)));
    }
  }
  const double offdiag_threshold =
      3.0 / std::sqrt(static_cast<double>(trials));
  const bool pass =
      max_diag_error < 0.05 && max_offdiag < offdiag_threshold;
  return PropertyResult{
      "inverse-wishart-moment", pass,
      "diag rel err=" + fmt(max_diag_error) + " (tol 0.05), offdiag=" +
          fmt(max_offdiag) + " (tol " + fmt(offdiag_threshold) + ")"};
}

PropertyResult check_projection_approximation(std::uint64_t seed,
                                              long trials) {
  if (trials <= 0) trials = 1000;
  ApproximationConfig config;
  config.trials = trials;
  config.seed = seed;
  const auto curve = validate_projection_approximation(config);

  bool monotone = true;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double slack =
        3.0 * (curve[i].std_error + curve[i + 1].std_error);
    monotone = monotone &&
               curve[i + 1].mean_distance <= curve[i].mean_distance + slack;
  }
  const auto& first = curve.front();
  const auto& last = curve.back();
  const bool separated =
      first.mean_distance - last.mean_distance >=
      3.0 * (first.std_error + last.std_error);

  // Noise off: the two subspaces coincide exactly.
  ApproximationConfig noiseless = config;
  noiseless.gamma_c_db_grid = {std::numeric_limits<double>::infinity()};
  noiseless.trials = std::min<long>(trials, 50);
  const double zero_mean =
      validate_projection_approximation(noiseless).front().mean_distance;

  const bool pass = monotone && separated && zero_mean < 1e-9;
  std::string detail = "mean distance:";
  for (const auto& point : curve) {
    detail += " " + fmt(point.mean_distance);
  }
  detail += "; sigma_c=0 gives " + fmt(zero_mean);
  return PropertyResult{"projection-approximation", pass, detail};
}

std::vector<PropertyResult> run_validation_suite(const std::string& suite,
                                                 std::uint64_t seed,
                                                 long trials) {
  std::vector<PropertyResult> results;
  const bool all = suite == "all";
  auto wanted = [&](const char* name) { return all || suite == name; };

  if (wanted("rotation-invariance")) {
    results.push_back(check_rotation_invariance(seed, trials > 0 ? trials / 100 : 0));
  }
  if (wanted("unbiasedness-coherent")) {
    results.push_back(check_unbiasedness_coherent(seed, trials));
  }
  if (wanted("unbiasedness-blind")) {
    results.push_back(check_unbiasedness_blind(seed, trials));
  }
  if (wanted("perturbation-order")) {
    results.push_back(check_perturbation_order(seed));
  }
  if (wanted("projector-mean-diagonal")) {
    results.push_back(check_projector_mean_diagonal(seed, trials));
  }
  if (wanted("inverse-wishart-moment")) {
    results.push_back(check_inverse_wishart_moment(seed, trials));
  }
  if (wanted("projection-approximation")) {
    results.push_back(check_projection_approximation(seed, trials > 0 ? trials / 10 : 0));
  }
  if (results.empty()) {
    throw InvalidInputError("unknown validation suite '" + suite + "'");
  }
  return results;
}

}  // namespace grasspca
