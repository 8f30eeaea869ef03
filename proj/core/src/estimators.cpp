#include "grasspca/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

namespace grasspca {

namespace {

// Ascending device order, independent of container order.
std::vector<const ReceivedSymbol*> sorted_by_device(
    const std::vector<ReceivedSymbol>& received) {
  std::vector<const ReceivedSymbol*> ptrs;
  ptrs.reserve(received.size());
  for (const auto& r : received) ptrs.push_back(&r);
  std::stable_sort(ptrs.begin(), ptrs.end(),
                   [](const ReceivedSymbol* a, const ReceivedSymbol* b) {
                     return a->device_index < b->device_index;
                   });
  return ptrs;
}

}  // namespace

Estimate coherent_estimate(const CoherentInput& input, int subspace_dim) {
  if (input.received.empty()) {
    throw InvalidInputError("coherent_estimate: no received symbols");
  }
  if (input.sigma_d_sq < 0.0 || input.sigma_c_sq < 0.0) {
    throw InvalidInputError("coherent_estimate: negative noise variance");
  }
  const int m = subspace_dim;
  const int n = static_cast<int>(input.received.front().matrix.cols());
  const bool noiseless = input.sigma_d_sq == 0.0 && input.sigma_c_sq == 0.0;

  const auto ordered = sorted_by_device(input.received);
  Matrix aggregation = Matrix::Zero(m, n);
  std::vector<double> diagnostics;
  diagnostics.reserve(ordered.size());

  for (const ReceivedSymbol* symbol : ordered) {
    const RealStackedChannel& channel = symbol->channel;
    if (channel.cols() != m || symbol->matrix.cols() != n) {
      throw DimensionError("coherent_estimate: inconsistent symbol shapes");
    }
    if (channel.rows() <= m) {
      throw ConfigError("coherent_estimate: need 2*N_r > M per channel");
    }
    // H^+ Y via the Gram inverse; never an explicit pseudo-inverse chain.
    Matrix inverted = channel.gram_inverse() *
                      (channel.matrix().transpose() * symbol->matrix);
    if (noiseless) {
      aggregation += inverted;
    } else {
      Matrix regularizer = input.sigma_c_sq * channel.gram_inverse();
      regularizer.diagonal().array() += input.sigma_d_sq;
      Eigen::LDLT<Matrix> ldlt(regularizer);
      if (ldlt.info() != Eigen::Success) {
        throw DegenerateInputError(
            "coherent_estimate: singular regularizer for device " +
                std::to_string(symbol->device_index),
            0.0);
      }
      aggregation += ldlt.solve(inverted);
    }
    diagnostics.push_back(channel.condition_number());
  }
  aggregation /= static_cast<double>(ordered.size());

  EigenspaceResult projected = dominant_row_space(aggregation, m);
  return Estimate{std::move(projected.basis), projected.spectral_gap,
                  std::move(diagnostics)};
}

SubspaceBasis detect_single_symbol(const ReceivedSymbol& received,
                                   int subspace_dim) {
  try {
    return dominant_row_space(received.matrix, subspace_dim).basis;
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError("detect_single_symbol: device " +
                                   std::to_string(received.device_index) +
                                   ": " + e.what(),
                               e.detail());
  }
}

Matrix blind_aggregation(const std::vector<SubspaceBasis>& per_symbol_bases) {
  if (per_symbol_bases.empty()) {
    throw InvalidInputError("blind_aggregation: no bases");
  }
  const int m = per_symbol_bases.front().subspace_dim();
  const int n = per_symbol_bases.front().ambient_dim();
  const int count = static_cast<int>(per_symbol_bases.size());

  // One rank-K*M update instead of K small products.
  Matrix stacked(static_cast<Eigen::Index>(count) * m, n);
  for (int k = 0; k < count; ++k) {
    if (per_symbol_bases[k].subspace_dim() != m ||
        per_symbol_bases[k].ambient_dim() != n) {
      throw DimensionError("blind_aggregation: inconsistent basis shapes");
    }
    stacked.middleRows(static_cast<Eigen::Index>(k) * m, m) =
        per_symbol_bases[k].matrix();
  }
  Matrix centroid = Matrix::Zero(n, n);
  centroid.selfadjointView<Eigen::Lower>().rankUpdate(stacked.transpose(),
                                                      1.0 / count);
  centroid = centroid.selfadjointView<Eigen::Lower>();
  return centroid;
}

Estimate blind_estimate(const std::vector<ReceivedSymbol>& received,
                        int subspace_dim) {
  if (received.empty()) {
    throw InvalidInputError("blind_estimate: no received symbols");
  }
  const auto ordered = sorted_by_device(received);
  std::vector<SubspaceBasis> bases;
  bases.reserve(ordered.size());
  std::vector<double> diagnostics;
  diagnostics.reserve(ordered.size());
  for (const ReceivedSymbol* symbol : ordered) {
    // Same call detect_single_symbol() makes, so aggregating detections
    // externally reproduces this path bit for bit. No CSI is touched:
    // the conditioning diagnostic comes from the received symbol itself.
    EigenspaceResult detected = [&] {
      try {
        return dominant_row_space(symbol->matrix, subspace_dim);
      } catch (const DegenerateInputError& e) {
        throw DegenerateInputError("blind_estimate: device " +
                                       std::to_string(symbol->device_index) +
                                       ": " + e.what(),
                                   e.detail());
      }
    }();
    diagnostics.push_back(std::sqrt(
        detected.eigenvalues(0) / detected.eigenvalues(subspace_dim - 1)));
    bases.push_back(std::move(detected.basis));
  }
  EigenspaceResult projected =
      dominant_eigenspace(blind_aggregation(bases), subspace_dim);
  return Estimate{std::move(projected.basis), projected.spectral_gap,
                  std::move(diagnostics)};
}

Estimate uniform_aggregate(const std::vector<Matrix>& items,
                           int subspace_dim) {
  if (items.empty()) {
    throw InvalidInputError("uniform_aggregate: no inputs");
  }
  Matrix mean = Matrix::Zero(items.front().rows(), items.front().cols());
  for (const Matrix& item : items) {
    if (item.rows() != mean.rows() || item.cols() != mean.cols()) {
      throw DimensionError("uniform_aggregate: inconsistent shapes");
    }
    mean += item;
  }
  mean /= static_cast<double>(items.size());
  EigenspaceResult projected = dominant_row_space(mean, subspace_dim);
  return Estimate{std::move(projected.basis), projected.spectral_gap, {}};
}

}  // namespace grasspca
