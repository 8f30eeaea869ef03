#pragma once

#include <vector>

#include "grasspca/channel.hpp"
#include "grasspca/grassmann.hpp"

namespace grasspca {

/// Everything the coherent estimator is allowed to know: the received
/// symbols with their channels, and the exact noise variances used by the
/// generator.
struct CoherentInput {
  std::vector<ReceivedSymbol> received;
  double sigma_d_sq = 0.0;
  double sigma_c_sq = 0.0;
};

/// A global-PC estimate: the basis, the spectral gap of the aggregation
/// matrix (how well-defined the extracted subspace is), and per-device
/// conditioning diagnostics.
struct Estimate {
  SubspaceBasis basis;
  double spectral_gap = 0.0;
  std::vector<double> diagnostics;
};

/// Maximum-likelihood estimate with receive CSI: per device
///   A_k = sigma_d^2 I + sigma_c^2 (H_k^T H_k)^{-1},
///   term_k = A_k^{-1} H_k^+ Y_k,
/// then J = (1/K) sum_k term_k and the dominant row space of J.
/// When both variances are zero the regularizer collapses to A_k = I
/// (pure channel inversion).
///
/// Terms are reduced in ascending device order regardless of input order,
/// so results are bit-reproducible under permutation and threading.
Estimate coherent_estimate(const CoherentInput& input, int subspace_dim);

/// Single-symbol blind detection: the dominant row-space basis of the
/// received matrix, i.e. the top-M right singular vectors of Y. Needs no
/// channel knowledge.
SubspaceBasis detect_single_symbol(const ReceivedSymbol& received,
                                   int subspace_dim);

/// Centroid matrix (1/K) sum_k U_k^T U_k of per-symbol subspace bases.
/// Exposed so callers aggregating detect_single_symbol() outputs share the
/// exact reduction used by blind_estimate().
Matrix blind_aggregation(const std::vector<SubspaceBasis>& per_symbol_bases);

/// Blind maximum-likelihood estimate (no CSI): project each received
/// symbol to a point on the Grassmannian, average the projectors, and
/// extract the dominant eigenspace of the centroid.
Estimate blind_estimate(const std::vector<ReceivedSymbol>& received,
                        int subspace_dim);

/// Uniform aggregation baseline: dominant row space of (1/K) sum_k G_k.
/// Serves as the noiseless-link DPCA reference and as the digital
/// baseline's aggregation rule.
Estimate uniform_aggregate(const std::vector<Matrix>& items, int subspace_dim);

}  // namespace grasspca
