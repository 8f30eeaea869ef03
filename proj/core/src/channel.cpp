#include "grasspca/channel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace grasspca {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kSqrt2 = 1.4142135623730950488;

}  // namespace

RealStackedChannel::RealStackedChannel(Matrix stacked)
    : stacked_(std::move(stacked)) {
  const Eigen::Index rows = stacked_.rows();
  const Eigen::Index cols = stacked_.cols();
  if (rows <= cols || cols < 1) {
    throw ConfigError("RealStackedChannel: need 2*N_r > N_t, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!stacked_.allFinite()) {
    throw InvalidInputError("RealStackedChannel: non-finite entries");
  }
  Matrix gram = Matrix::Zero(cols, cols);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(stacked_.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success ||
      ldlt.rcond() <= kRankTolerance * kRankTolerance) {
    throw DegenerateInputError("RealStackedChannel: near-singular channel",
                               ldlt.rcond());
  }
  gram_inverse_ = ldlt.solve(Matrix::Identity(cols, cols));
}

double RealStackedChannel::condition_number() const {
  const Matrix gram = stacked_.transpose() * stacked_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram,
                                            Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues()(0);
  const double largest = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(largest / smallest);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0)) {
    throw InvalidInputError("linear_to_db: need a positive value");
  }
  return 10.0 * std::log10(linear);
}

double channel_snr_to_sigma(double transmit_power, double gamma_c) {
  if (!(transmit_power > 0.0) || !(gamma_c > 0.0)) {
    throw InvalidInputError("channel_snr_to_sigma: need positive arguments");
  }
  if (std::isinf(gamma_c)) return 0.0;
  return transmit_power / gamma_c;
}

double sigma_to_channel_snr(double transmit_power, double sigma_c_sq) {
  if (!(transmit_power > 0.0) || sigma_c_sq < 0.0) {
    throw InvalidInputError("sigma_to_channel_snr: invalid arguments");
  }
  if (sigma_c_sq == 0.0) return std::numeric_limits<double>::infinity();
  return transmit_power / sigma_c_sq;
}

RealStackedChannel draw_channel(int receive_antennas, int transmit_antennas,
                                Rng& rng, int* redraws) {
  if (2 * receive_antennas <= transmit_antennas || transmit_antennas < 1) {
    throw ConfigError("draw_channel: need 2*N_r > N_t");
  }
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Matrix real_half =
        gaussian_matrix(receive_antennas, transmit_antennas, 0.5, rng);
    const Matrix imag_half =
        gaussian_matrix(receive_antennas, transmit_antennas, 0.5, rng);
    Matrix stacked(2 * receive_antennas, transmit_antennas);
    stacked.topRows(receive_antennas) = kSqrt2 * real_half;
    stacked.bottomRows(receive_antennas) = kSqrt2 * imag_half;
    try {
      return RealStackedChannel(std::move(stacked));
    } catch (const DegenerateInputError&) {
      if (redraws != nullptr) ++*redraws;
    }
  }
  throw DegenerateInputError(
      "draw_channel: persistent near-singular draws; check dimensions", 0.0);
}

Matrix stacked_noise(int stacked_rows, int cols, double sigma_c_sq, Rng& rng) {
  if (stacked_rows % 2 != 0) {
    throw DimensionError("stacked_noise: stacked row count must be even");
  }
  if (sigma_c_sq < 0.0) {
    throw InvalidInputError("stacked_noise: negative variance");
  }
  if (sigma_c_sq == 0.0) return Matrix::Zero(stacked_rows, cols);
  const int half = stacked_rows / 2;
  Matrix noise(stacked_rows, cols);
  noise.topRows(half) = kSqrt2 * gaussian_matrix(half, cols, sigma_c_sq / 2.0, rng);
  noise.bottomRows(half) =
      kSqrt2 * gaussian_matrix(half, cols, sigma_c_sq / 2.0, rng);
  return noise;
}

ReceivedSymbol transmit(const Matrix& symbol, const RealStackedChannel& channel,
                        double sigma_c_sq, Rng& noise_rng, int device_index) {
  if (symbol.rows() != channel.cols()) {
    throw DimensionError("transmit: symbol rows must equal channel columns");
  }
  Matrix received = channel.matrix() * symbol;
  if (sigma_c_sq > 0.0) {
    received += stacked_noise(channel.rows(), static_cast<int>(symbol.cols()),
                              sigma_c_sq, noise_rng);
  }
  return ReceivedSymbol{std::move(received), channel, device_index};
}

Matrix draw_antenna_mapping(int transmit_antennas, int symbol_rows, Rng& rng) {
  if (transmit_antennas < symbol_rows) {
    throw DimensionError("draw_antenna_mapping: need N_t >= M");
  }
  if (transmit_antennas == symbol_rows) {
    return Matrix::Identity(transmit_antennas, symbol_rows);
  }
  return random_stiefel(transmit_antennas, symbol_rows, rng);
}

ReceivedSymbol transmit_mapped(const Matrix& symbol,
                               const RealStackedChannel& channel,
                               const Matrix& mapping, double sigma_c_sq,
                               Rng& noise_rng, int device_index) {
  if (mapping.rows() != channel.cols() || mapping.cols() != symbol.rows()) {
    throw DimensionError("transmit_mapped: mapping shape mismatch");
  }
  RealStackedChannel effective(channel.matrix() * mapping);
  Matrix received = effective.matrix() * symbol;
  if (sigma_c_sq > 0.0) {
    received += stacked_noise(effective.rows(),
                              static_cast<int>(symbol.cols()), sigma_c_sq,
                              noise_rng);
  }
  return ReceivedSymbol{std::move(received), std::move(effective),
                        device_index};
}

ReceivedSymbol partition_transmit(const Matrix& symbol,
                                  const std::vector<RealStackedChannel>& blocks,
                                  double sigma_c_sq, Rng& noise_rng,
                                  int device_index) {
  const int symbol_rows = static_cast<int>(symbol.rows());
  const int cols = static_cast<int>(symbol.cols());
  if (blocks.empty()) {
    throw InvalidInputError("partition_transmit: no channel blocks");
  }
  const int block_cols = blocks.front().cols();  // per-block symbol capacity
  const int needed = (symbol_rows + block_cols - 1) / block_cols;
  if (static_cast<int>(blocks.size()) != needed ||
      needed * block_cols < symbol_rows) {
    throw Error("partition_transmit: block count does not cover the symbol");
  }

  int stacked_rows = 0;
  for (const auto& block : blocks) {
    if (block.cols() != block_cols) {
      throw DimensionError("partition_transmit: uneven block widths");
    }
    stacked_rows += block.rows();
  }

  Matrix received(stacked_rows, cols);
  Matrix effective = Matrix::Zero(stacked_rows, symbol_rows);
  int row_offset = 0;
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    const RealStackedChannel& block = blocks[t];
    const int col_offset = static_cast<int>(t) * block_cols;
    const int live = std::min(block_cols, symbol_rows - col_offset);

    // Padded rows are zero, so only the live columns of the block channel
    // contribute.
    Matrix block_received =
        block.matrix().leftCols(live) * symbol.middleRows(col_offset, live);
    if (sigma_c_sq > 0.0) {
      block_received += stacked_noise(block.rows(), cols, sigma_c_sq,
                                      noise_rng);
    }
    received.middleRows(row_offset, block.rows()) = block_received;
    effective.block(row_offset, col_offset, block.rows(), live) =
        block.matrix().leftCols(live);
    row_offset += block.rows();
  }
  return ReceivedSymbol{std::move(received),
                        RealStackedChannel(std::move(effective)),
                        device_index};
}

}  // namespace grasspca
