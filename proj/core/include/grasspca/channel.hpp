#pragma once

#include <vector>

#include "grasspca/grassmann.hpp"

namespace grasspca {

/// Real-stacked MIMO channel: the complex N_r x N_t Rayleigh channel
/// rewritten as a real matrix with twice the rows, scaled so entries are
/// i.i.d. N(0,1). Also used for effective channels (antenna mappings,
/// block-diagonal partitions), so the column count is the symbol row count
/// rather than a literal antenna count.
class RealStackedChannel {
public:
  /// Validates rows > cols and effective rank (relative singular-value
  /// tolerance 1e-10); precomputes (H^T H)^{-1}.
  explicit RealStackedChannel(Matrix stacked);

  const Matrix& matrix() const { return stacked_; }
  const Matrix& gram_inverse() const { return gram_inverse_; }

  /// Moore-Penrose pseudo-inverse (H^T H)^{-1} H^T.
  Matrix pseudo_inverse() const { return gram_inverse_ * stacked_.transpose(); }

  /// sigma_max / sigma_min of the stacked matrix.
  double condition_number() const;

  int rows() const { return static_cast<int>(stacked_.rows()); }
  int cols() const { return static_cast<int>(stacked_.cols()); }

private:
  Matrix stacked_;
  Matrix gram_inverse_;
};

/// A received matrix symbol together with the effective channel it came
/// through (the coherent estimator consumes the channel; the blind one
/// ignores it) and the device it belongs to.
struct ReceivedSymbol {
  Matrix matrix;
  RealStackedChannel channel;
  int device_index = 0;
};

/// Channel-noise parameters tied by gamma_c = P / sigma_c_sq.
struct ChannelModel {
  int transmit_antennas = 0;  // N_t
  int receive_antennas = 0;   // N_r
  double sigma_c_sq = 0.0;
  double gamma_c = 0.0;       // linear scale
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// sigma_c^2 = P / gamma_c; gamma_c may be +infinity (noise off).
double channel_snr_to_sigma(double transmit_power, double gamma_c);
double sigma_to_channel_snr(double transmit_power, double sigma_c_sq);

/// Draws a 2N_r x N_t real-stacked Rayleigh channel: real and imaginary
/// halves with i.i.d. N(0, 1/2) entries, stacked and scaled by sqrt(2).
/// Near-singular draws (probability zero in theory) are rejected and
/// redrawn; the count lands in *redraws when given.
RealStackedChannel draw_channel(int receive_antennas, int transmit_antennas,
                                Rng& rng, int* redraws = nullptr);

/// Stacked receiver noise: sqrt(2) times N(0, sigma_c_sq/2) halves, so
/// entries are i.i.d. N(0, sigma_c_sq).
Matrix stacked_noise(int stacked_rows, int cols, double sigma_c_sq, Rng& rng);

/// Y = H * symbol + W. Symbol rows must match the channel column count.
ReceivedSymbol transmit(const Matrix& symbol, const RealStackedChannel& channel,
                        double sigma_c_sq, Rng& noise_rng, int device_index = 0);

/// Antenna mapping for N_t >= M: an isotropically drawn N_t x M matrix
/// with orthonormal columns. N_t == M yields the identity.
Matrix draw_antenna_mapping(int transmit_antennas, int symbol_rows, Rng& rng);

/// Transmits symbol through H * X; the returned effective channel is
/// H * X so estimators run unmodified.
ReceivedSymbol transmit_mapped(const Matrix& symbol,
                               const RealStackedChannel& channel,
                               const Matrix& mapping, double sigma_c_sq,
                               Rng& noise_rng, int device_index = 0);

/// Transmission of an M x N symbol with M > N_t: rows are partitioned into
/// ceil(M / N_t) blocks (the last block zero-padded), each block sent over
/// its own independent channel draw, and the received blocks stacked. The
/// returned symbol carries the block-diagonal effective channel (padded
/// columns dropped), so both estimators run unmodified.
ReceivedSymbol partition_transmit(const Matrix& symbol,
                                  const std::vector<RealStackedChannel>& blocks,
                                  double sigma_c_sq, Rng& noise_rng,
                                  int device_index = 0);

}  // namespace grasspca
