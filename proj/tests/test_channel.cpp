#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <grasspca/channel.hpp>

#include "test_util.hpp"

using namespace grasspca;
using grasspca::testing::make_rng;
using grasspca::testing::max_abs;

TEST_CASE("dB conversions") {
  CHECK(db_to_linear(10.0) == 10.0);
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(linear_to_db(10.0) == doctest::Approx(10.0));
  CHECK(std::isinf(db_to_linear(std::numeric_limits<double>::infinity())));
}

TEST_CASE("channel SNR conversions") {
  const double power = 0.072;
  CHECK(channel_snr_to_sigma(power, 10.0) == doctest::Approx(0.0072));
  CHECK(channel_snr_to_sigma(power, 1.0) == doctest::Approx(power));
  CHECK(sigma_to_channel_snr(power, 0.0072) == doctest::Approx(10.0));
  CHECK(channel_snr_to_sigma(power,
                             std::numeric_limits<double>::infinity()) == 0.0);
  CHECK_THROWS_AS(channel_snr_to_sigma(0.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(channel_snr_to_sigma(power, 0.0), InvalidInputError);
}

TEST_CASE("draw_channel shape and pseudo-inverse") {
  Rng rng = make_rng(30);
  const RealStackedChannel channel = draw_channel(16, 8, rng);
  CHECK(channel.rows() == 32);
  CHECK(channel.cols() == 8);
  CHECK(max_abs(channel.pseudo_inverse() * channel.matrix() -
                Matrix::Identity(8, 8)) < 1e-8);
  CHECK(channel.condition_number() > 1.0);
  CHECK_THROWS_AS(draw_channel(4, 8, rng), ConfigError);
}

TEST_CASE("draw_channel entries have unit variance") {
  Rng rng = make_rng(31);
  double sum = 0.0;
  double sum_sq = 0.0;
  long count = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const RealStackedChannel channel = draw_channel(16, 8, rng);
    sum += channel.matrix().sum();
    sum_sq += channel.matrix().squaredNorm();
    count += channel.matrix().size();
  }
  const double mean = sum / count;
  const double variance = sum_sq / count - mean * mean;
  CHECK(std::abs(variance - 1.0) < 0.02);
}

TEST_CASE("inverse Gram moment matches the array-diversity factor") {
  Rng rng = make_rng(32);
  const int receive = 16;
  const int cols = 8;
  Matrix mean = Matrix::Zero(cols, cols);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    mean += draw_channel(receive, cols, rng).gram_inverse();
  }
  mean /= draws;
  const double expected = 1.0 / (2.0 * receive - cols - 1);  // 1/23
  for (int i = 0; i < cols; ++i) {
    CHECK(std::abs(mean(i, i) - expected) / expected < 0.05);
    for (int j = 0; j < i; ++j) {
      CHECK(std::abs(mean(i, j)) < 3.0 / std::sqrt(double(draws)));
    }
  }
}

TEST_CASE("transmit is exact without noise") {
  Rng rng = make_rng(33);
  const RealStackedChannel channel = draw_channel(6, 3, rng);
  const Matrix symbol = gaussian_matrix(3, 10, 1.0, rng);
  Rng noise_rng = make_rng(34);
  const ReceivedSymbol received = transmit(symbol, channel, 0.0, noise_rng);
  CHECK(received.matrix == channel.matrix() * symbol);
}

TEST_CASE("an identity-block channel copies the symbol") {
  Matrix stacked = Matrix::Zero(8, 3);
  stacked.topRows(3) = Matrix::Identity(3, 3);
  const RealStackedChannel channel{Matrix(stacked)};
  Rng rng = make_rng(35);
  const Matrix symbol = gaussian_matrix(3, 7, 1.0, rng);
  const ReceivedSymbol received = transmit(symbol, channel, 0.0, rng);
  CHECK(received.matrix.topRows(3) == symbol);
  CHECK(max_abs(received.matrix.bottomRows(5)) == 0.0);
}

TEST_CASE("receiver noise has the requested variance") {
  Rng rng = make_rng(36);
  const RealStackedChannel channel = draw_channel(16, 8, rng);
  const Matrix symbol = gaussian_matrix(8, 50, 1.0, rng);
  const double sigma_c_sq = 0.3;

  double sum_sq = 0.0;
  long count = 0;
  for (int rep = 0; rep < 80; ++rep) {
    const ReceivedSymbol received =
        transmit(symbol, channel, sigma_c_sq, rng);
    const Matrix noise = received.matrix - channel.matrix() * symbol;
    sum_sq += noise.squaredNorm();
    count += noise.size();
  }
  CHECK(std::abs(sum_sq / count - sigma_c_sq) / sigma_c_sq < 0.02);
}

TEST_CASE("stacked model agrees with the split complex model") {
  // Same underlying draws, two algebraic routes; they agree to rounding.
  const int receive = 5;
  const int cols = 3;
  const int width = 12;
  const double sigma_c_sq = 0.25;

  Rng chan_a = make_rng(37);
  Rng chan_b = make_rng(37);
  Rng noise_a = make_rng(38);
  Rng noise_b = make_rng(38);
  Rng sym_rng = make_rng(39);
  const Matrix symbol = gaussian_matrix(cols, width, 1.0, sym_rng);

  const RealStackedChannel channel = draw_channel(receive, cols, chan_a);
  const ReceivedSymbol received =
      transmit(symbol, channel, sigma_c_sq, noise_a);

  // Complex route, mirroring the generator's draw order.
  const Matrix h_re = gaussian_matrix(receive, cols, 0.5, chan_b);
  const Matrix h_im = gaussian_matrix(receive, cols, 0.5, chan_b);
  const Matrix w_re = gaussian_matrix(receive, width, sigma_c_sq / 2, noise_b);
  const Matrix w_im = gaussian_matrix(receive, width, sigma_c_sq / 2, noise_b);
  Eigen::MatrixXcd h(receive, cols);
  h.real() = h_re;
  h.imag() = h_im;
  Eigen::MatrixXcd w(receive, width);
  w.real() = w_re;
  w.imag() = w_im;
  const Eigen::MatrixXcd y = h * symbol.cast<std::complex<double>>() + w;

  Matrix stacked(2 * receive, width);
  stacked.topRows(receive) = std::sqrt(2.0) * y.real();
  stacked.bottomRows(receive) = std::sqrt(2.0) * y.imag();

  CHECK(max_abs(stacked - received.matrix) < 1e-13);
}

TEST_CASE("received power reflects the array gain") {
  Rng rng = make_rng(40);
  const int receive = 16;
  const Matrix symbol = gaussian_matrix(8, 20, 1.0, rng);
  double sum = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const RealStackedChannel channel = draw_channel(receive, 8, rng);
    sum += (channel.matrix() * symbol).squaredNorm();
  }
  const double expected = 2.0 * receive * symbol.squaredNorm();
  CHECK(std::abs(sum / draws - expected) / expected < 0.02);
}

TEST_CASE("antenna mapping basics") {
  Rng rng = make_rng(41);
  CHECK(draw_antenna_mapping(4, 4, rng) == Matrix::Identity(4, 4));

  const Matrix mapping = draw_antenna_mapping(7, 4, rng);
  CHECK(mapping.rows() == 7);
  CHECK(mapping.cols() == 4);
  const Matrix symbol = gaussian_matrix(4, 9, 1.0, rng);
  CHECK((mapping * symbol).norm() == doctest::Approx(symbol.norm()));
  CHECK_THROWS_AS(draw_antenna_mapping(3, 4, rng), DimensionError);
}

TEST_CASE("mapped transmission keeps the effective channel isotropic") {
  Rng rng = make_rng(42);
  const int receive = 8;
  const int transmit_antennas = 12;
  const int m = 6;
  double sum_sq = 0.0;
  long count = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const RealStackedChannel channel =
        draw_channel(receive, transmit_antennas, rng);
    const Matrix mapping = draw_antenna_mapping(transmit_antennas, m, rng);
    const Matrix effective = channel.matrix() * mapping;
    sum_sq += effective.squaredNorm();
    count += effective.size();
  }
  CHECK(std::abs(sum_sq / count - 1.0) < 0.03);
}

TEST_CASE("single-block partition equals plain transmission") {
  Rng rng = make_rng(43);
  const RealStackedChannel channel = draw_channel(6, 4, rng);
  const Matrix symbol = gaussian_matrix(4, 11, 1.0, rng);

  Rng noise_a = make_rng(44);
  Rng noise_b = make_rng(44);
  const ReceivedSymbol direct = transmit(symbol, channel, 0.1, noise_a);
  const ReceivedSymbol split =
      partition_transmit(symbol, {channel}, 0.1, noise_b);
  CHECK(split.matrix == direct.matrix);
  CHECK(split.channel.matrix() == direct.channel.matrix());
}

TEST_CASE("two-block partition inverts exactly without noise") {
  Rng rng = make_rng(45);
  const int m = 8;
  const int transmit_antennas = 4;
  const Matrix symbol = gaussian_matrix(m, 14, 1.0, rng);
  const std::vector<RealStackedChannel> blocks = {
      draw_channel(6, transmit_antennas, rng),
      draw_channel(6, transmit_antennas, rng)};

  Rng noise_rng = make_rng(46);
  const ReceivedSymbol received =
      partition_transmit(symbol, blocks, 0.0, noise_rng);
  CHECK(received.matrix.rows() == 24);
  CHECK(received.channel.cols() == m);
  CHECK(max_abs(received.channel.pseudo_inverse() * received.matrix -
                symbol) < 1e-8);

  // Block-diagonal effective channel: off-blocks vanish.
  CHECK(max_abs(received.channel.matrix().block(0, 4, 12, 4)) == 0.0);
  CHECK(max_abs(received.channel.matrix().block(12, 0, 12, 4)) == 0.0);
}

TEST_CASE("ragged partition pads and drops the padded rows") {
  Rng rng = make_rng(47);
  const int m = 5;
  const int transmit_antennas = 2;
  const Matrix symbol = gaussian_matrix(m, 9, 1.0, rng);
  std::vector<RealStackedChannel> blocks;
  for (int b = 0; b < 3; ++b) blocks.push_back(draw_channel(4, 2, rng));

  Rng noise_rng = make_rng(48);
  const ReceivedSymbol received =
      partition_transmit(symbol, blocks, 0.0, noise_rng);
  CHECK(received.channel.cols() == m);
  CHECK(received.matrix.rows() == 24);
  CHECK(max_abs(received.channel.pseudo_inverse() * received.matrix -
                symbol) < 1e-8);

  CHECK_THROWS_AS(
      partition_transmit(symbol, {blocks[0], blocks[1]}, 0.0, noise_rng),
      Error);
}
