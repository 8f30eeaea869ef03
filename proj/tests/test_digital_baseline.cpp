#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <grasspca/bounds.hpp>
#include <grasspca/channel.hpp>
#include <grasspca/csv.hpp>
#include <grasspca/digital_baseline.hpp>

#include "test_util.hpp"

using namespace grasspca;
using grasspca::testing::make_rng;

TEST_CASE("payload accounting") {
  CHECK(payload_bits(8, 200, 16) == 25600);
  CHECK(payload_bits(8, 200, 8) == 12800);
  CHECK(payload_bits(1, 1, 16) == 16);
  CHECK_THROWS_AS(payload_bits(0, 10, 16), InvalidInputError);
}

TEST_CASE("fixed scheme rate and feasibility gate") {
  DigitalScheme scheme;  // 16-bit, rate 1/2, 16-QAM, 6 dB gap

  SUBCASE("full constellation at high SNR") {
    const FixedRateResult r =
        per_device_uses_fixed(scheme, 8, 200, 8, 16, db_to_linear(20.0));
    CHECK(r.bits_per_symbol == 4);
    CHECK(r.feasible);
    CHECK(r.uses_per_device == 1600);  // 25600 / (8 * 4 * 0.5)
  }

  SUBCASE("steps down when the gap rule rejects 16-QAM") {
    const FixedRateResult r =
        per_device_uses_fixed(scheme, 8, 200, 8, 16, db_to_linear(10.0));
    CHECK(r.bits_per_symbol == 2);
    CHECK(r.feasible);
    CHECK(r.uses_per_device == 3200);
  }

  SUBCASE("flags the BPSK fallback at very low SNR") {
    const FixedRateResult r =
        per_device_uses_fixed(scheme, 8, 200, 8, 16, db_to_linear(0.0));
    CHECK(r.bits_per_symbol == 1);
    CHECK_FALSE(r.feasible);
    CHECK(r.uses_per_device == 6400);
  }

  SUBCASE("256-QAM when configured and affordable") {
    scheme.qam_bits_per_symbol = 8;
    const FixedRateResult r =
        per_device_uses_fixed(scheme, 8, 200, 8, 16, db_to_linear(30.0));
    CHECK(r.bits_per_symbol == 8);
    CHECK(r.uses_per_device == 800);
  }

  CHECK_THROWS_AS(per_device_uses_fixed(scheme, 8, 200, 8, 3, 10.0),
                  ConfigError);
}

TEST_CASE("adaptive scheme saturates at the top constellation") {
  DigitalScheme scheme{DigitalKind::kAdaptiveEigenmode};
  Rng rng = make_rng(80);
  const AdaptiveRateResult r =
      per_device_uses_adaptive(scheme, 8, 200, 8, 16, 1e9, 50, rng);
  CHECK(r.mean_bits_per_use == doctest::Approx(0.5 * 8 * 8));
  CHECK(r.uses_per_device == 800);
}

TEST_CASE("adaptive rate improves with SNR") {
  DigitalScheme scheme{DigitalKind::kAdaptiveEigenmode};
  Rng rng_low = make_rng(81);
  Rng rng_high = make_rng(81);
  const AdaptiveRateResult low = per_device_uses_adaptive(
      scheme, 8, 200, 8, 16, db_to_linear(5.0), 400, rng_low);
  const AdaptiveRateResult high = per_device_uses_adaptive(
      scheme, 8, 200, 8, 16, db_to_linear(15.0), 400, rng_high);
  CHECK(high.mean_bits_per_use > low.mean_bits_per_use);
  CHECK(high.uses_per_device < low.uses_per_device);
}

TEST_CASE("adaptive beats fixed across the SNR grid") {
  DigitalScheme fixed;
  DigitalScheme adaptive{DigitalKind::kAdaptiveEigenmode};
  for (double snr_db : {5.0, 10.0, 20.0}) {
    Rng rng = make_rng(82);
    const FixedRateResult f = per_device_uses_fixed(
        fixed, 8, 200, 8, 16, db_to_linear(snr_db));
    const AdaptiveRateResult a = per_device_uses_adaptive(
        adaptive, 8, 200, 8, 16, db_to_linear(snr_db), 600, rng);
    INFO("snr_db = ", snr_db);
    CHECK(a.uses_per_device <= f.uses_per_device);
  }
}

TEST_CASE("latency curve grid shape and analog inversion") {
  LatencyConfig config;
  const double bound_at_1000 = coherent_bound(
      BoundInput{8, 200, 1000, 16, 0.004, 0.0072});
  const std::vector<double> targets = {bound_at_1000, bound_at_1000 / 2,
                                       bound_at_1000 / 5};

  const auto rows = latency_curve(targets, config);
  REQUIRE(rows.size() == 9);

  const LatencyResult& analog = rows[0];
  CHECK(analog.scheme == "analog");
  CHECK(analog.devices == 1000);
  CHECK(analog.uses_per_device == 200);
  CHECK(analog.total_uses == 200000);

  const LatencyResult& fixed = rows[1];
  CHECK(fixed.scheme == "digital-fixed");
  CHECK(fixed.devices == 928);  // ceil(12.288 / bound_at_1000)

  for (const auto& row : rows) {
    CHECK(row.feasible);
  }
}

TEST_CASE("latency ordering, scaling, and ratio constancy") {
  LatencyConfig config;
  const std::vector<double> targets = {1e-2, 5e-3, 2e-3};
  const auto rows = latency_curve(targets, config);
  REQUIRE(rows.size() == 9);

  std::vector<double> ratios;
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    const auto& analog = rows[i];
    const auto& fixed = rows[i + 1];
    const auto& adaptive = rows[i + 2];
    CHECK(analog.total_uses < adaptive.total_uses);
    CHECK(adaptive.total_uses < fixed.total_uses);
    CHECK(static_cast<double>(fixed.total_uses) / analog.total_uses >= 5.0);
    ratios.push_back(static_cast<double>(fixed.total_uses) /
                     analog.total_uses);
  }
  for (double ratio : ratios) {
    CHECK(std::abs(ratio - ratios.front()) / ratios.front() < 0.10);
  }

  // Both families scale as 1/target.
  const double slope =
      std::log(static_cast<double>(rows[6].total_uses) / rows[0].total_uses) /
      std::log(targets[2] / targets[0]);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("latency with partitioned analog transmission") {
  LatencyConfig config;
  config.transmit_antennas = 4;  // two blocks per symbol
  const auto rows = latency_curve({1e-2}, config);
  CHECK(rows[0].uses_per_device == 400);
  const double c = coherent_bound_partitioned(
      BoundInput{8, 200, 1, 16, 0.004, 0.0072}, 4);
  CHECK(rows[0].devices ==
        static_cast<long>(std::ceil(c / 1e-2 * (1.0 - 1e-9))));
}

TEST_CASE("latency honors an injected empirical device count") {
  LatencyConfig config;
  config.empirical_analog_devices = [](double) { return 42L; };
  const auto rows = latency_curve({1e-2}, config);
  CHECK(rows[0].devices == 42);
  CHECK(rows[0].notes == "empirical");
}

TEST_CASE("unreachable targets are flagged in-row") {
  LatencyConfig config;
  const auto rows = latency_curve({-1.0}, config);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK_FALSE(row.feasible);
    CHECK(row.notes == "unreachable target");
  }
}

TEST_CASE("latency rows survive a CSV round trip") {
  LatencyConfig config;
  const auto rows = latency_curve({1e-2, 5e-3}, config);
  const auto parsed = parse_latency_csv(to_csv(rows));
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].target_mssd == rows[i].target_mssd);
    CHECK(parsed[i].scheme == rows[i].scheme);
    CHECK(parsed[i].devices == rows[i].devices);
    CHECK(parsed[i].total_uses == rows[i].total_uses);
    CHECK(parsed[i].notes == rows[i].notes);
  }
}
