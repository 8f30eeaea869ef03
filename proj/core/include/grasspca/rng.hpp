#pragma once

#include <cmath>
#include <cstdint>

namespace grasspca {

/// What a derived random stream is used for. Each role gets its own stream
/// so ablations (e.g. freeze the channel, redraw the noise) stay decoupled.
enum class StreamRole : std::uint64_t {
  kTruth = 1,
  kData = 2,
  kChannel = 3,
  kNoise = 4,
  kMapping = 5,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Derives a stream seed from (master seed, trial, device, block, role).
/// Any execution order or thread assignment reproduces identical streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                 std::uint64_t device, std::uint64_t block,
                                 StreamRole role) {
  std::uint64_t s = master;
  std::uint64_t h = detail::splitmix64(s);
  s = h ^ (trial + 0x1000000000000001ull);
  h = detail::splitmix64(s);
  s = h ^ (device + 0x2000000000000003ull);
  h = detail::splitmix64(s);
  s = h ^ (block + 0x4000000000000005ull);
  h = detail::splitmix64(s);
  s = h ^ static_cast<std::uint64_t>(role);
  return detail::splitmix64(s);
}

namespace detail {

/// 128-layer ziggurat tables for the standard normal (Marsaglia-Tsang).
struct ZigguratTables {
  std::uint32_t threshold[128];
  double scale[128];
  double density[128];

  ZigguratTables() {
    constexpr double m1 = 2147483648.0;  // 2^31
    double dn = 3.442619855899;
    double tn = dn;
    const double vn = 9.91256303526217e-3;

    const double q = vn / std::exp(-0.5 * dn * dn);
    threshold[0] = static_cast<std::uint32_t>((dn / q) * m1);
    threshold[1] = 0;
    scale[0] = q / m1;
    scale[127] = dn / m1;
    density[0] = 1.0;
    density[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
      threshold[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
      tn = dn;
      density[i] = std::exp(-0.5 * dn * dn);
      scale[i] = dn / m1;
    }
  }
};

inline const ZigguratTables& ziggurat() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace detail

/// xoshiro256++ stream with ziggurat Gaussian sampling.
///
/// The generator is pinned down to the bit level so that results are
/// reproducible across platforms and standard-library versions (the
/// distributions in <random> are not portable).
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = detail::splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in (0, 1]; never returns 0 so log() is safe.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via the 128-layer ziggurat; one u64 per sample in
  /// the common case.
  double next_gaussian() {
    const auto& tables = detail::ziggurat();
    while (true) {
      const std::uint64_t word = next_u64();
      const int layer = static_cast<int>(word & 127);
      // Signed 31-bit magnitude plus sign from the high bits.
      const auto raw =
          static_cast<std::int32_t>(static_cast<std::uint32_t>(word >> 32));
      const std::int64_t signed_mag = raw;
      const std::uint64_t magnitude =
          static_cast<std::uint64_t>(signed_mag < 0 ? -signed_mag : signed_mag);
      if (magnitude < tables.threshold[layer]) {
        return static_cast<double>(signed_mag) * tables.scale[layer];
      }
      if (layer == 0) {
        // Tail beyond +-r, by Marsaglia's exponential trick.
        constexpr double r = 3.442619855899;
        double x;
        double y;
        do {
          x = -std::log(next_uniform()) / r;
          y = -std::log(next_uniform());
        } while (y + y < x * x);
        return signed_mag > 0 ? r + x : -(r + x);
      }
      const double x = static_cast<double>(signed_mag) * tables.scale[layer];
      const double reject = tables.density[layer] +
                            next_uniform() * (tables.density[layer - 1] -
                                              tables.density[layer]);
      if (reject < std::exp(-0.5 * x * x)) {
        return x;
      }
    }
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace grasspca
