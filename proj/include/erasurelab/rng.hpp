#pragma once

// Reproducible random streams.
//
// Engine: xoshiro256** (Blackman & Vigna), state filled from four successive
// SplitMix64 outputs of the 64-bit seed. Stream derivation for parallel
// trials is counter based:
//
//   stream_seed(master, i) = splitmix64(master ^ splitmix64(i))
//
// where splitmix64(x) is the SplitMix64 output function applied to
// x + 0x9E3779B97F4A7C15. A trial's draws therefore depend only on
// (master, i), never on the worker that runs it. This scheme is part of the
// output contract; changing it changes every simulation result.

#include <cmath>
#include <cstdint>
#include <limits>

namespace erasurelab::rng {

/// SplitMix64 output function of x + golden gamma.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed = 0) noexcept { reseed(seed); }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      word = splitmix64(x);
      x += 0x9E3779B97F4A7C15ULL;
    }
    spare_valid_ = false;
    bits_left_ = 0;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    __uint128_t product = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Standard normal by the Marsaglia polar method; the second variate of
  /// each accepted pair is returned by the next call.
  double normal() noexcept {
    if (spare_valid_) {
      spare_valid_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    spare_valid_ = true;
    return u * factor;
  }

  /// +1 or -1 with probability 1/2 each, one bit of a 64-bit word per call
  /// (most significant bit first).
  double rademacher() noexcept {
    if (bits_left_ == 0) {
      bits_ = (*this)();
      bits_left_ = 64;
    }
    --bits_left_;
    const bool bit = (bits_ >> 63) != 0;
    bits_ <<= 1;
    return bit ? 1.0 : -1.0;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4]{};
  double spare_ = 0.0;
  bool spare_valid_ = false;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
};

}  // namespace erasurelab::rng
