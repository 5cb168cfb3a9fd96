#pragma once

#include <cstdint>
#include <string_view>

namespace fairq {

inline constexpr std::string_view kRngAlgorithm = "splitmix64";

// Stafford variant 13 finalizer used by SplitMix64. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the k-th output is mix64(seed + k * golden_gamma).
// Satisfies UniformRandomBitGenerator so it can drive <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept : counter_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    counter_ += kGoldenGamma;
    return mix64(counter_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n), Lemire's multiply-shift with rejection.
  std::uint32_t below(std::uint32_t n) noexcept {
    std::uint64_t m = ((*this)() >> 32) * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
      while (low < threshold) {
        m = ((*this)() >> 32) * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t counter_;
};

// Per-realization seed:
//   mix64(mix64(master) XOR ((grid_index << 32) | realization)).
// Injective in (grid_index, realization) for both below 2^32, because mix64
// is a bijection.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t grid_index,
                                    std::uint64_t realization) noexcept {
  const std::uint64_t key = (grid_index << 32) | (realization & 0xffffffffULL);
  return mix64(mix64(master) ^ key);
}

}  // namespace fairq
