#pragma once
// rng.hpp — deterministic hash-based randomness.
//
// Every random quantity in the toolkit is a pure function of a 64-bit seed
// and a stream tag, so trials are reproducible and safe to evaluate in any
// order (or from any worker thread). Per-edge uniforms come from a single
// hash of (seed, edge key); sequential generators (walks) use a splitmix64
// counter stream.

#include <cstdint>

namespace perc {

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix2(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ mix64(b + 0x6a09e667f3bcc909ULL));
}

constexpr std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix2(mix2(a, b), c);
}

// Disjoint stream tags. Edge states and walk steps must never share a
// stream: the product measures P' x P_p require independence.
namespace stream {
inline constexpr std::uint64_t edge = 0x45dcbf3a8f1c2e07ULL;
inline constexpr std::uint64_t walk = 0x21f0aa5c9d83b611ULL;
inline constexpr std::uint64_t subgraph = 0x9b4ef20d37c155a3ULL;
}  // namespace stream

// Uniform in [0,1) from a hash value (53 mantissa bits).
constexpr double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Sequential generator for walk steps. Deterministic given the seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % n;
  }

  double next_unit() noexcept { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

// Seed for trial i derived from a master seed; independent across trials.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix2(master, 0xa5a5a5a500000000ULL + index);
}

}  // namespace perc
