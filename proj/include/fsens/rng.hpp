#pragma once

#include <cstdint>

#include "fsens/normal.hpp"

namespace fsens {

// splitmix64 output scrambler; a bijection on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed derivation; chained so (seed, a, b) triples that differ
// in any component land in unrelated streams.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                           std::uint64_t b = 0) {
  std::uint64_t s = mix64(seed + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (a + 0x9e3779b97f4a7c15ULL));
  return mix64(s ^ (b + 0x9e3779b97f4a7c15ULL));
}

// Counter-based stream keyed by (seed, tag, row). Rows can be generated in
// any order, or in parallel, with results identical to serial generation.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t tag, std::uint64_t row)
      : state_(derive_seed(seed, tag, row)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on the open interval (0,1); never returns an endpoint, so
  // inverse-CDF transforms stay finite.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() { return inverse_normal_cdf(next_uniform()); }

 private:
  std::uint64_t state_;
};

// Stream tags; one per sampling role so roles never collide on a row index.
namespace stream_tag {
inline constexpr std::uint64_t base_sample = 1;
inline constexpr std::uint64_t resample = 2;
inline constexpr std::uint64_t inner = 3;
}  // namespace stream_tag

}  // namespace fsens
