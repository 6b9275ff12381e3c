#pragma once

#include <cstdint>

namespace hitting {

// Counter-based substream: the state of stream i is a pure function of
// (master_seed, i), so a replicate set is reproducible under any scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : state_(mix(master_seed ^ mix(stream_index + 0x9e3779b97f4a7c15ull))) {}

  explicit RngStream(std::uint64_t seed) : RngStream(seed, 0) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on (0,1): 53-bit mantissa, zero excluded.
  double next_uniform() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace hitting
