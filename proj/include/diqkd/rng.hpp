#pragma once

#include <cstdint>

namespace diqkd {

// All randomness in this project is drawn from SplitMix64 chains so that
// every result is reproducible bit-for-bit from a 64-bit seed, independently
// of platform and of how work is scheduled.
//
// Stream derivation: the state of the substream identified by
// (seed, tag, index) is
//
//     state0 = mix64(mix64(mix64(seed) ^ tag) ^ index)
//
// where mix64 is the SplitMix64 finalizer. Tags are fixed per subsystem (see
// stream_tag below); indices are round numbers, trial numbers, block numbers
// and the like. Two substreams with different (tag, index) never share state.

inline constexpr uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ull;

inline uint64_t mix64(uint64_t z) {
  z += kSplitMix64Gamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace stream_tag {
inline constexpr uint64_t protocol = 0x70726f746f636f6cull;  // per-round u,v,x,y
inline constexpr uint64_t device = 0x6465766963650000ull;    // per-round device outcomes
inline constexpr uint64_t ec_matrix = 0x65635f6d61747278ull; // parity-check construction
inline constexpr uint64_t ec_tag = 0x65635f7461670000ull;    // verification-tag hash seed
inline constexpr uint64_t ec_sample = 0x65635f73616d706cull; // disclosed-sample positions
inline constexpr uint64_t hash_seed = 0x686173685f736472ull; // privacy-amplification seed
inline constexpr uint64_t trial = 0x747269616c000000ull;     // per-trial seeds in batch runs
inline constexpr uint64_t generic = 0x67656e6572696300ull;
} // namespace stream_tag

class Prng {
public:
  explicit Prng(uint64_t state) : state_(state) {}

  // Substream for (seed, tag, index); see derivation note above.
  static Prng stream(uint64_t seed, uint64_t tag, uint64_t index) {
    return Prng(mix64(mix64(mix64(seed) ^ tag) ^ index));
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += kSplitMix64Gamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [0, n), unbiased by rejection.
  uint64_t below(uint64_t n) {
    uint64_t x, r;
    do {
      x = next_u64();
      r = x % n;
    } while (x - r > uint64_t(0) - n);
    return r;
  }

private:
  uint64_t state_;
};

} // namespace diqkd
