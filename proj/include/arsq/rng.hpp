#pragma once

#include <cstdint>

namespace arsq {

// SplitMix64 output at a given position of the stream. Random access keeps
// the parallel table-fill kernel bit-identical to the serial one.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child stream seed for (base, tag); used to key the noise table and the
// per-iteration offset streams off one master seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return splitmix64_at(base ^ 0xA3C59AC2F0E100D5ULL, tag);
}

// Sequential SplitMix64 stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next() { return splitmix64_at(seed_, index_++); }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); n must be nonzero.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_ = 0;
};

}  // namespace arsq
