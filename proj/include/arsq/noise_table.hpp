#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace arsq {

inline constexpr std::size_t kDefaultNoiseTableLen = std::size_t(1) << 22;

// Shared table of i.i.d. standard normal samples. Every perturbation
// direction is a contiguous row-major slice of it, so workers only
// exchange offsets. Entry i is a pure function of (seed, i), which keeps
// the parallel fill bit-identical to the serial one.
class NoiseTable {
 public:
  NoiseTable() = default;

  static NoiseTable generate(std::uint64_t seed, std::size_t length,
                             int threads = 1);
  static NoiseTable generate_serial(std::uint64_t seed, std::size_t length);

  double operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<double>& entries() const { return entries_; }

  // Binary file: 8-byte magic "ARSNOISE", little-endian u64 entry count,
  // then entries as little-endian IEEE-754 doubles.
  void save(const std::string& path) const;
  static NoiseTable load(const std::string& path);

 private:
  std::vector<double> entries_;
};

}  // namespace arsq
