#include "arsq/noise_table.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "arsq/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace arsq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr char kMagic[8] = {'A', 'R', 'S', 'N', 'O', 'I', 'S', 'E'};

// Box-Muller pair from two counter-indexed uniforms.
inline void normal_pair(std::uint64_t seed, std::uint64_t pair_index,
                        double& z0, double& z1) {
  // u1 in (0, 1] so the log is finite; u2 in [0, 1).
  const double u1 =
      static_cast<double>((splitmix64_at(seed, 2 * pair_index) >> 11) + 1) *
      0x1.0p-53;
  const double u2 =
      static_cast<double>(splitmix64_at(seed, 2 * pair_index + 1) >> 11) *
      0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  z0 = r * std::cos(kTwoPi * u2);
  z1 = r * std::sin(kTwoPi * u2);
}

void fill_range(std::vector<double>& entries, std::uint64_t seed,
                std::int64_t pair_begin, std::int64_t pair_end) {
  const std::size_t n = entries.size();
  for (std::int64_t p = pair_begin; p < pair_end; ++p) {
    double z0, z1;
    normal_pair(seed, static_cast<std::uint64_t>(p), z0, z1);
    const std::size_t i = 2 * static_cast<std::size_t>(p);
    entries[i] = z0;
    if (i + 1 < n) entries[i + 1] = z1;
  }
}

void write_u64_le(std::ofstream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t read_u64_le(std::ifstream& in) {
  std::array<unsigned char, 8> b;
  in.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

NoiseTable NoiseTable::generate_serial(std::uint64_t seed, std::size_t length) {
  NoiseTable table;
  table.entries_.resize(length);
  const std::int64_t pairs = static_cast<std::int64_t>((length + 1) / 2);
  fill_range(table.entries_, seed, 0, pairs);
  return table;
}

NoiseTable NoiseTable::generate(std::uint64_t seed, std::size_t length,
                                int threads) {
#ifdef _OPENMP
  if (threads > 1) {
    NoiseTable table;
    table.entries_.resize(length);
    const std::int64_t pairs = static_cast<std::int64_t>((length + 1) / 2);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t p = 0; p < pairs; ++p) {
      fill_range(table.entries_, seed, p, p + 1);
    }
    return table;
  }
#else
  (void)threads;
#endif
  return generate_serial(seed, length);
}

void NoiseTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("NoiseTable::save: cannot open " + path);
  out.write(kMagic, 8);
  write_u64_le(out, entries_.size());
  for (double v : entries_) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64_le(out, bits);
  }
  if (!out) throw std::runtime_error("NoiseTable::save: write failed");
}

NoiseTable NoiseTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("NoiseTable::load: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("NoiseTable::load: bad magic in " + path);
  const std::uint64_t count = read_u64_le(in);
  NoiseTable table;
  table.entries_.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t bits = read_u64_le(in);
    double v;
    std::memcpy(&v, &bits, 8);
    table.entries_[i] = v;
  }
  if (!in) throw std::runtime_error("NoiseTable::load: truncated file " + path);
  return table;
}

}  // namespace arsq
