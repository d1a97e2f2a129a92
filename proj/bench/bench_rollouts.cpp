// Timing harness comparing the serial reference kernels against the
// OpenMP ones and checking that both produce identical bits.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "arsq/noise_table.hpp"
#include "arsq/rollout_batch.hpp"
#include "arsq/trainer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_bits(const std::vector<arsq::RolloutResult>& a,
               const std::vector<arsq::RolloutResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i].total_reward, &b[i].total_reward, 8) != 0)
      return false;
    if (a[i].trace.size() != b[i].trace.size()) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 0;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  if (argc > 1) threads = std::atoi(argv[1]);
  if (threads < 2) threads = 2;

  arsq::RunConfig config;
  config.hyperparams.num_directions = 32;
  config.out_dir = "bench_run";

  std::printf("noise table, %zu entries\n", config.noise_table_len);
  auto t0 = Clock::now();
  const arsq::NoiseTable serial_table =
      arsq::NoiseTable::generate_serial(arsq::noise_table_seed(42),
                                        config.noise_table_len);
  const double t_table_serial = seconds_since(t0);
  t0 = Clock::now();
  const arsq::NoiseTable parallel_table = arsq::NoiseTable::generate(
      arsq::noise_table_seed(42), config.noise_table_len, threads);
  const double t_table_parallel = seconds_since(t0);
  const bool table_match =
      serial_table.entries() == parallel_table.entries();
  std::printf("  serial   %.3f s\n  %d threads %.3f s  (x%.2f, identical: %s)\n",
              t_table_serial, threads, t_table_parallel,
              t_table_serial / t_table_parallel, table_match ? "yes" : "NO");

  arsq::SplitMix64 rng(arsq::direction_stream_seed(42, 1));
  const arsq::DirectionBatch batch = arsq::sample_directions(
      serial_table, rng, config.hyperparams.num_directions, arsq::kActionDim,
      arsq::kFeatureDim);
  const Eigen::MatrixXd policy =
      Eigen::MatrixXd::Zero(arsq::kActionDim, arsq::kFeatureDim);
  const arsq::FrozenNormalizer stats =
      arsq::freeze(arsq::NormalizerStats(arsq::kFeatureDim));

  std::printf("rollout batch, %d episodes\n",
              2 * config.hyperparams.num_directions);
  t0 = Clock::now();
  const auto serial_results = arsq::run_rollout_batch_serial(
      policy, batch, config.hyperparams.noise_std, stats, config);
  const double t_roll_serial = seconds_since(t0);
  t0 = Clock::now();
  const auto parallel_results = arsq::run_rollout_batch_parallel(
      policy, batch, config.hyperparams.noise_std, stats, config, threads);
  const double t_roll_parallel = seconds_since(t0);
  const bool roll_match = same_bits(serial_results, parallel_results);
  std::printf("  serial   %.3f s\n  %d threads %.3f s  (x%.2f, identical: %s)\n",
              t_roll_serial, threads, t_roll_parallel,
              t_roll_serial / t_roll_parallel, roll_match ? "yes" : "NO");

  return table_match && roll_match ? 0 : 1;
}
