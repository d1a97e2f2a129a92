#include "arsq/rollout_batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace arsq {

namespace {

PolicySpec task_spec(const Eigen::MatrixXd& policy, const DirectionBatch& batch,
                     double noise_std, const FrozenNormalizer& stats,
                     int task_index) {
  PolicySpec spec;
  spec.m = &policy;
  spec.delta = &batch.deltas[task_index / 2];
  spec.sign = (task_index % 2 == 0) ? +1 : -1;
  spec.noise_std = noise_std;
  spec.stats = &stats;
  spec.collect_stats = true;
  return spec;
}

}  // namespace

std::vector<RolloutResult> run_rollout_batch_serial(
    const Eigen::MatrixXd& policy, const DirectionBatch& batch,
    double noise_std, const FrozenNormalizer& stats, const RunConfig& config) {
  const int tasks = 2 * batch.size();
  std::vector<RolloutResult> results(tasks);
  for (int t = 0; t < tasks; ++t)
    results[t] = rollout(task_spec(policy, batch, noise_std, stats, t), config);
  return results;
}

std::vector<RolloutResult> run_rollout_batch_parallel(
    const Eigen::MatrixXd& policy, const DirectionBatch& batch,
    double noise_std, const FrozenNormalizer& stats, const RunConfig& config,
    int threads) {
#ifdef _OPENMP
  const int tasks = 2 * batch.size();
  std::vector<RolloutResult> results(tasks);
  // Episodes vary in length (crashes terminate early), so claim tasks
  // one at a time. Each result lands in its own slot.
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int t = 0; t < tasks; ++t)
    results[t] = rollout(task_spec(policy, batch, noise_std, stats, t), config);
  return results;
#else
  (void)threads;
  return run_rollout_batch_serial(policy, batch, noise_std, stats, config);
#endif
}

}  // namespace arsq
