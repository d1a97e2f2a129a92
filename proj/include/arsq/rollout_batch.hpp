#pragma once

#include <vector>

#include "arsq/trainer.hpp"

namespace arsq {

// One iteration's antithetic rollouts. Results are indexed
// [dir 0 +, dir 0 -, dir 1 +, dir 1 -, ...] so reductions downstream are
// independent of scheduling. The parallel kernel must match the serial
// reference bit for bit.
std::vector<RolloutResult> run_rollout_batch_serial(
    const Eigen::MatrixXd& policy, const DirectionBatch& batch,
    double noise_std, const FrozenNormalizer& stats, const RunConfig& config);

std::vector<RolloutResult> run_rollout_batch_parallel(
    const Eigen::MatrixXd& policy, const DirectionBatch& batch,
    double noise_std, const FrozenNormalizer& stats, const RunConfig& config,
    int threads);

}  // namespace arsq
