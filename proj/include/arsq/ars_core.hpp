#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "arsq/noise_table.hpp"
#include "arsq/rng.hpp"

namespace arsq {

// Per-coordinate variance floor applied when whitening states.
inline constexpr double kVarianceFloor = 1e-8;
// Below this reward spread the update step is skipped.
inline constexpr double kSigmaRewardEps = 1e-8;

struct PolicyMatrix {
  Eigen::MatrixXd m;  // action dim x feature dim
  int iteration = 0;

  static PolicyMatrix zeros(int rows, int cols) {
    return {Eigen::MatrixXd::Zero(rows, cols), 0};
  }
};

// Snapshot of the normalizer taken at iteration start; all 2N policies of
// an iteration (and the evaluation policy) whiten states against the
// snapshot, not the live statistics.
struct FrozenNormalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;  // diagonal, before the floor
  std::int64_t count = 0;
};

// Welford running mean/variance, mergeable across rollouts.
struct NormalizerStats {
  std::int64_t count = 0;
  Eigen::VectorXd mean;
  Eigen::VectorXd m2;  // summed squared deviations

  NormalizerStats() = default;
  explicit NormalizerStats(int dim)
      : mean(Eigen::VectorXd::Zero(dim)), m2(Eigen::VectorXd::Zero(dim)) {}
  int dim() const { return static_cast<int>(mean.size()); }
};

// Single-pass Welford update.
void normalizer_observe(NormalizerStats& stats, const Eigen::VectorXd& x);

// Combines two partial statistics as if the streams were concatenated.
void normalizer_merge(NormalizerStats& into, const NormalizerStats& other);

FrozenNormalizer freeze(const NormalizerStats& stats);

// (x - mean) / sqrt(max(variance, floor)); identity before any
// observation.
Eigen::VectorXd normalize(const Eigen::VectorXd& x, const FrozenNormalizer& stats);
Eigen::VectorXd normalize(const Eigen::VectorXd& x, const NormalizerStats& stats);

// Action of the perturbed policy (m + sign * noise_std * delta) on the
// whitened state. sign 0 evaluates the unperturbed policy and ignores
// delta. Throws std::invalid_argument on dimension mismatch.
Eigen::VectorXd policy_action(const Eigen::MatrixXd& m,
                              const Eigen::MatrixXd* delta, int sign,
                              double noise_std, const FrozenNormalizer& stats,
                              const Eigen::VectorXd& x);

// One iteration's perturbation directions with their antithetic rewards.
struct DirectionBatch {
  std::vector<Eigen::MatrixXd> deltas;
  std::vector<std::uint64_t> noise_offsets;
  std::vector<double> rewards_plus;
  std::vector<double> rewards_minus;

  int size() const { return static_cast<int>(deltas.size()); }
};

// Draws num_directions offsets from rng and reads rows*cols contiguous
// table entries row-major per direction. Throws std::invalid_argument
// when the table is smaller than one direction.
DirectionBatch sample_directions(const NoiseTable& table, SplitMix64& rng,
                                 int num_directions, int rows, int cols);

struct DirectionReward {
  int index;  // position in the batch
  double reward_plus;
  double reward_minus;
};

// Directions sorted descending by max(r+, r-), ties broken by lower
// index; the first top_count are returned. Throws std::invalid_argument
// when top_count exceeds the batch size.
std::vector<DirectionReward> select_top(const DirectionBatch& batch,
                                        int top_count);

// Population standard deviation of the 2b retained rewards, accumulated
// in ascending direction-index order.
double retained_reward_std(const std::vector<DirectionReward>& top);

// M' = M + step_size / (b * sigma_R) * sum (r+ - r-) delta. The sum runs
// in ascending direction-index order regardless of the order of `top`, so
// the result is bit-identical under permutation. Skipped (M' = M) when
// sigma_R < kSigmaRewardEps.
Eigen::MatrixXd ars_update(const Eigen::MatrixXd& m,
                           const DirectionBatch& batch,
                           const std::vector<DirectionReward>& top,
                           double step_size);

struct ArsHyperparams {
  double step_size = 0.01;
  int num_directions = 16;
  double noise_std = 0.1;
  int top_directions = 4;
  int num_iterations = 200;
  int episode_length = 1000;

  void validate() const;
};

}  // namespace arsq
