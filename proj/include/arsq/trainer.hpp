#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arsq/ars_core.hpp"
#include "arsq/task_env.hpp"

namespace arsq {

inline constexpr int kActionDim = 4;
inline constexpr int kFeatureDim = 12;

// Everything that determines a training run. Worker-thread count is
// deliberately not part of it: artifacts are byte-identical for any
// thread count.
struct RunConfig {
  std::uint64_t master_seed = 42;  // protocol draws from [0, 1000)
  ArsHyperparams hyperparams;
  TaskConfig task;
  PlantParams plant;
  double action_scale = 100.0;  // rev/s per action unit
  int eval_every = 1;           // iterations between evaluation episodes
  std::size_t noise_table_len = kDefaultNoiseTableLen;
  bool save_noise = false;
  std::string out_dir = "run";

  void validate() const;
};

// Per-step log of one episode, the tracer.
struct EpisodeTrace {
  std::vector<QuadState> states;     // state the action was computed from
  std::vector<RotorCommand> commands;
  std::vector<double> rewards;       // reward received for the step
  double total_reward = 0.0;
  std::optional<DoneReason> done_reason;

  std::size_t size() const { return states.size(); }
};

struct DirectionOutcome {
  std::uint64_t offset = 0;
  double reward_plus = 0.0;
  double reward_minus = 0.0;
};

struct IterationRecord {
  int iteration = 0;  // 1-based
  std::vector<DirectionOutcome> directions;
  double sigma_reward = 0.0;
  double update_norm = 0.0;  // Frobenius norm of the policy change
  std::optional<double> eval_reward;
};

// s_i = clamp(s_hover + action_scale * a_i, rotor_min, rotor_max); the
// zero action is open-loop hover.
RotorCommand action_to_command(const Eigen::VectorXd& action,
                               double action_scale, const PlantParams& params);

// 12-dim policy input: position error, velocity, Euler angles, body rates.
Eigen::VectorXd feature_vector(const QuadState& state,
                               const Eigen::Vector3d& target);

struct PolicySpec {
  const Eigen::MatrixXd* m = nullptr;
  const Eigen::MatrixXd* delta = nullptr;  // null for the evaluation policy
  int sign = 0;                            // +1, -1, or 0
  double noise_std = 0.0;
  const FrozenNormalizer* stats = nullptr;
  bool collect_stats = true;  // evaluation episodes never feed the normalizer
};

struct RolloutResult {
  double total_reward = 0.0;
  EpisodeTrace trace;
  NormalizerStats stats;  // feature vectors visited, when collected
};

// One episode from reset to done or the episode-length bound.
RolloutResult rollout(const PolicySpec& policy, const RunConfig& config);

struct TrainResult {
  PolicyMatrix policy;
  NormalizerStats stats;
  std::vector<IterationRecord> records;
  EpisodeTrace best_eval_trace;
  std::optional<double> best_eval_reward;
  std::optional<double> final_eval_reward;
};

// Full training loop; writes config.json, rewards.csv, train_log.csv,
// best_trace.csv, final_policy.json (and noise.bin when requested) into
// config.out_dir. threads <= 1 runs the serial reference path, larger
// values run the OpenMP batch with that many workers; 0 picks the
// hardware default.
TrainResult train(const RunConfig& config, int threads = 0);

struct SweepEntry {
  std::uint64_t seed = 0;
  double final_eval_reward = 0.0;
  double best_eval_reward = 0.0;
};

// Repeats train for num_seeds distinct seeds drawn without replacement
// from [0, 1000); per-seed artifacts land in <out_root>/seed_<seed>/ and
// a sweep_summary.csv in out_root. Throws std::invalid_argument when
// num_seeds exceeds the interval.
std::vector<SweepEntry> seed_sweep(const RunConfig& base, int num_seeds,
                                   std::uint64_t sweep_seed,
                                   const std::string& out_root,
                                   int threads = 0);

// Seed of the shared noise table for a run.
std::uint64_t noise_table_seed(std::uint64_t master_seed);
// Seed of the offset stream for one iteration (1-based).
std::uint64_t direction_stream_seed(std::uint64_t master_seed, int iteration);

}  // namespace arsq
