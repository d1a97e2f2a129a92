#include "arsq/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "arsq/config_io.hpp"
#include "arsq/csv_io.hpp"
#include "arsq/rollout_batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace arsq {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double tail_mean(const std::vector<double>& v, std::size_t window) {
  const std::size_t n = std::min(window, v.size());
  double sum = 0.0;
  for (std::size_t i = v.size() - n; i < v.size(); ++i) sum += v[i];
  return sum / static_cast<double>(n);
}

}  // namespace

void RunConfig::validate() const {
  if (master_seed >= 1000)
    throw std::invalid_argument("RunConfig: master_seed must be in [0, 1000)");
  hyperparams.validate();
  task.validate();
  plant.validate();
  if (!(std::isfinite(action_scale) && action_scale >= 0.0))
    throw std::invalid_argument("RunConfig: bad action_scale");
  if (eval_every < 1)
    throw std::invalid_argument("RunConfig: eval_every must be >= 1");
  if (noise_table_len < std::size_t(kActionDim) * kFeatureDim)
    throw std::invalid_argument("RunConfig: noise table shorter than one direction");
  if (out_dir.empty()) throw std::invalid_argument("RunConfig: empty out_dir");
}

std::uint64_t noise_table_seed(std::uint64_t master_seed) {
  return derive_seed(master_seed, 1);
}

std::uint64_t direction_stream_seed(std::uint64_t master_seed, int iteration) {
  return derive_seed(derive_seed(master_seed, 2),
                     static_cast<std::uint64_t>(iteration));
}

RotorCommand action_to_command(const Eigen::VectorXd& action,
                               double action_scale,
                               const PlantParams& params) {
  if (action.size() != kActionDim)
    throw std::invalid_argument("action_to_command: action dimension mismatch");
  const double s_hover = hover_speed(params);
  RotorCommand cmd;
  for (int i = 0; i < kActionDim; ++i)
    cmd.speeds[i] = std::clamp(s_hover + action_scale * action[i],
                               params.rotor_min, params.rotor_max);
  return cmd;
}

Eigen::VectorXd feature_vector(const QuadState& state,
                               const Eigen::Vector3d& target) {
  Eigen::VectorXd x(kFeatureDim);
  x.segment<3>(0) = state.position - target;
  x.segment<3>(3) = state.velocity;
  x.segment<3>(6) = state.euler;
  x.segment<3>(9) = state.body_rates;
  return x;
}

RolloutResult rollout(const PolicySpec& policy, const RunConfig& config) {
  if (policy.m == nullptr || policy.stats == nullptr)
    throw std::invalid_argument("rollout: incomplete policy spec");

  RolloutResult out;
  out.stats = NormalizerStats(kFeatureDim);
  Episode ep = reset(config.task);

  const int max_len = config.hyperparams.episode_length;
  for (int step = 0; step < max_len && !ep.done(); ++step) {
    const Eigen::VectorXd x = feature_vector(ep.quad, config.task.target);
    if (policy.collect_stats) normalizer_observe(out.stats, x);
    const Eigen::VectorXd action = policy_action(
        *policy.m, policy.delta, policy.sign, policy.noise_std, *policy.stats, x);
    const RotorCommand cmd =
        action_to_command(action, config.action_scale, config.plant);
    out.trace.states.push_back(ep.quad);
    out.trace.commands.push_back(cmd);
    const StepResult sr = env_step(ep, cmd, config.task, config.plant);
    out.trace.rewards.push_back(sr.reward);
    out.total_reward += sr.reward;
  }
  out.trace.total_reward = out.total_reward;
  out.trace.done_reason =
      ep.done_reason ? ep.done_reason : std::optional(DoneReason::StepLimit);
  return out;
}

TrainResult train(const RunConfig& config, int threads) {
  config.validate();
  const int nthreads = resolve_threads(threads);

  std::filesystem::create_directories(config.out_dir);
  const std::string out = config.out_dir + "/";
  save_run_config(out + "config.json", config);

  const NoiseTable noise = NoiseTable::generate(
      noise_table_seed(config.master_seed), config.noise_table_len, nthreads);
  if (config.save_noise) noise.save(out + "noise.bin");

  TrainResult result;
  result.policy = PolicyMatrix::zeros(kActionDim, kFeatureDim);
  result.stats = NormalizerStats(kFeatureDim);

  const ArsHyperparams& hp = config.hyperparams;
  std::vector<std::vector<double>> reward_rows;
  std::vector<std::vector<double>> log_rows;
  std::vector<double> eval_history;
  int eval_count = 0;

  for (int iter = 1; iter <= hp.num_iterations; ++iter) {
    const FrozenNormalizer snapshot = freeze(result.stats);
    SplitMix64 dir_rng(direction_stream_seed(config.master_seed, iter));
    DirectionBatch batch = sample_directions(noise, dir_rng,
                                             hp.num_directions, kActionDim,
                                             kFeatureDim);

    const std::vector<RolloutResult> rollouts =
        nthreads > 1
            ? run_rollout_batch_parallel(result.policy.m, batch, hp.noise_std,
                                         snapshot, config, nthreads)
            : run_rollout_batch_serial(result.policy.m, batch, hp.noise_std,
                                       snapshot, config);

    for (int k = 0; k < hp.num_directions; ++k) {
      batch.rewards_plus[k] = rollouts[2 * k].total_reward;
      batch.rewards_minus[k] = rollouts[2 * k + 1].total_reward;
    }
    // Merge order is fixed (ascending direction, + before -) so the
    // result does not depend on rollout scheduling.
    for (int k = 0; k < hp.num_directions; ++k) {
      normalizer_merge(result.stats, rollouts[2 * k].stats);
      normalizer_merge(result.stats, rollouts[2 * k + 1].stats);
    }

    const std::vector<DirectionReward> top =
        select_top(batch, hp.top_directions);
    const double sigma = retained_reward_std(top);
    Eigen::MatrixXd next = ars_update(result.policy.m, batch, top, hp.step_size);
    const double update_norm = (next - result.policy.m).norm();
    result.policy.m = std::move(next);
    result.policy.iteration = iter;

    IterationRecord rec;
    rec.iteration = iter;
    rec.sigma_reward = sigma;
    rec.update_norm = update_norm;
    for (int k = 0; k < hp.num_directions; ++k) {
      rec.directions.push_back({batch.noise_offsets[k], batch.rewards_plus[k],
                                batch.rewards_minus[k]});
      log_rows.push_back({static_cast<double>(iter), static_cast<double>(k),
                          static_cast<double>(batch.noise_offsets[k]),
                          batch.rewards_plus[k], batch.rewards_minus[k]});
    }

    if (iter % config.eval_every == 0) {
      const FrozenNormalizer eval_stats = freeze(result.stats);
      PolicySpec spec;
      spec.m = &result.policy.m;
      spec.sign = 0;
      spec.noise_std = hp.noise_std;
      spec.stats = &eval_stats;
      spec.collect_stats = false;
      RolloutResult eval = rollout(spec, config);

      rec.eval_reward = eval.total_reward;
      eval_count += 1;
      eval_history.push_back(eval.total_reward);
      reward_rows.push_back({static_cast<double>(iter),
                             static_cast<double>(eval_count),
                             eval.total_reward, tail_mean(eval_history, 10),
                             sigma, update_norm});
      if (!result.best_eval_reward ||
          eval.total_reward > *result.best_eval_reward) {
        result.best_eval_reward = eval.total_reward;
        result.best_eval_trace = std::move(eval.trace);
      }
      result.final_eval_reward = eval.total_reward;
    }
    result.records.push_back(std::move(rec));
  }

  write_csv(out + "rewards.csv", kRewardsColumns, reward_rows);
  write_csv(out + "train_log.csv",
            {"iteration", "direction", "offset", "reward_plus", "reward_minus"},
            log_rows);
  write_trace_csv(out + "best_trace.csv", result.best_eval_trace);
  save_policy(out + "final_policy.json", {result.policy, freeze(result.stats)});
  return result;
}

std::vector<SweepEntry> seed_sweep(const RunConfig& base, int num_seeds,
                                   std::uint64_t sweep_seed,
                                   const std::string& out_root, int threads) {
  if (num_seeds < 1)
    throw std::invalid_argument("seed_sweep: num_seeds must be >= 1");
  if (num_seeds > 1000)
    throw std::invalid_argument(
        "seed_sweep: only 1000 distinct seeds exist in [0, 1000)");

  std::vector<int> pool(1000);
  std::iota(pool.begin(), pool.end(), 0);
  SplitMix64 rng(derive_seed(sweep_seed, 3));

  std::filesystem::create_directories(out_root);
  std::vector<SweepEntry> entries;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < num_seeds; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.next_below(1000 - i));
    std::swap(pool[i], pool[j]);
    const std::uint64_t seed = static_cast<std::uint64_t>(pool[i]);

    RunConfig cfg = base;
    cfg.master_seed = seed;
    cfg.out_dir = out_root + "/seed_" + std::to_string(seed);
    const TrainResult tr = train(cfg, threads);

    SweepEntry e;
    e.seed = seed;
    e.final_eval_reward = tr.final_eval_reward.value_or(0.0);
    e.best_eval_reward = tr.best_eval_reward.value_or(0.0);
    entries.push_back(e);
    rows.push_back({static_cast<double>(seed), e.final_eval_reward,
                    e.best_eval_reward});
  }
  write_csv(out_root + "/sweep_summary.csv",
            {"seed", "final_eval_reward", "best_eval_reward"}, rows);
  return entries;
}

}  // namespace arsq
