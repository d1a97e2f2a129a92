#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <doctest.h>

#include "arsq/config_io.hpp"
#include "arsq/csv_io.hpp"
#include "arsq/rollout_batch.hpp"
#include "arsq/trainer.hpp"

using namespace arsq;

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunConfig desk_config(const std::string& out_dir) {
  RunConfig cfg;
  cfg.master_seed = 7;
  cfg.hyperparams.num_directions = 4;
  cfg.hyperparams.top_directions = 2;
  cfg.hyperparams.num_iterations = 3;
  cfg.noise_table_len = 1 << 14;
  cfg.out_dir = out_dir;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("tmp_trainer") / name) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all("tmp_trainer"); }
  std::string str(const std::string& sub = "") const {
    return (sub.empty() ? path : path / sub).string();
  }
};

}  // namespace

TEST_CASE("action_to_command") {
  const PlantParams params;
  const double s_hover = hover_speed(params);

  SUBCASE("zero action hovers") {
    const RotorCommand cmd =
        action_to_command(Eigen::VectorXd::Zero(4), 100.0, params);
    for (int i = 0; i < 4; ++i) CHECK(cmd.speeds[i] == s_hover);
    CHECK(s_hover == doctest::Approx(202.1756661915573));
  }

  SUBCASE("huge actions saturate") {
    const RotorCommand hi =
        action_to_command(Eigen::VectorXd::Constant(4, 1e9), 100.0, params);
    const RotorCommand lo =
        action_to_command(Eigen::VectorXd::Constant(4, -1e9), 100.0, params);
    for (int i = 0; i < 4; ++i) {
      CHECK(hi.speeds[i] == params.rotor_max);
      CHECK(lo.speeds[i] == params.rotor_min);
    }
  }

  SUBCASE("zero gain ignores the action") {
    const RotorCommand cmd =
        action_to_command(Eigen::VectorXd::Constant(4, -3.7), 0.0, params);
    for (int i = 0; i < 4; ++i) CHECK(cmd.speeds[i] == s_hover);
  }

  SUBCASE("wrong dimension throws") {
    CHECK_THROWS_AS(action_to_command(Eigen::VectorXd::Zero(3), 100.0, params),
                    std::invalid_argument);
  }
}

TEST_CASE("feature vector layout") {
  QuadState s;
  s.position = Eigen::Vector3d(1.0, 2.0, 12.0);
  s.velocity = Eigen::Vector3d(0.1, 0.2, 0.3);
  s.euler = Eigen::Vector3d(0.01, 0.02, 0.03);
  s.body_rates = Eigen::Vector3d(-1.0, -2.0, -3.0);
  const Eigen::VectorXd x = feature_vector(s, {0.0, 0.0, 10.0});
  REQUIRE(x.size() == 12);
  CHECK(x.segment<3>(0) == Eigen::Vector3d(1.0, 2.0, 2.0));
  CHECK(x.segment<3>(3) == s.velocity);
  CHECK(x.segment<3>(6) == s.euler);
  CHECK(x.segment<3>(9) == s.body_rates);
}

TEST_CASE("zero-policy rollout is a hover episode") {
  RunConfig cfg;
  const Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kActionDim, kFeatureDim);
  const FrozenNormalizer stats = freeze(NormalizerStats(kFeatureDim));
  PolicySpec spec;
  spec.m = &m;
  spec.stats = &stats;
  spec.sign = 0;
  spec.collect_stats = false;

  const RolloutResult r = rollout(spec, cfg);
  CHECK(r.trace.done_reason == DoneReason::TimeLimit);
  double worst = 0.0;
  for (const QuadState& s : r.trace.states)
    worst = std::max(worst, std::abs(s.position.z() - 10.0));
  CHECK(worst < 0.5);

  // exact accumulator identity
  double sum = 0.0;
  for (double v : r.trace.rewards) sum += v;
  CHECK(sum == r.total_reward);
  CHECK(r.trace.total_reward == r.total_reward);

  // purity: identical inputs, identical trace
  const RolloutResult r2 = rollout(spec, cfg);
  REQUIRE(r2.trace.size() == r.trace.size());
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r2.trace.states[i].position == r.trace.states[i].position);
    CHECK(r2.trace.rewards[i] == r.trace.rewards[i]);
  }
}

TEST_CASE("rollout respects the episode-length bound") {
  RunConfig cfg;
  cfg.hyperparams.episode_length = 1;
  const Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kActionDim, kFeatureDim);
  const FrozenNormalizer stats = freeze(NormalizerStats(kFeatureDim));
  PolicySpec spec;
  spec.m = &m;
  spec.stats = &stats;

  const RolloutResult r = rollout(spec, cfg);
  CHECK(r.trace.size() == 1);
  CHECK(r.trace.done_reason == DoneReason::StepLimit);
  CHECK(r.stats.count == 1);  // one feature vector observed
}

TEST_CASE("serial and parallel rollout batches are bit-identical") {
  RunConfig cfg = desk_config("unused");
  const NoiseTable table =
      NoiseTable::generate_serial(noise_table_seed(cfg.master_seed), 1 << 14);
  SplitMix64 rng(direction_stream_seed(cfg.master_seed, 1));
  const DirectionBatch batch =
      sample_directions(table, rng, 8, kActionDim, kFeatureDim);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kActionDim, kFeatureDim);
  m(0, 2) = -0.05;  // mild feedback so episodes differ
  const FrozenNormalizer stats = freeze(NormalizerStats(kFeatureDim));

  const auto serial = run_rollout_batch_serial(m, batch, 0.1, stats, cfg);
  const auto parallel = run_rollout_batch_parallel(m, batch, 0.1, stats, cfg, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].total_reward == parallel[i].total_reward);
    CHECK(serial[i].stats.count == parallel[i].stats.count);
    CHECK(serial[i].stats.mean == parallel[i].stats.mean);
    CHECK(serial[i].stats.m2 == parallel[i].stats.m2);
  }
}

TEST_CASE("train writes deterministic artifacts") {
  TempDir tmp("determinism");
  RunConfig cfg = desk_config(tmp.str("a"));
  const TrainResult a = train(cfg, 1);
  cfg.out_dir = tmp.str("b");
  const TrainResult b = train(cfg, 1);
  cfg.out_dir = tmp.str("c");
  const TrainResult c = train(cfg, 4);

  CHECK(slurp(tmp.str("a") + "/rewards.csv") ==
        slurp(tmp.str("b") + "/rewards.csv"));
  CHECK(slurp(tmp.str("a") + "/rewards.csv") ==
        slurp(tmp.str("c") + "/rewards.csv"));
  CHECK(slurp(tmp.str("a") + "/train_log.csv") ==
        slurp(tmp.str("c") + "/train_log.csv"));
  CHECK(slurp(tmp.str("a") + "/best_trace.csv") ==
        slurp(tmp.str("c") + "/best_trace.csv"));
  CHECK(slurp(tmp.str("a") + "/final_policy.json") ==
        slurp(tmp.str("c") + "/final_policy.json"));
  CHECK(a.policy.m == c.policy.m);

  // structural expectations
  CHECK(a.records.size() == 3);
  for (const auto& rec : a.records) {
    CHECK(rec.directions.size() == 4);
    CHECK(rec.eval_reward.has_value());
  }
  const CsvTable rewards = read_csv(tmp.str("a") + "/rewards.csv");
  check_schema(rewards, kRewardsColumns, "rewards.csv");
  CHECK(rewards.rows.size() == 3);
  (void)b;
}

TEST_CASE("training rollouts feed the normalizer, evaluations do not") {
  TempDir tmp("statcount");
  RunConfig cfg = desk_config(tmp.str("run"));
  cfg.hyperparams.num_iterations = 1;
  const TrainResult result = train(cfg, 1);

  // every training step of the 2N rollouts observed exactly one feature
  // vector; the evaluation episode added none
  std::int64_t training_steps = 0;
  const NoiseTable table = NoiseTable::generate_serial(
      noise_table_seed(cfg.master_seed), cfg.noise_table_len);
  SplitMix64 rng(direction_stream_seed(cfg.master_seed, 1));
  const DirectionBatch batch =
      sample_directions(table, rng, 4, kActionDim, kFeatureDim);
  const Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(kActionDim, kFeatureDim);
  const FrozenNormalizer fresh = freeze(NormalizerStats(kFeatureDim));
  for (const auto& r : run_rollout_batch_serial(m0, batch, 0.1, fresh, cfg))
    training_steps += r.stats.count;
  CHECK(result.stats.count == training_steps);
}

TEST_CASE("evaluation cadence follows eval_every") {
  TempDir tmp("cadence");
  RunConfig cfg = desk_config(tmp.str("run"));
  cfg.hyperparams.num_iterations = 5;
  cfg.eval_every = 2;
  const TrainResult result = train(cfg, 1);
  REQUIRE(result.records.size() == 5);
  for (const auto& rec : result.records)
    CHECK(rec.eval_reward.has_value() == (rec.iteration % 2 == 0));
  const CsvTable rewards = read_csv(tmp.str("run") + "/rewards.csv");
  REQUIRE(rewards.rows.size() == 2);
  CHECK(rewards.rows[0][0] == 2.0);  // iteration column
  CHECK(rewards.rows[1][0] == 4.0);
  CHECK(rewards.rows[0][1] == 1.0);  // eval_episode column
  CHECK(rewards.rows[1][1] == 2.0);
}

TEST_CASE("the persisted noise table matches the in-memory one") {
  TempDir tmp("noise");
  RunConfig cfg = desk_config(tmp.str("run"));
  cfg.hyperparams.num_iterations = 1;
  cfg.save_noise = true;
  train(cfg, 1);
  const NoiseTable loaded = NoiseTable::load(tmp.str("run") + "/noise.bin");
  const NoiseTable expected = NoiseTable::generate_serial(
      noise_table_seed(cfg.master_seed), cfg.noise_table_len);
  CHECK(loaded.entries() == expected.entries());
}

TEST_CASE("zero iterations leave the policy untouched") {
  TempDir tmp("noiter");
  RunConfig cfg = desk_config(tmp.str("run"));
  cfg.hyperparams.num_iterations = 0;
  const TrainResult result = train(cfg, 1);
  CHECK(result.policy.m == Eigen::MatrixXd::Zero(kActionDim, kFeatureDim));
  CHECK(result.records.empty());
  CHECK(slurp(tmp.str("run") + "/rewards.csv") ==
        "iteration,eval_episode,total_reward,running_avg_10,sigma_R,update_norm\n");
}

TEST_CASE("with zero-width exploration and zero step size evals are constant") {
  TempDir tmp("frozen");
  RunConfig cfg = desk_config(tmp.str("run"));
  cfg.hyperparams.num_iterations = 4;
  // noise_std must stay positive; make every update a no-op instead
  cfg.hyperparams.step_size = 1e-300;
  const TrainResult result = train(cfg, 1);
  REQUIRE(result.records.size() == 4);
  const double first = *result.records[0].eval_reward;
  for (const auto& rec : result.records) CHECK(*rec.eval_reward == first);
}

TEST_CASE("config json round trip") {
  RunConfig cfg = desk_config("somewhere");
  cfg.task = TaskConfig::takeoff_default();
  cfg.eval_every = 2;
  cfg.save_noise = true;
  const RunConfig back = run_config_from_json(run_config_to_json(cfg));
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(back.hyperparams.num_directions == cfg.hyperparams.num_directions);
  CHECK(back.hyperparams.step_size == cfg.hyperparams.step_size);
  CHECK(back.task.kind == TaskKind::Takeoff);
  CHECK(back.task.target == cfg.task.target);
  CHECK(back.task.init_velocity == cfg.task.init_velocity);
  CHECK(back.plant.k_thrust == cfg.plant.k_thrust);
  CHECK(back.eval_every == 2);
  CHECK(back.save_noise == true);
  CHECK(back.out_dir == cfg.out_dir);
  CHECK(run_config_to_json(back) == run_config_to_json(cfg));
}

TEST_CASE("policy file round trip preserves the replay inputs bitwise") {
  TempDir tmp("policy");
  PolicyFile f;
  f.policy.m = Eigen::MatrixXd::Random(kActionDim, kFeatureDim);
  f.policy.iteration = 17;
  NormalizerStats stats(kFeatureDim);
  SplitMix64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(kFeatureDim);
    for (int j = 0; j < kFeatureDim; ++j) x[j] = rng.next_unit() * 3.0 - 1.5;
    normalizer_observe(stats, x);
  }
  f.stats = freeze(stats);
  save_policy(tmp.str("p.json"), f);
  const PolicyFile back = load_policy(tmp.str("p.json"));
  CHECK(back.policy.m == f.policy.m);
  CHECK(back.policy.iteration == 17);
  CHECK(back.stats.mean == f.stats.mean);
  CHECK(back.stats.variance == f.stats.variance);
  CHECK(back.stats.count == f.stats.count);
}

TEST_CASE("malformed policy files are rejected") {
  TempDir tmp("badpolicy");
  {
    std::ofstream out(tmp.str("bad.json"));
    out << "{\"rows\": 2, \"cols\": 2, \"m\": [1, 2, 3]}";
  }
  CHECK_THROWS_AS(load_policy(tmp.str("bad.json")), std::invalid_argument);
  {
    std::ofstream out(tmp.str("notjson.json"));
    out << "not json at all";
  }
  CHECK_THROWS_AS(load_policy(tmp.str("notjson.json")), std::invalid_argument);
}

TEST_CASE("seed sweep") {
  TempDir tmp("sweep");
  RunConfig base = desk_config("ignored");
  base.hyperparams.num_iterations = 1;

  SUBCASE("draws distinct seeds and writes per-seed artifacts") {
    const auto entries = seed_sweep(base, 2, 9, tmp.str("root"), 1);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].seed != entries[1].seed);
    CHECK(entries[0].seed < 1000);
    CHECK(entries[1].seed < 1000);
    for (const auto& e : entries) {
      const std::string dir =
          tmp.str("root") + "/seed_" + std::to_string(e.seed);
      CHECK(fs::exists(dir + "/rewards.csv"));
      CHECK(fs::exists(dir + "/final_policy.json"));
    }
    const CsvTable summary = read_csv(tmp.str("root") + "/sweep_summary.csv");
    check_schema(summary, {"seed", "final_eval_reward", "best_eval_reward"},
                 "sweep_summary.csv");
    CHECK(summary.rows.size() == 2);
  }

  SUBCASE("a single-seed sweep equals a direct run") {
    const auto entries = seed_sweep(base, 1, 9, tmp.str("single"), 1);
    RunConfig direct = base;
    direct.master_seed = entries[0].seed;
    direct.out_dir = tmp.str("direct");
    train(direct, 1);
    CHECK(slurp(tmp.str("single") + "/seed_" +
                std::to_string(entries[0].seed) + "/rewards.csv") ==
          slurp(tmp.str("direct") + "/rewards.csv"));
  }

  SUBCASE("the interval cannot be exhausted") {
    CHECK_THROWS_AS(seed_sweep(base, 1001, 9, tmp.str("overflow"), 1),
                    std::invalid_argument);
  }
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  cfg.master_seed = 1000;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.eval_every = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.noise_table_len = 10;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
