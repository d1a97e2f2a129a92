#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arsq/config_io.hpp"
#include "arsq/csv_io.hpp"
#include "arsq/svg_plot.hpp"
#include "arsq/trainer.hpp"

namespace {

namespace fs = std::filesystem;

struct TaskFlags {
  std::string task = "hover";
  std::vector<double> target;
  double runtime = 0.0;
  CLI::Option* target_opt = nullptr;
  CLI::Option* runtime_opt = nullptr;
};

void add_task_flags(CLI::App* cmd, TaskFlags& flags) {
  cmd->add_option("--task", flags.task, "Task kind")
      ->check(CLI::IsMember({"hover", "takeoff"}));
  flags.target_opt =
      cmd->add_option("--target", flags.target, "Target position X,Y,Z in m")
          ->delimiter(',')
          ->expected(3);
  flags.runtime_opt =
      cmd->add_option("--runtime", flags.runtime, "Episode time limit in s");
}

void apply_task_flags(const TaskFlags& flags, arsq::RunConfig& cfg) {
  cfg.task = flags.task == "takeoff" ? arsq::TaskConfig::takeoff_default()
                                     : arsq::TaskConfig::hover_default();
  if (flags.target_opt->count() > 0)
    cfg.task.target =
        Eigen::Vector3d(flags.target[0], flags.target[1], flags.target[2]);
  if (flags.runtime_opt->count() > 0) cfg.task.runtime = flags.runtime;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

int run_plot(const std::string& kind, const std::string& input,
             const std::string& output) {
  if (!fs::exists(input)) {
    std::cerr << "arsq plot: no such file: " << input << "\n";
    return 1;
  }
  const arsq::CsvTable table = arsq::read_csv(input);
  std::string svg;
  if (kind == "rewards") {
    svg = arsq::render_rewards_svg(table);
  } else if (kind == "motion") {
    svg = arsq::render_motion_svg(table);
  } else {
    svg = arsq::render_trajectory_svg(table);
  }
  write_text(output, svg);
  std::cout << "wrote " << output << "\n";
  return 0;
}

int run_replay(const std::string& policy_path, const arsq::RunConfig& cfg,
               const std::string& trace_out) {
  if (!fs::exists(policy_path)) {
    std::cerr << "arsq replay: no such file: " << policy_path << "\n";
    return 1;
  }
  const arsq::PolicyFile policy = arsq::load_policy(policy_path);
  arsq::PolicySpec spec;
  spec.m = &policy.policy.m;
  spec.sign = 0;
  spec.stats = &policy.stats;
  spec.collect_stats = false;
  const arsq::RolloutResult result = arsq::rollout(spec, cfg);
  arsq::write_trace_csv(trace_out, result.trace);
  std::cout << "replayed " << result.trace.size() << " steps, total reward "
            << result.total_reward << ", trace in " << trace_out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arsq: augmented random search on a simulated quadcopter"};
  app.require_subcommand(1);

  arsq::RunConfig cfg;
  std::string config_path;
  int threads = 0;
  TaskFlags train_task_flags;
  TaskFlags sweep_task_flags;
  CLI::Option* train_out_opt = nullptr;
  CLI::Option* sweep_out_opt = nullptr;
  int num_seeds = 5;
  std::uint64_t sweep_seed = 0;

  auto add_run_flags = [&](CLI::App* cmd, TaskFlags& task_flags) {
    cmd->add_option("--seed", cfg.master_seed, "Master seed in [0, 1000)");
    cmd->add_option("--iterations", cfg.hyperparams.num_iterations,
                    "Training iterations");
    cmd->add_option("--episode-length", cfg.hyperparams.episode_length,
                    "Max steps per rollout");
    cmd->add_option("--lr", cfg.hyperparams.step_size, "Update step size");
    cmd->add_option("--n-directions", cfg.hyperparams.num_directions,
                    "Perturbation directions per iteration");
    cmd->add_option("--top-directions", cfg.hyperparams.top_directions,
                    "Best directions kept for the update");
    cmd->add_option("--noise-std", cfg.hyperparams.noise_std,
                    "Exploration noise standard deviation");
    cmd->add_option("--action-scale", cfg.action_scale,
                    "Rotor rev/s per action unit");
    add_task_flags(cmd, task_flags);
    CLI::Option* out = cmd->add_option("--out", cfg.out_dir, "Output directory");
    cmd->add_option("--config", config_path,
                    "Run-config JSON; overrides the other flags");
    cmd->add_option("--threads", threads,
                    "Rollout worker count (0 = hardware default)");
    cmd->add_option("--eval-every", cfg.eval_every,
                    "Iterations between evaluation episodes");
    cmd->add_option("--noise-len", cfg.noise_table_len,
                    "Shared noise table length");
    cmd->add_flag("--save-noise", cfg.save_noise,
                  "Persist the noise table as noise.bin");
    return out;
  };

  CLI::App* train_cmd = app.add_subcommand("train", "Train a linear policy");
  train_out_opt = add_run_flags(train_cmd, train_task_flags);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Repeat training over distinct seeds");
  sweep_out_opt = add_run_flags(sweep_cmd, sweep_task_flags);
  sweep_cmd->add_option("--num-seeds", num_seeds,
                        "Seeds to draw from [0, 1000)");
  sweep_cmd->add_option("--sweep-seed", sweep_seed, "Seed of the seed draw");

  std::string plot_kind;
  std::string plot_input;
  std::string plot_output = "plot.svg";
  CLI::App* plot_cmd = app.add_subcommand("plot", "Render a CSV as SVG");
  plot_cmd->add_option("--kind", plot_kind, "rewards, motion or trajectory")
      ->required()
      ->check(CLI::IsMember({"rewards", "motion", "trajectory"}));
  plot_cmd->add_option("--input", plot_input, "rewards.csv or trace.csv")
      ->required();
  plot_cmd->add_option("--out", plot_output, "SVG output path");

  std::string policy_path;
  std::string trace_out = "trace.csv";
  std::string replay_config_path;
  TaskFlags replay_task_flags;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "Run one noiseless episode of a policy");
  replay_cmd->add_option("--policy", policy_path, "final_policy.json path")
      ->required();
  add_task_flags(replay_cmd, replay_task_flags);
  replay_cmd->add_option("--config", replay_config_path,
                         "Run-config JSON for task and plant parameters");
  replay_cmd->add_option("--out", trace_out, "Trace CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(train_cmd) || app.got_subcommand(sweep_cmd)) {
      const bool sweeping = app.got_subcommand(sweep_cmd);
      apply_task_flags(sweeping ? sweep_task_flags : train_task_flags, cfg);
      if (!config_path.empty()) {
        const std::string out_dir = cfg.out_dir;
        const bool out_given =
            (sweeping ? sweep_out_opt : train_out_opt)->count() > 0;
        cfg = arsq::load_run_config(config_path);
        if (out_given) cfg.out_dir = out_dir;
      }
      if (sweeping) {
        const auto entries =
            arsq::seed_sweep(cfg, num_seeds, sweep_seed, cfg.out_dir, threads);
        std::cout << "sweep finished: " << entries.size()
                  << " seeds, summary in " << cfg.out_dir
                  << "/sweep_summary.csv\n";
        return 0;
      }
      const arsq::TrainResult result = arsq::train(cfg, threads);
      std::cout << "trained " << result.policy.iteration << " iterations";
      if (result.final_eval_reward)
        std::cout << ", final eval reward " << *result.final_eval_reward;
      std::cout << "; artifacts in " << cfg.out_dir << "\n";
      return 0;
    }
    if (app.got_subcommand(plot_cmd)) {
      return run_plot(plot_kind, plot_input, plot_output);
    }
    if (app.got_subcommand(replay_cmd)) {
      arsq::RunConfig replay_cfg;
      apply_task_flags(replay_task_flags, replay_cfg);
      if (!replay_config_path.empty())
        replay_cfg = arsq::load_run_config(replay_config_path);
      return run_replay(policy_path, replay_cfg, trace_out);
    }
  } catch (const arsq::SchemaError& e) {
    std::cerr << "arsq: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "arsq: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "arsq: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
