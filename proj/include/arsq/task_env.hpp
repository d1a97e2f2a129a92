#pragma once

#include <optional>
#include <utility>

#include "arsq/quad_dynamics.hpp"

namespace arsq {

enum class TaskKind { Hover, Takeoff };

// Takeoff shaping constants: approach/retreat increments plus a one-time
// bonus for crossing the target height.
inline constexpr double kApproachReward = 1.0;
inline constexpr double kRetreatPenalty = 1.0;
inline constexpr double kCrossBonus = 10.0;

struct TaskConfig {
  TaskKind kind = TaskKind::Hover;
  Eigen::Vector3d init_position{0.0, 0.0, 10.0};  // m
  Eigen::Vector3d init_velocity{0.0, 0.0, 0.08};  // m/s
  Eigen::Vector3d init_euler = Eigen::Vector3d::Zero();       // rad
  Eigen::Vector3d init_body_rates = Eigen::Vector3d::Zero();  // rad/s
  double runtime = 5.0;  // s, episode time limit
  Eigen::Vector3d target{0.0, 0.0, 10.0};  // m
  int max_steps = 1000;

  static TaskConfig hover_default();
  static TaskConfig takeoff_default();

  // Throws std::invalid_argument on non-finite values, runtime <= 0 or
  // max_steps < 1.
  void validate() const;
};

enum class DoneReason { TimeLimit, StepLimit, GroundContact, GimbalGuard, NumericGuard };

const char* to_string(DoneReason reason);

struct StepResult {
  QuadState next_state;
  double reward = 0.0;
  bool done = false;
  std::optional<DoneReason> done_reason;  // set iff done
};

// z of the previous step plus the crossed-target latch.
struct TakeoffShapingState {
  double prev_z = 0.0;
  bool crossed_target = false;
};

// One in-flight episode. Value type; rollouts each own one instance.
struct Episode {
  QuadState quad;
  TakeoffShapingState shaping;
  int steps_taken = 0;
  std::optional<DoneReason> done_reason;
  bool done() const { return done_reason.has_value(); }
};

Episode reset(const TaskConfig& config);

// Negative L1 distance to the target, Hover reward per step.
double reward_distance(const QuadState& state, const Eigen::Vector3d& target);

// Takeoff shaping: reward on approach, penalty on retreat, one-time bonus
// when z first reaches target_z. Returns the reward and the updated
// shaping state (prev_z always becomes z).
std::pair<double, TakeoffShapingState> reward_takeoff(
    const TakeoffShapingState& shaping, double z, double target_z);

// Steps the plant once and scores the resulting state. Marks the episode
// done on plant guards, ground contact (z <= 0), the time limit, or the
// step limit, in that precedence order. Throws std::logic_error when
// called on a done episode.
StepResult env_step(Episode& episode, const RotorCommand& cmd,
                    const TaskConfig& config, const PlantParams& params);

}  // namespace arsq
