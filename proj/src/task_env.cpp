#include "arsq/task_env.hpp"

#include <cmath>
#include <stdexcept>

namespace arsq {

namespace {

bool vec_finite(const Eigen::Vector3d& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

}  // namespace

TaskConfig TaskConfig::hover_default() { return TaskConfig{}; }

TaskConfig TaskConfig::takeoff_default() {
  TaskConfig c;
  c.kind = TaskKind::Takeoff;
  c.target = Eigen::Vector3d(0.0, 0.0, 150.0);
  return c;
}

void TaskConfig::validate() const {
  const bool ok = vec_finite(init_position) && vec_finite(init_velocity) &&
                  vec_finite(init_euler) && vec_finite(init_body_rates) &&
                  vec_finite(target) && std::isfinite(runtime) &&
                  runtime > 0.0 && max_steps >= 1;
  if (!ok) throw std::invalid_argument("TaskConfig: invalid configuration");
}

const char* to_string(DoneReason reason) {
  switch (reason) {
    case DoneReason::TimeLimit: return "TimeLimit";
    case DoneReason::StepLimit: return "StepLimit";
    case DoneReason::GroundContact: return "GroundContact";
    case DoneReason::GimbalGuard: return "GimbalGuard";
    case DoneReason::NumericGuard: return "NumericGuard";
  }
  return "Unknown";
}

Episode reset(const TaskConfig& config) {
  config.validate();
  Episode ep;
  ep.quad.position = config.init_position;
  ep.quad.velocity = config.init_velocity;
  ep.quad.euler = config.init_euler;
  ep.quad.body_rates = config.init_body_rates;
  ep.quad.time = 0.0;
  ep.shaping.prev_z = config.init_position.z();
  ep.shaping.crossed_target = false;
  return ep;
}

double reward_distance(const QuadState& state, const Eigen::Vector3d& target) {
  return -(state.position - target).cwiseAbs().sum();
}

std::pair<double, TakeoffShapingState> reward_takeoff(
    const TakeoffShapingState& shaping, double z, double target_z) {
  double r = std::abs(target_z - z) < std::abs(target_z - shaping.prev_z)
                 ? kApproachReward
                 : -kRetreatPenalty;
  TakeoffShapingState next = shaping;
  if (z >= target_z && !next.crossed_target) {
    r += kCrossBonus;
    next.crossed_target = true;
  }
  next.prev_z = z;
  return {r, next};
}

StepResult env_step(Episode& episode, const RotorCommand& cmd,
                    const TaskConfig& config, const PlantParams& params) {
  if (episode.done())
    throw std::logic_error("env_step: episode is already done");

  const PlantStep plant = step_dynamics(episode.quad, cmd, params);
  episode.steps_taken += 1;

  StepResult result;
  result.next_state = plant.state;
  result.reward = reward_distance(plant.state, config.target);
  if (config.kind == TaskKind::Takeoff) {
    auto [shaped, next_shaping] = reward_takeoff(
        episode.shaping, plant.state.position.z(), config.target.z());
    result.reward += shaped;
    episode.shaping = next_shaping;
  }

  std::optional<DoneReason> reason;
  if (plant.guard == PlantGuard::NonFinite) {
    reason = DoneReason::NumericGuard;
  } else if (plant.guard == PlantGuard::Gimbal) {
    reason = DoneReason::GimbalGuard;
  } else if (plant.state.position.z() <= 0.0) {
    reason = DoneReason::GroundContact;
  } else if (plant.state.time >= config.runtime) {
    reason = DoneReason::TimeLimit;
  } else if (episode.steps_taken >= config.max_steps) {
    reason = DoneReason::StepLimit;
  }

  episode.quad = plant.state;
  episode.done_reason = reason;
  result.done = reason.has_value();
  result.done_reason = reason;
  return result;
}

}  // namespace arsq
