#pragma once

#include <Eigen/Dense>

namespace arsq {

// Pitch must stay this far from +-pi/2; past it the Euler kinematics are
// singular and the episode terminates.
inline constexpr double kGimbalMargin = 1e-3;  // rad

// Full rigid-body state. Earth frame is Z-up with origin at the launch
// site; euler is (phi, theta, psi) in the Z-Y-X convention; body_rates are
// (p, q, r) in the body frame.
struct QuadState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();    // m, earth frame
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();    // m/s, earth frame
  Eigen::Vector3d euler = Eigen::Vector3d::Zero();       // rad
  Eigen::Vector3d body_rates = Eigen::Vector3d::Zero();  // rad/s, body frame
  double time = 0.0;                                     // s since reset
};

// Rotor speeds in rev/s. "+" configuration: rotor 1 front, 2 right,
// 3 rear, 4 left; rotors 1,3 spin CW and 2,4 CCW.
struct RotorCommand {
  Eigen::Vector4d speeds = Eigen::Vector4d::Zero();
};

struct PlantParams {
  double mass = 0.5;          // kg
  double gravity = 9.81;      // m/s^2
  double arm_length = 0.175;  // m
  Eigen::Vector3d inertia_diag{4.86e-3, 4.86e-3, 8.80e-3};  // kg m^2
  double k_thrust = 3.0e-5;   // N/(rev/s)^2
  double k_torque = 7.5e-7;   // N m/(rev/s)^2
  double rotor_min = 0.0;     // rev/s
  double rotor_max = 900.0;   // rev/s
  double dt = 0.02;           // s, integration step

  // Throws std::invalid_argument unless all parameters are strictly
  // positive (rotor_min may be zero) and dt is in (0, 0.1].
  void validate() const;
};

struct RotorForces {
  double thrust = 0.0;  // N, along body +z
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();  // N m, body frame
};

enum class PlantGuard { None, Gimbal, NonFinite };

// Result of one integration step. When a guard fires the returned state is
// the unmodified input state and the step is terminal.
struct PlantStep {
  QuadState state;
  PlantGuard guard = PlantGuard::None;
  bool ok() const { return guard == PlantGuard::None; }
};

// Z-Y-X rotation R = Rz(psi) Ry(theta) Rx(phi) taking body coordinates to
// earth coordinates. Throws std::domain_error near the gimbal singularity.
Eigen::Matrix3d body_to_earth(const Eigen::Vector3d& euler);

// Transpose of body_to_earth.
Eigen::Matrix3d earth_to_body(const Eigen::Vector3d& euler);

// Net thrust along body +z and body-frame torque for a rotor command.
RotorForces rotor_forces(const RotorCommand& cmd, const PlantParams& params);

// Advances the state by params.dt with classical RK4 over the rigid-body
// equations of motion (no aerodynamic drag). The command is held constant
// over the step. Throws std::invalid_argument if the command is outside
// the rotor speed bounds.
PlantStep step_dynamics(const QuadState& state, const RotorCommand& cmd,
                        const PlantParams& params);

// Rotor speed at which four rotors exactly carry the weight, rev/s.
double hover_speed(const PlantParams& params);

bool state_is_finite(const QuadState& state);

}  // namespace arsq
