#include "arsq/quad_dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace arsq {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

bool vec_finite(const Eigen::Vector3d& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

bool within_gimbal(double theta) {
  return std::abs(theta) < kHalfPi - kGimbalMargin;
}

// Rotation without the gimbal precondition; RK4 stages may probe past the
// guard and the final state is checked instead.
Eigen::Matrix3d rotation_body_to_earth(const Eigen::Vector3d& euler) {
  const double cf = std::cos(euler.x()), sf = std::sin(euler.x());
  const double ct = std::cos(euler.y()), st = std::sin(euler.y());
  const double cp = std::cos(euler.z()), sp = std::sin(euler.z());
  Eigen::Matrix3d r;
  r << cp * ct, cp * st * sf - sp * cf, cp * st * cf + sp * sf,
       sp * ct, sp * st * sf + cp * cf, sp * st * cf - cp * sf,
       -st,     ct * sf,                ct * cf;
  return r;
}

struct Deriv {
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
  Eigen::Vector3d euler;
  Eigen::Vector3d body_rates;
};

Deriv dynamics_deriv(const QuadState& s, const RotorForces& f,
                     const PlantParams& p) {
  Deriv d;
  d.position = s.velocity;

  const Eigen::Matrix3d r_be = rotation_body_to_earth(s.euler);
  d.velocity = r_be * Eigen::Vector3d(0.0, 0.0, f.thrust) / p.mass -
               Eigen::Vector3d(0.0, 0.0, p.gravity);

  // Z-Y-X Euler kinematics: (phi., theta., psi.) = W(phi, theta) * omega.
  const double cf = std::cos(s.euler.x()), sf = std::sin(s.euler.x());
  const double ct = std::cos(s.euler.y()), tt = std::tan(s.euler.y());
  const double pr = s.body_rates.x(), qr = s.body_rates.y(),
               rr = s.body_rates.z();
  d.euler.x() = pr + (qr * sf + rr * cf) * tt;
  d.euler.y() = qr * cf - rr * sf;
  d.euler.z() = (qr * sf + rr * cf) / ct;

  // Diagonal inertia: I w. = tau - w x (I w).
  const Eigen::Vector3d iw = p.inertia_diag.cwiseProduct(s.body_rates);
  d.body_rates =
      (f.torque - s.body_rates.cross(iw)).cwiseQuotient(p.inertia_diag);
  return d;
}

QuadState advanced(const QuadState& s, const Deriv& d, double h) {
  QuadState out = s;
  out.position += h * d.position;
  out.velocity += h * d.velocity;
  out.euler += h * d.euler;
  out.body_rates += h * d.body_rates;
  return out;
}

}  // namespace

void PlantParams::validate() const {
  const bool ok = mass > 0.0 && gravity > 0.0 && arm_length > 0.0 &&
                  inertia_diag.minCoeff() > 0.0 && k_thrust > 0.0 &&
                  k_torque > 0.0 && rotor_min >= 0.0 &&
                  rotor_max > rotor_min && dt > 0.0 && dt <= 0.1;
  if (!ok) throw std::invalid_argument("PlantParams: invalid parameter set");
}

bool state_is_finite(const QuadState& s) {
  return vec_finite(s.position) && vec_finite(s.velocity) &&
         vec_finite(s.euler) && vec_finite(s.body_rates) &&
         std::isfinite(s.time);
}

Eigen::Matrix3d body_to_earth(const Eigen::Vector3d& euler) {
  if (!within_gimbal(euler.y()))
    throw std::domain_error("body_to_earth: pitch too close to +-pi/2");
  return rotation_body_to_earth(euler);
}

Eigen::Matrix3d earth_to_body(const Eigen::Vector3d& euler) {
  return body_to_earth(euler).transpose();
}

double hover_speed(const PlantParams& p) {
  return std::sqrt(p.mass * p.gravity / (4.0 * p.k_thrust));
}

RotorForces rotor_forces(const RotorCommand& cmd, const PlantParams& p) {
  const double s1 = cmd.speeds[0] * cmd.speeds[0];
  const double s2 = cmd.speeds[1] * cmd.speeds[1];
  const double s3 = cmd.speeds[2] * cmd.speeds[2];
  const double s4 = cmd.speeds[3] * cmd.speeds[3];
  RotorForces f;
  f.thrust = p.k_thrust * (s1 + s2 + s3 + s4);
  f.torque.x() = p.arm_length * p.k_thrust * (s4 - s2);
  f.torque.y() = p.arm_length * p.k_thrust * (s1 - s3);
  f.torque.z() = p.k_torque * (-s1 + s2 - s3 + s4);
  return f;
}

PlantStep step_dynamics(const QuadState& state, const RotorCommand& cmd,
                        const PlantParams& params) {
  for (int i = 0; i < 4; ++i) {
    const double s = cmd.speeds[i];
    if (!(s >= params.rotor_min && s <= params.rotor_max))
      throw std::invalid_argument("step_dynamics: rotor speed out of bounds");
  }
  if (!state_is_finite(state)) return {state, PlantGuard::NonFinite};
  if (!within_gimbal(state.euler.y())) return {state, PlantGuard::Gimbal};

  const RotorForces f = rotor_forces(cmd, params);
  const double dt = params.dt;

  const Deriv k1 = dynamics_deriv(state, f, params);
  const Deriv k2 = dynamics_deriv(advanced(state, k1, dt / 2.0), f, params);
  const Deriv k3 = dynamics_deriv(advanced(state, k2, dt / 2.0), f, params);
  const Deriv k4 = dynamics_deriv(advanced(state, k3, dt), f, params);

  QuadState next = state;
  next.position +=
      dt / 6.0 * (k1.position + 2.0 * k2.position + 2.0 * k3.position + k4.position);
  next.velocity +=
      dt / 6.0 * (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity);
  next.euler += dt / 6.0 * (k1.euler + 2.0 * k2.euler + 2.0 * k3.euler + k4.euler);
  next.body_rates += dt / 6.0 * (k1.body_rates + 2.0 * k2.body_rates +
                                 2.0 * k3.body_rates + k4.body_rates);
  next.time = state.time + dt;

  if (!state_is_finite(next)) return {state, PlantGuard::NonFinite};
  if (!within_gimbal(next.euler.y())) return {state, PlantGuard::Gimbal};
  return {next, PlantGuard::None};
}

}  // namespace arsq
