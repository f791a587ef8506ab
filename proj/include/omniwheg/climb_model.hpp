#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "omniwheg/errors.hpp"
#include "omniwheg/geometry.hpp"
#include "omniwheg/kinematics.hpp"
#include "omniwheg/statics.hpp"

namespace omniwheg {

enum class ClimbDirection { Forward, Backward };

inline const char *to_string(ClimbDirection d) { return d == ClimbDirection::Forward ? "forward" : "backward"; }

/// Single parametric step; its riser face sits at s = 0 and its top at z = height.
struct Obstacle {
  double height = 0.20;
  ClimbDirection direction = ClimbDirection::Forward;

  friend bool operator==(const Obstacle &, const Obstacle &) = default;
};

/// One axle seen in the sagittal plane.
struct AxleState {
  SagittalPoint center;
  WheelState left;
  WheelState right;
  bool on_top = false; // resting on the obstacle's top surface

  WheelMode mode() const { return left.mode; }
};

struct BodyPose {
  double x = 0.0;       // lateral
  double y = 0.0;       // longitudinal
  double heading = 0.0; // (-pi, pi], zero when square to the obstacle
};

/// Wheel order everywhere is FL, FR, RL, RR.
struct RobotState {
  BodyPose pose;
  AxleState front;
  AxleState rear;
  WheelSpeeds speeds;

  std::array<WheelState, 4> wheels() const { return {front.left, front.right, rear.left, rear.right}; }
  std::array<WheelMode, 4> modes() const {
    return {front.left.mode, front.right.mode, rear.left.mode, rear.right.mode};
  }
};

inline double wrap_heading(double angle) {
  double w = std::remainder(angle, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi)
    w += 2.0 * std::numbers::pi;
  return w;
}

// Legged-mode rolling is treated as a rimless wheel: the centre height swings
// between r_leg*cos(pi/n) (two tips down) and r_leg (one tip straight down).
// The nominal stance is the middle of that band.
inline double stance_height(const WheelGeometry &g) {
  return 0.5 * g.r_leg * (1.0 + std::cos(std::numbers::pi / g.lobe_count));
}

inline double hook_radius(const WheelGeometry &g, ClimbDirection d) {
  return d == ClimbDirection::Forward ? g.r_leg : g.r_leg - g.asym_offset;
}

/// Contact angle at which a centre at height z first pivots about the step edge.
/// Below -pi/2 the edge is out of reach until the centre is lifted.
inline double hook_contact_angle(double center_z, double step_height, const WheelGeometry &g) {
  const double ratio = std::clamp((center_z - step_height) / g.r_contact, -1.0, 1.0);
  return std::asin(ratio);
}

/// Centre position at the start of the edge pivot for an axle standing at stance height.
inline SagittalPoint hook_start(double step_height, const WheelGeometry &g) {
  const double z0 = stance_height(g);
  const double alpha0 = hook_contact_angle(z0, step_height, g);
  return {-g.r_contact * std::cos(alpha0), step_height + g.r_contact * std::sin(alpha0)};
}

/// Where the wheeled approach halts: touching the riser, or further back if
/// the pivot has to start further out.
inline double approach_stop(double step_height, const WheelGeometry &g) {
  return std::min(-g.r_wheel, hook_start(step_height, g).s);
}

struct Climbability {
  bool ok = true;
  std::string limiting_factor = "none";
};

/// Hook-and-pivot criterion: a lobe tip must reach over the edge from stance,
/// the edge must come within r_contact once the stance lobe is upright, the
/// worst-case pivot and servo torques must be available, and the chassis must
/// span the rise.
inline Climbability climbable(const WheelGeometry &g, const RobotParams &p, const Obstacle &o) {
  if (o.height <= 0.0)
    return {};
  if (o.height > stance_height(g) + hook_radius(g, o.direction))
    return {false, "hook reach"};
  if (o.height - g.r_contact > g.r_leg)
    return {false, "unreachable contact"};
  const double load = p.f_wheel * std::max(1.0, p.weight_transfer);
  if (required_motor_torque(load, g.r_contact, 0.0) > p.motor_torque_limit)
    return {false, "motor torque"};
  if (required_servo_torque(p.f_wheel, g.l2_max) > p.servo_torque_limit)
    return {false, "servo torque"};
  if (o.height + g.r_contact - g.r_wheel >= p.wheel_base)
    return {false, "chassis pitch"};
  return {};
}

struct PivotResult {
  AxleState axle;
  double required_torque = 0.0; // f_wheel times horizontal lever, + when the centre trails the contact
};

/// Rotates a legged axle's centre clockwise about `contact` by dalpha and
/// returns the quasi-static torque holding the new configuration.
inline PivotResult pivot_step(const AxleState &axle, SagittalPoint contact, double dalpha, const WheelGeometry &g,
                              const RobotParams &p) {
  if (axle.left.mode != WheelMode::Legged || axle.right.mode != WheelMode::Legged)
    throw ModeError("pivot requires legged mode");
  const double reach = distance(axle.center, contact);
  if (reach > effective_radius(axle.left.tilt, g) + 1e-12)
    throw DomainError("contact point beyond the lobe reach");

  const double rel_s = axle.center.s - contact.s;
  const double rel_z = axle.center.z - contact.z;
  const double c = std::cos(dalpha);
  const double s = std::sin(dalpha);

  PivotResult out{axle, 0.0};
  out.axle.center = {contact.s + c * rel_s + s * rel_z, contact.z - s * rel_s + c * rel_z};
  out.axle.left.phase = wrap_phase(axle.left.phase + dalpha);
  out.axle.right.phase = wrap_phase(axle.right.phase + dalpha);
  out.required_torque = p.f_wheel * (contact.s - out.axle.center.s);
  if (std::abs(out.required_torque) > p.motor_torque_limit)
    throw StallError(std::abs(out.required_torque), p.motor_torque_limit);
  return out;
}

} // namespace omniwheg
