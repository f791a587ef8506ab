#pragma once

#include <cmath>
#include <numbers>

#include "omniwheg/errors.hpp"
#include "omniwheg/geometry.hpp"

namespace omniwheg {

inline constexpr double kGravity = 9.81;

/// Whole-robot mass spread evenly over four wheels.
inline double per_wheel_load(double mass_total) { return mass_total * kGravity / 4.0; }

struct RobotParams {
  double mass_total = 5.5;         // kg
  double f_wheel = 13.48;          // N, per-wheel load
  double torque_constant = 0.741;  // N*m / A, drive motor
  double motor_torque_limit = 3.0; // N*m
  double servo_torque_limit = 2.0; // N*m
  double track_width = 0.39;       // m, left-right wheel spacing
  double wheel_base = 0.32;        // m, front-rear axle spacing
  double rolling_resistance = 0.03; // dimensionless, wheeled-mode rolling torque = c * f_wheel * r_wheel
  double weight_transfer = 1.0;    // front-axle load factor while the front axle climbs

  friend bool operator==(const RobotParams &, const RobotParams &) = default;
};

inline void validate(const RobotParams &p) {
  if (!(p.mass_total > 0.0))
    throw DomainError("mass_total must be positive");
  if (!(p.f_wheel > 0.0))
    throw DomainError("f_wheel must be positive");
  if (!(p.torque_constant > 0.0))
    throw DomainError("torque_constant must be positive");
  if (!(p.motor_torque_limit > 0.0) || !(p.servo_torque_limit > 0.0))
    throw DomainError("torque limits must be positive");
  if (!(p.track_width > 0.0) || !(p.wheel_base > 0.0))
    throw DomainError("chassis dimensions must be positive");
  if (!(p.rolling_resistance >= 0.0))
    throw DomainError("rolling_resistance must be non-negative");
  if (!(p.weight_transfer > 0.0))
    throw DomainError("weight_transfer must be positive");
}

/// Motor torque needed to hold the wheel against the step edge at contact
/// angle alpha (0 = contact level with the axle, pi/2 = contact straight below).
inline double required_motor_torque(double f_wheel, double r_contact, double alpha) {
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 2.0))
    throw DomainError("contact angle outside [0, pi/2]");
  if (!(r_contact > 0.0))
    throw DomainError("r_contact must be positive");
  if (alpha == std::numbers::pi / 2.0)
    return 0.0;
  return f_wheel * r_contact * std::cos(alpha);
}

/// Servo torque needed to open the lobes against the wheel load at lever arm l2.
inline double required_servo_torque(double f_wheel, double l2) {
  if (!(l2 >= 0.0))
    throw DomainError("servo lever arm must be non-negative");
  return f_wheel * l2;
}

inline double torque_from_current(double current, double torque_constant) {
  return current * torque_constant;
}

struct FeasibilityReport {
  double motor_required = 0.0;
  double servo_required = 0.0;
  double motor_limit = 0.0;
  double servo_limit = 0.0;
  bool motor_ok = false;
  bool servo_ok = false;

  bool ok() const { return motor_ok && servo_ok; }
};

/// Worst cases: motor at alpha = 0, servo with the wheel fully closed.
/// An actuator passes only when its limit strictly exceeds the requirement.
inline FeasibilityReport feasibility_report(const WheelGeometry &g, const RobotParams &p) {
  FeasibilityReport r;
  r.motor_required = required_motor_torque(p.f_wheel, g.r_contact, 0.0);
  r.servo_required = required_servo_torque(p.f_wheel, g.l2_max);
  r.motor_limit = p.motor_torque_limit;
  r.servo_limit = p.servo_torque_limit;
  r.motor_ok = r.motor_limit > r.motor_required;
  r.servo_ok = r.servo_limit > r.servo_required;
  return r;
}

} // namespace omniwheg
