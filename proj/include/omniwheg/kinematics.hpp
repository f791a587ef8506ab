#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "omniwheg/errors.hpp"
#include "omniwheg/geometry.hpp"
#include "omniwheg/statics.hpp"

namespace omniwheg {

// Conventions
//   Body twist: vx lateral (+ toward the robot's right), vy longitudinal
//   (+ forward), omega yaw rate (+ counter-clockwise seen from above).
//   Wheel speeds are in each motor's own frame. The rear motors are mounted
//   mirrored, so a pure lateral shift reads +vx/r on both left wheels and
//   -vx/r on both right wheels, and forward driving reads + on the front
//   pair and - on the rear pair. Rollers are in the X arrangement and the
//   yaw lever is (track_width + wheel_base) / 2.

struct BodyTwist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  friend bool operator==(const BodyTwist &, const BodyTwist &) = default;
};

struct WheelSpeeds {
  double w_fl = 0.0;
  double w_fr = 0.0;
  double w_rl = 0.0;
  double w_rr = 0.0;

  friend bool operator==(const WheelSpeeds &, const WheelSpeeds &) = default;

  std::array<double, 4> as_array() const { return {w_fl, w_fr, w_rl, w_rr}; }
  static WheelSpeeds from_array(const std::array<double, 4> &w) { return {w[0], w[1], w[2], w[3]}; }
  bool is_zero() const { return w_fl == 0.0 && w_fr == 0.0 && w_rl == 0.0 && w_rr == 0.0; }
};

/// Motor-frame sign of forward driving for FL, FR, RL, RR.
inline constexpr std::array<double, 4> kForwardSign{1.0, 1.0, -1.0, -1.0};

inline double yaw_lever(const RobotParams &p) { return 0.5 * (p.track_width + p.wheel_base); }

inline WheelSpeeds inverse_mix(const BodyTwist &t, const WheelGeometry &g, const RobotParams &p,
                               const std::array<WheelMode, 4> &modes = {}) {
  for (WheelMode m : modes)
    if (m != WheelMode::Wheeled)
      throw ModeError("Mecanum mixing requires all wheels in wheeled mode");
  const double k = yaw_lever(p);
  const double r = g.r_wheel;
  return {(t.vx + t.vy - k * t.omega) / r, (-t.vx + t.vy + k * t.omega) / r,
          (t.vx - t.vy + k * t.omega) / r, (-t.vx - t.vy - k * t.omega) / r};
}

// The three mixer columns are mutually orthogonal, so the least-squares
// inverse is a projection onto each column.
inline BodyTwist forward_mix(const WheelSpeeds &w, const WheelGeometry &g, const RobotParams &p) {
  const double k = yaw_lever(p);
  const double r = g.r_wheel;
  return {r * (w.w_fl - w.w_fr + w.w_rl - w.w_rr) / 4.0, r * (w.w_fl + w.w_fr - w.w_rl - w.w_rr) / 4.0,
          r * (-w.w_fl + w.w_fr + w.w_rl - w.w_rr) / (4.0 * k)};
}

enum class LateralDirection { Left, Right };

inline const char *to_string(LateralDirection d) { return d == LateralDirection::Left ? "left" : "right"; }

struct AlignmentCommand {
  double delta_theta_wheel = 0.0; // signed; left wheels turn by -this, right wheels by +this
  double delta_x = 0.0;           // lateral body displacement magnitude
  LateralDirection direction = LateralDirection::Left;

  /// Displacement along +vx (toward the right).
  double signed_delta_x() const { return direction == LateralDirection::Right ? delta_x : -delta_x; }
};

/// Left-right phase difference reduced to (-period/2, period/2], period = 2*pi / lobe_count.
inline double wrapped_phase_difference(double phase_left, double phase_right, const WheelGeometry &g) {
  const double period = g.lobe_period();
  const double diff = phase_left - phase_right;
  double wrapped = diff - period * std::ceil((diff - 0.5 * period) / period);
  // Guard rounding at the open end of the interval.
  if (wrapped <= -0.5 * period)
    wrapped += period;
  return wrapped;
}

/// Lateral shift that removes the lobe misalignment between a left and right wheel.
/// Both sides counter-rotate, so each wheel turns half of the wrapped difference.
inline AlignmentCommand alignment_correction(double phase_left, double phase_right, const WheelGeometry &g) {
  const double wrapped = wrapped_phase_difference(phase_left, phase_right, g);
  AlignmentCommand cmd;
  cmd.delta_theta_wheel = 0.5 * wrapped;
  cmd.delta_x = g.r_wheel * std::abs(cmd.delta_theta_wheel);
  cmd.direction = cmd.delta_theta_wheel < 0.0 ? LateralDirection::Right : LateralDirection::Left;
  return cmd;
}

/// Body displacement actually achieved when the wheels slip on the ground.
inline double apply_slip(double commanded_dx, double slip_coefficient) {
  if (!(slip_coefficient >= 0.0 && slip_coefficient < 1.0))
    throw DomainError("slip coefficient outside [0, 1)");
  return commanded_dx * (1.0 - slip_coefficient);
}

} // namespace omniwheg
