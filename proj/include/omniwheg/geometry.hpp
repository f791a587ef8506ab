#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "omniwheg/errors.hpp"

namespace omniwheg {

/// Point in the sagittal plane: s is horizontal (toward the obstacle), z is vertical.
struct SagittalPoint {
  double s = 0.0;
  double z = 0.0;

  friend bool operator==(const SagittalPoint &, const SagittalPoint &) = default;
};

inline double distance(const SagittalPoint &a, const SagittalPoint &b) {
  return std::hypot(a.s - b.s, a.z - b.z);
}

/// Shape parameters of one transformable wheel. Lengths in metres, angles in radians.
struct WheelGeometry {
  double r_wheel = 0.095;   // closed (wheeled) radius
  double r_leg = 0.150;     // fully open (legged) radius
  double r_contact = 0.132; // centre-to-contact length while climbing
  double l2_max = 0.065;    // servo lever arm, fully closed
  int lobe_count = 4;
  double tilt_max = std::numbers::pi / 3.0;
  double servo_max = std::numbers::pi / 2.0; // servo travel mapped onto [0, tilt_max]
  double asym_offset = 0.02;                 // hook radius reduction when climbing backward

  friend bool operator==(const WheelGeometry &, const WheelGeometry &) = default;

  /// Lobe symmetry period, 2*pi / lobe_count.
  double lobe_period() const { return 2.0 * std::numbers::pi / lobe_count; }
};

/// Throws DomainError naming the first violated invariant.
inline void validate(const WheelGeometry &g) {
  if (!(g.r_wheel > 0.0))
    throw DomainError("r_wheel must be positive");
  if (!(g.r_wheel < g.r_contact))
    throw DomainError("r_contact must exceed r_wheel");
  if (!(g.r_contact <= g.r_leg))
    throw DomainError("r_contact must not exceed r_leg");
  if (g.lobe_count < 2)
    throw DomainError("lobe_count must be at least 2");
  if (!(g.tilt_max > 0.0 && g.tilt_max <= std::numbers::pi / 2.0))
    throw DomainError("tilt_max must lie in (0, pi/2]");
  if (!(g.l2_max > 0.0))
    throw DomainError("l2_max must be positive");
  if (!(g.servo_max > 0.0))
    throw DomainError("servo_max must be positive");
  if (!(g.asym_offset >= 0.0 && g.asym_offset < g.r_leg))
    throw DomainError("asym_offset must lie in [0, r_leg)");
}

enum class WheelMode { Wheeled, Transforming, Legged };

inline const char *to_string(WheelMode m) {
  switch (m) {
  case WheelMode::Wheeled: return "Wheeled";
  case WheelMode::Transforming: return "Transforming";
  case WheelMode::Legged: return "Legged";
  }
  return "?";
}

struct WheelState {
  double phase = 0.0; // [0, 2*pi)
  double tilt = 0.0;  // [0, tilt_max]
  WheelMode mode = WheelMode::Wheeled;

  friend bool operator==(const WheelState &, const WheelState &) = default;
};

/// Wraps an angle into [0, 2*pi).
inline double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle, two_pi);
  if (w < 0.0)
    w += two_pi;
  if (w >= two_pi)
    w = 0.0;
  return w;
}

/// Mode implied by a tilt value; endpoints are exact.
inline WheelMode mode_for_tilt(double tilt, const WheelGeometry &g) {
  if (tilt <= 0.0)
    return WheelMode::Wheeled;
  if (tilt >= g.tilt_max)
    return WheelMode::Legged;
  return WheelMode::Transforming;
}

inline WheelState make_wheel_state(double phase, double tilt, const WheelGeometry &g) {
  if (!(tilt >= 0.0 && tilt <= g.tilt_max))
    throw DomainError("tilt outside [0, tilt_max]");
  return WheelState{wrap_phase(phase), tilt, mode_for_tilt(tilt, g)};
}

// The central disc drives all lobes through identical four-bar linkages. Link
// lengths are not published, so the servo-to-tilt coupling is a linear map
// pinned at both endpoints.
inline double tilt_from_servo(double servo_angle, const WheelGeometry &g) {
  if (!(servo_angle >= 0.0 && servo_angle <= g.servo_max))
    throw DomainError("servo angle outside [0, servo_max]");
  if (servo_angle == g.servo_max)
    return g.tilt_max;
  return g.tilt_max * (servo_angle / g.servo_max);
}

inline double servo_from_tilt(double tilt, const WheelGeometry &g) {
  if (!(tilt >= 0.0 && tilt <= g.tilt_max))
    throw DomainError("tilt outside [0, tilt_max]");
  if (tilt == g.tilt_max)
    return g.servo_max;
  return g.servo_max * (tilt / g.tilt_max);
}

/// Lobe-tip radius at a given tilt; linear between r_wheel (closed) and r_leg (open).
inline double effective_radius(double tilt, const WheelGeometry &g) {
  if (!(tilt >= 0.0 && tilt <= g.tilt_max))
    throw DomainError("tilt outside [0, tilt_max]");
  if (tilt == g.tilt_max)
    return g.r_leg;
  return g.r_wheel + (g.r_leg - g.r_wheel) * (tilt / g.tilt_max);
}

/// Servo lever arm; largest when the wheel is fully closed.
inline double servo_lever_arm(double tilt, const WheelGeometry &g) {
  if (!(tilt >= 0.0 && tilt <= g.tilt_max))
    throw DomainError("tilt outside [0, tilt_max]");
  return g.l2_max * (1.0 - tilt / g.tilt_max);
}

/// Lobe tips of one wheel. Phase 0 puts a lobe straight down; increasing phase
/// is forward rolling (clockwise when s points right and z up).
inline std::vector<SagittalPoint> lobe_tip_positions(const WheelState &state, const WheelGeometry &g,
                                                     SagittalPoint center) {
  const double radius = effective_radius(state.tilt, g);
  const double spacing = g.lobe_period();
  std::vector<SagittalPoint> tips;
  tips.reserve(static_cast<std::size_t>(g.lobe_count));
  for (int k = 0; k < g.lobe_count; ++k) {
    const double angle = -std::numbers::pi / 2.0 - state.phase + spacing * k;
    tips.push_back({center.s + radius * std::cos(angle), center.z + radius * std::sin(angle)});
  }
  return tips;
}

} // namespace omniwheg
