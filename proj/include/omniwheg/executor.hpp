#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "omniwheg/actions.hpp"
#include "omniwheg/climb_model.hpp"
#include "omniwheg/kinematics.hpp"
#include "omniwheg/scenario.hpp"
#include "omniwheg/statics.hpp"

namespace omniwheg {

/// Modeled failure while executing an action (stall, unreachable contact, tip-over, ...).
class ExecutionFailure : public std::runtime_error {
public:
  explicit ExecutionFailure(std::string reason) : std::runtime_error(reason), reason_(std::move(reason)) {}
  const std::string &reason() const { return reason_; }

private:
  std::string reason_;
};

struct TelemetrySample {
  double t = 0.0;
  std::array<double, 4> current{}; // A, FL FR RL RR
  std::array<double, 4> torque{};  // N*m, current * torque_constant
  SagittalPoint front;
  ClimbPhase phase = ClimbPhase::SquareUp;
};

/// Lateral-move bookkeeping for one alignment phase.
struct AlignmentTally {
  int moves = 0;
  double commanded = 0.0; // sum of |commanded dx|
  double achieved = 0.0;  // sum of |achieved dx|
};

/// Starting pose: wheeled, square-on except for the scenario heading error,
/// front axle `approach` metres short of the riser.
inline RobotState initial_state(const Scenario &sc) {
  const auto &g = sc.geometry;
  std::array<double, 4> phases = sc.initial_phases;
  if (sc.randomize_phases) {
    std::mt19937_64 rng(sc.seed);
    // Explicit 53-bit conversion keeps the draw identical across standard libraries.
    for (double &ph : phases)
      ph = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
  }
  RobotState st;
  st.pose.heading = wrap_heading(sc.heading);
  st.front.center = {-sc.approach, g.r_wheel};
  st.rear.center = {-sc.approach - sc.params.wheel_base, g.r_wheel};
  st.front.left = make_wheel_state(phases[0], 0.0, g);
  st.front.right = make_wheel_state(phases[1], 0.0, g);
  st.rear.left = make_wheel_state(phases[2], 0.0, g);
  st.rear.right = make_wheel_state(phases[3], 0.0, g);
  st.pose.y = 0.5 * (st.front.center.s + st.rear.center.s);
  return st;
}

/// Applies planner actions to the sagittal quasi-static model. Each motion is
/// split into steps of at most dalpha of wheel (or tilt) rotation; one
/// telemetry sample is taken per step when recording is enabled.
class Executor {
public:
  Executor(const Scenario &sc, RobotState start, bool record)
      : sc_(sc), g_(sc.geometry), p_(sc.params), state_(start), record_(record),
        drive_sign_(sc.obstacle.direction == ClimbDirection::Forward ? 1.0 : -1.0) {
    if (record_)
      sample(ClimbPhase::SquareUp, {});
  }

  Executor(const Scenario &sc, bool record) : Executor(sc, initial_state(sc), record) {}

  const RobotState &state() const { return state_; }
  const std::vector<TelemetrySample> &telemetry() const { return telemetry_; }
  std::vector<TelemetrySample> take_telemetry() { return std::move(telemetry_); }
  const std::map<ClimbPhase, AlignmentTally> &alignment() const { return alignment_; }
  int interlock_violations() const { return interlock_violations_; }
  double time() const { return t_; }

  void apply(const Action &a) {
    switch (a.kind) {
    case ActionKind::Stop: state_.speeds = {}; break;
    case ActionKind::Rotate: rotate(a); break;
    case ActionKind::LateralMove: lateral(a); break;
    case ActionKind::Drive:
      if (a.axle == Axle::Both)
        roll(a);
      else
        climb(a);
      break;
    case ActionKind::Transform: transform(a); break;
    }
    state_.pose.y = 0.5 * (state_.front.center.s + state_.rear.center.s);
  }

private:
  // Motor-frame sign of "toward the obstacle" for wheel i.
  double motor_sign(std::size_t i) const { return kForwardSign[i] * drive_sign_; }

  double rolling_torque(double load) const { return p_.rolling_resistance * load * g_.r_wheel; }

  void sample(ClimbPhase phase, const std::array<double, 4> &required) {
    if (!record_)
      return;
    TelemetrySample s;
    s.t = t_;
    s.front = state_.front.center;
    s.phase = phase;
    for (std::size_t i = 0; i < 4; ++i) {
      s.current[i] = required[i] / p_.torque_constant;
      s.torque[i] = torque_from_current(s.current[i], p_.torque_constant);
    }
    telemetry_.push_back(s);
  }

  void check_modes_wheeled() const {
    for (WheelMode m : state_.modes())
      if (m != WheelMode::Wheeled)
        throw ExecutionFailure("drive commanded outside wheeled mode");
  }

  void turn_wheels(const std::array<double, 4> &dtheta) {
    state_.front.left.phase = wrap_phase(state_.front.left.phase + dtheta[0]);
    state_.front.right.phase = wrap_phase(state_.front.right.phase + dtheta[1]);
    state_.rear.left.phase = wrap_phase(state_.rear.left.phase + dtheta[2]);
    state_.rear.right.phase = wrap_phase(state_.rear.right.phase + dtheta[3]);
  }

  static WheelSpeeds unit_rate(const std::array<double, 4> &rotation) {
    double peak = 0.0;
    for (double r : rotation)
      peak = std::max(peak, std::abs(r));
    if (peak == 0.0)
      return {};
    std::array<double, 4> w{};
    for (std::size_t i = 0; i < 4; ++i)
      w[i] = rotation[i] / peak;
    return WheelSpeeds::from_array(w);
  }

  static std::size_t step_count(double amount, double step) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(amount / step - 1e-12)));
  }

  // In-place wheel motion (yaw or lateral). `on_step` updates the body pose.
  template <typename OnStep>
  void spin_in_place(const std::array<double, 4> &rotation, ClimbPhase phase, OnStep on_step) {
    double peak = 0.0;
    for (double r : rotation)
      peak = std::max(peak, std::abs(r));
    if (peak == 0.0) {
      state_.speeds = {};
      return;
    }
    const std::size_t n = step_count(peak, sc_.dalpha);
    std::array<double, 4> per_step{};
    std::array<double, 4> torque{};
    for (std::size_t i = 0; i < 4; ++i) {
      per_step[i] = rotation[i] / static_cast<double>(n);
      torque[i] = rotation[i] == 0.0 ? 0.0 : std::copysign(rolling_torque(p_.f_wheel), rotation[i]);
    }
    for (std::size_t k = 0; k < n; ++k) {
      turn_wheels(per_step);
      on_step(1.0 / static_cast<double>(n));
      t_ += peak / static_cast<double>(n);
      sample(phase, torque);
    }
    state_.speeds = unit_rate(rotation);
  }

  void rotate(const Action &a) {
    check_modes_wheeled();
    const auto w = inverse_mix({0.0, 0.0, a.magnitude}, g_, p_, state_.modes()).as_array();
    const double start = state_.pose.heading;
    double done = 0.0;
    spin_in_place(w, a.phase, [&](double frac) {
      done += frac;
      state_.pose.heading = wrap_heading(start + a.magnitude * done);
    });
    state_.pose.heading = wrap_heading(start + a.magnitude);
  }

  void lateral(const Action &a) {
    check_modes_wheeled();
    const double dx = a.magnitude;
    const double achieved = apply_slip(dx, sc_.slip);
    auto &tally = alignment_[a.phase];
    ++tally.moves;
    tally.commanded += std::abs(dx);
    tally.achieved += std::abs(achieved);
    const auto w = inverse_mix({dx, 0.0, 0.0}, g_, p_, state_.modes()).as_array();
    spin_in_place(w, a.phase, [&](double frac) { state_.pose.x += achieved * frac; });
  }

  void roll_follower(AxleState &axle, double ds, std::size_t first_wheel) {
    const double dtheta = ds / g_.r_wheel;
    axle.center.s += ds;
    axle.left.phase = wrap_phase(axle.left.phase + motor_sign(first_wheel) * dtheta);
    axle.right.phase = wrap_phase(axle.right.phase + motor_sign(first_wheel + 1) * dtheta);
  }

  void roll(const Action &a) {
    check_modes_wheeled();
    const std::size_t n = step_count(a.magnitude, sc_.dalpha);
    const double ds = a.magnitude * g_.r_wheel / static_cast<double>(n);
    std::array<double, 4> torque{};
    for (std::size_t i = 0; i < 4; ++i)
      torque[i] = motor_sign(i) * rolling_torque(p_.f_wheel);
    for (std::size_t k = 0; k < n; ++k) {
      roll_follower(state_.front, ds, 0);
      roll_follower(state_.rear, ds, 2);
      t_ += a.magnitude / static_cast<double>(n);
      sample(a.phase, torque);
    }
    state_.speeds = unit_rate({motor_sign(0), motor_sign(1), motor_sign(2), motor_sign(3)});
  }

  // Keeps the chassis rigid: the non-climbing axle rolls on its support so the
  // axle spacing stays wheel_base.
  void follow(bool front_is_active) {
    AxleState &active = front_is_active ? state_.front : state_.rear;
    AxleState &other = front_is_active ? state_.rear : state_.front;
    const double dz = active.center.z - other.center.z;
    const double L = p_.wheel_base;
    if (std::abs(dz) >= L)
      throw ExecutionFailure("tip-over");
    const double span = std::sqrt(L * L - dz * dz);
    const double target_s = front_is_active ? active.center.s - span : active.center.s + span;
    roll_follower(other, target_s - other.center.s, front_is_active ? 2 : 0);
  }

  // Static support test in the sagittal plane: the chassis centre must project
  // between the ground contacts.
  void check_support(double active_contact_s, bool front_is_active) const {
    const double com = 0.5 * (state_.front.center.s + state_.rear.center.s);
    const double other_s = front_is_active ? state_.rear.center.s : state_.front.center.s;
    const double lo = std::min(active_contact_s, other_s);
    const double hi = std::max(active_contact_s, other_s);
    if (com < lo - 1e-12 || com > hi + 1e-12)
      throw ExecutionFailure("tip-over");
  }

  std::array<double, 4> axle_torques(bool front_is_active, double active, double other) const {
    std::array<double, 4> tau{};
    for (std::size_t i = 0; i < 4; ++i) {
      const bool is_front = i < 2;
      tau[i] = motor_sign(i) * (is_front == front_is_active ? active : other);
    }
    return tau;
  }

  void climb(const Action &a) {
    const bool front = a.axle == Axle::Front;
    AxleState &axle = front ? state_.front : state_.rear;
    const double h = sc_.obstacle.height;
    RobotParams load_params = p_;
    if (front)
      load_params.f_wheel *= p_.weight_transfer;
    const double load = load_params.f_wheel;
    const double roll_other = rolling_torque(p_.f_wheel);

    if (axle.mode() != WheelMode::Legged)
      throw ExecutionFailure("climb commanded outside legged mode");
    if (h > axle.center.z + hook_radius(g_, sc_.obstacle.direction))
      throw ExecutionFailure("hook reach");

    // Draw the centre to the pivot start, lifting on the stance lobe if the
    // edge is more than r_contact above the axle.
    const double alpha0 = hook_contact_angle(axle.center.z, h, g_);
    const SagittalPoint start = axle.center;
    const SagittalPoint target{-g_.r_contact * std::cos(alpha0), h + g_.r_contact * std::sin(alpha0)};
    const double path = distance(start, target);
    if (path > 0.0) {
      const std::size_t n = step_count(path, g_.r_leg * sc_.dalpha);
      for (std::size_t k = 1; k <= n; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n);
        const double prev_z = axle.center.z;
        axle.center = {start.s + (target.s - start.s) * f, start.z + (target.z - start.z) * f};
        double tau = rolling_torque(load);
        if (axle.center.z > prev_z) {
          if (axle.center.z > g_.r_leg + 1e-12 && axle.center.z > start.z)
            throw ExecutionFailure("unreachable contact");
          tau = load * std::sqrt(std::max(0.0, g_.r_leg * g_.r_leg - axle.center.z * axle.center.z));
        }
        if (tau > p_.motor_torque_limit)
          throw ExecutionFailure("stall");
        follow(front);
        check_support(axle.center.s, front);
        t_ += path / static_cast<double>(n) / g_.r_leg;
        sample(a.phase, axle_torques(front, tau, roll_other));
      }
    }

    const SagittalPoint edge{0.0, h};
    double remaining = a.magnitude;
    while (remaining > 1e-15) {
      const double step = std::min(sc_.dalpha, remaining);
      PivotResult r;
      try {
        r = pivot_step(axle, edge, step, g_, load_params);
      } catch (const StallError &) {
        throw ExecutionFailure("stall");
      }
      axle = r.axle;
      remaining -= step;
      follow(front);
      check_support(edge.s, front);
      t_ += step;
      sample(a.phase, axle_torques(front, r.required_torque, roll_other));
    }
    axle.on_top = true;
    std::array<double, 4> moving{};
    for (std::size_t i = 0; i < 4; ++i)
      moving[i] = motor_sign(i);
    state_.speeds = WheelSpeeds::from_array(moving);
  }

  void transform(const Action &a) {
    const bool front = a.axle == Axle::Front;
    AxleState &axle = front ? state_.front : state_.rear;
    if (!state_.speeds.is_zero())
      ++interlock_violations_;

    const double tilt0 = axle.left.tilt;
    const double tilt1 = a.magnitude;
    const double support = axle.on_top ? sc_.obstacle.height : 0.0;
    const double z0 = axle.center.z;
    const double z1 = support + (tilt1 >= g_.tilt_max ? stance_height(g_) : g_.r_wheel);
    const double span = std::abs(tilt1 - tilt0);
    const std::size_t n = span > 0.0 ? step_count(span, sc_.dalpha) : 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(n);
      const double tilt = k == n ? tilt1 : tilt0 + (tilt1 - tilt0) * f;
      const double servo = required_servo_torque(p_.f_wheel, servo_lever_arm(std::min(tilt0, tilt), g_));
      if (servo > p_.servo_torque_limit)
        throw ExecutionFailure("servo torque");
      axle.left.tilt = axle.right.tilt = tilt;
      axle.left.mode = axle.right.mode = k == n ? mode_for_tilt(tilt, g_) : WheelMode::Transforming;
      axle.center.z = k == n ? z1 : z0 + (z1 - z0) * f;
      follow(front);
      check_support(axle.center.s, front);
      t_ += span / static_cast<double>(n);
      sample(a.phase, {});
    }
    axle.left.mode = axle.right.mode = mode_for_tilt(tilt1, g_);
  }

  Scenario sc_;
  WheelGeometry g_;
  RobotParams p_;
  RobotState state_;
  bool record_;
  double drive_sign_;
  double t_ = 0.0;
  std::vector<TelemetrySample> telemetry_;
  std::map<ClimbPhase, AlignmentTally> alignment_;
  int interlock_violations_ = 0;
};

} // namespace omniwheg
