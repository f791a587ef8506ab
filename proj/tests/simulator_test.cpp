#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "omniwheg/simulator.hpp"

using namespace omniwheg;

namespace {
constexpr double kPi = std::numbers::pi;

Scenario scenario(double h, ClimbDirection d = ClimbDirection::Forward) {
  Scenario sc;
  sc.obstacle = {h, d};
  return sc;
}

AxleState legged_axle(SagittalPoint center, const WheelGeometry &g) {
  AxleState a;
  a.center = center;
  a.left = make_wheel_state(0.0, g.tilt_max, g);
  a.right = a.left;
  return a;
}

std::string telemetry_csv(const ClimbOutcome &o) {
  std::ostringstream os;
  write_telemetry_csv(os, o.telemetry);
  return os.str();
}
} // namespace

TEST(PivotStep, ContactBelowCentreNeedsNoTorque) {
  const WheelGeometry g;
  const RobotParams p;
  // One step before vertical; the step lands the centre directly above the contact.
  const double d = 1e-3;
  const auto axle = legged_axle({-0.132 * std::sin(d), 0.132 * std::cos(d)}, g);
  const auto r = pivot_step(axle, {0.0, 0.0}, d, g, p);
  EXPECT_NEAR(r.required_torque, 0.0, 1e-12);
}

TEST(PivotStep, LevelContactAtContactRadius) {
  const WheelGeometry g;
  const RobotParams p;
  const auto axle = legged_axle({-0.132, 0.2}, g);
  const auto r = pivot_step(axle, {0.0, 0.2}, 1e-12, g, p);
  EXPECT_NEAR(r.required_torque, 1.779, 1e-3);
}

TEST(PivotStep, TorqueTraceMatchesClosedForm) {
  const WheelGeometry g;
  const RobotParams p;
  const SagittalPoint edge{0.0, 0.2};
  const double d = 1e-3;
  for (int k = 0; k < 100; ++k) {
    const double alpha = (kPi / 2.0) * (k / 99.0);
    const double a0 = alpha - d;
    const auto axle = legged_axle({edge.s - g.r_contact * std::cos(a0), edge.z + g.r_contact * std::sin(a0)}, g);
    const auto r = pivot_step(axle, edge, d, g, p);
    EXPECT_NEAR(r.required_torque, required_motor_torque(p.f_wheel, g.r_contact, alpha), 1e-9) << k;
    EXPECT_NEAR(distance(r.axle.center, edge), g.r_contact, 1e-12);
  }
}

TEST(PivotStep, Errors) {
  const WheelGeometry g;
  RobotParams p;
  auto axle = legged_axle({-0.132, 0.2}, g);
  p.motor_torque_limit = 1.0;
  EXPECT_THROW(pivot_step(axle, {0.0, 0.2}, 0.01, g, p), StallError);
  p = {};
  EXPECT_THROW(pivot_step(axle, {0.2, 0.2}, 0.01, g, p), DomainError);
  axle.left = make_wheel_state(0.0, 0.0, g);
  EXPECT_THROW(pivot_step(axle, {0.0, 0.2}, 0.01, g, p), ModeError);
}

TEST(Climbable, Examples) {
  const WheelGeometry g;
  const RobotParams p;
  EXPECT_TRUE(climbable(g, p, {0.26, ClimbDirection::Forward}).ok);
  const auto back = climbable(g, p, {0.26, ClimbDirection::Backward});
  EXPECT_FALSE(back.ok);
  EXPECT_EQ(back.limiting_factor, "hook reach");
  EXPECT_TRUE(climbable(g, p, {0.0, ClimbDirection::Forward}).ok);
  EXPECT_TRUE(climbable(g, p, {0.0, ClimbDirection::Backward}).ok);
}

TEST(Climbable, TorqueLimits) {
  const WheelGeometry g;
  RobotParams p;
  p.weight_transfer = 2.0;
  EXPECT_EQ(climbable(g, p, {0.2, ClimbDirection::Forward}).limiting_factor, "motor torque");
  p = {};
  p.servo_torque_limit = 0.5;
  EXPECT_EQ(climbable(g, p, {0.2, ClimbDirection::Forward}).limiting_factor, "servo torque");
}

TEST(Simulate, FlatGround) {
  const auto o = simulate(scenario(0.0));
  EXPECT_TRUE(o.success);
  for (const auto &pt : o.trajectory)
    EXPECT_EQ(pt.z, 0.095);
  const RobotParams p;
  EXPECT_NEAR(o.peak_torque, p.rolling_resistance * p.f_wheel * 0.095, 1e-12);
}

TEST(Simulate, TwentyFourForward) {
  const Scenario sc = scenario(0.24);
  const auto o = simulate(sc);
  EXPECT_TRUE(o.success);
  EXPECT_GE(o.peak_torque, 1.2);
  EXPECT_LE(o.peak_torque, 1.779 + 1e-3);
  EXPECT_NEAR(o.final_state.front.center.z, 0.24 + 0.095, 1e-6);
  EXPECT_NEAR(o.final_state.rear.center.z, 0.24 + 0.095, 1e-6);
  EXPECT_EQ(o.limiting_factor, "none");
}

TEST(Simulate, TwentySixBackwardFails) {
  const auto o = simulate(scenario(0.26, ClimbDirection::Backward));
  EXPECT_FALSE(o.success);
  EXPECT_EQ(o.limiting_factor, "hook reach");
  ASSERT_TRUE(o.failure_reason);
  EXPECT_EQ(*o.failure_reason, "hook reach");
}

TEST(Simulate, TelemetryInvariants) {
  const WheelGeometry g;
  const RobotParams p;
  for (double h : {0.12, 0.18, 0.24, 0.26}) {
    const Scenario sc = scenario(h);
    const auto o = simulate(sc);
    ASSERT_TRUE(o.success) << h;
    const double bound = p.f_wheel * g.r_contact;
    const double max_move = effective_radius(g.tilt_max, g) * sc.dalpha + 1e-9;
    bool pivoting_seen = false;
    for (std::size_t i = 0; i < o.telemetry.size(); ++i) {
      const auto &s = o.telemetry[i];
      for (std::size_t m = 0; m < 4; ++m) {
        EXPECT_LE(std::abs(s.torque[m]), bound + 1e-12);
        EXPECT_EQ(s.torque[m], s.current[m] * p.torque_constant);
      }
      if (i == 0)
        continue;
      const auto &prev = o.telemetry[i - 1];
      EXPECT_LE(distance(prev.front, s.front), max_move) << h << " sample " << i;
      EXPECT_GE(s.t, prev.t);
      if (s.phase == ClimbPhase::ClimbFront && prev.phase == ClimbPhase::ClimbFront) {
        pivoting_seen = true;
        EXPECT_GE(s.front.z, prev.front.z - 1e-12) << h << " sample " << i;
      }
    }
    EXPECT_TRUE(pivoting_seen);
  }
}

TEST(Simulate, Deterministic) {
  Scenario sc = scenario(0.22, ClimbDirection::Backward);
  sc.randomize_phases = true;
  sc.seed = 5;
  EXPECT_EQ(telemetry_csv(simulate(sc)), telemetry_csv(simulate(sc)));
  Scenario other = sc;
  other.seed = 6;
  EXPECT_NE(telemetry_csv(simulate(sc)), telemetry_csv(simulate(other)));
}

TEST(Simulate, BackwardSuccessImpliesForward) {
  for (int cm = 0; cm <= 40; ++cm) {
    const double h = cm / 100.0;
    if (simulate(scenario(h, ClimbDirection::Backward)).success) {
      EXPECT_TRUE(simulate(scenario(h)).success) << h;
    }
  }
}

TEST(Simulate, FinerStepAgrees) {
  Scenario sc = scenario(0.20);
  const auto coarse = simulate(sc);
  sc.dalpha /= 4.0;
  const auto fine = simulate(sc);
  EXPECT_TRUE(fine.success);
  EXPECT_GT(fine.telemetry.size(), coarse.telemetry.size());
  EXPECT_NEAR(fine.peak_torque, coarse.peak_torque, 1e-3);
}

TEST(SimulateAlignment, FortyFiveDegrees) {
  const Scenario base;
  const auto run = simulate_alignment(kPi / 4.0, 0.0, base);
  EXPECT_EQ(run.rounds, 1);
  EXPECT_NEAR(run.commanded, 0.0373, 1e-4);
  EXPECT_NEAR(run.achieved, run.commanded * (1.0 - base.slip), 1e-15);
  EXPECT_TRUE(run.converged);
}

TEST(SimulateAlignment, AlreadyAligned) {
  const auto run = simulate_alignment(0.7, 0.7 + kPi / 2.0, Scenario{});
  EXPECT_EQ(run.commanded, 0.0);
  EXPECT_TRUE(run.converged);
}

TEST(Output, TelemetryHeaderAndFormat) {
  const auto o = simulate(scenario(0.0));
  const auto csv = telemetry_csv(o);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTelemetryHeader);
  EXPECT_EQ(csv.back(), '\n');
  EXPECT_EQ(format_sig9(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_sig9(-0.0), "0");
}
