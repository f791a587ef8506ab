#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omniwheg/actions.hpp"
#include "omniwheg/climb_model.hpp"
#include "omniwheg/errors.hpp"
#include "omniwheg/executor.hpp"
#include "omniwheg/kinematics.hpp"
#include "omniwheg/scenario.hpp"

namespace omniwheg {

/// Wheels count as aligned below one degree of wrapped phase difference.
inline constexpr double kAlignTolerance = std::numbers::pi / 180.0;
inline constexpr int kMaxAlignRounds = 3;
inline constexpr double kPositionTolerance = 1e-9;

struct PlannerState {
  ClimbPhase phase = ClimbPhase::SquareUp;
  int align_rounds = 0;
  std::string failure_reason;
};

struct PlannerStep {
  Action action;
  PlannerState next;
};

namespace detail {

inline bool is_terminal(ClimbPhase p) { return p == ClimbPhase::Done || p == ClimbPhase::Failed; }

inline PlannerStep fail(ClimbPhase phase, std::string reason) {
  return {Action{ActionKind::Stop, Axle::Both, 0.0, phase}, PlannerState{ClimbPhase::Failed, 0, std::move(reason)}};
}

} // namespace detail

/// One step of the obstacle-negotiation state machine: square up, then for the
/// front axle and then the rear axle: align laterally, unfold, climb, fold.
/// Returns the action to execute (tagged with the phase that emitted it) and
/// the state to call with next. Transforms are emitted only on a stationary,
/// aligned axle; otherwise a Stop is emitted first.
inline PlannerStep next_action(const PlannerState &ps, const RobotState &robot, const Obstacle &obstacle,
                               const WheelGeometry &g, const RobotParams &p) {
  using detail::fail;
  if (detail::is_terminal(ps.phase))
    throw std::logic_error("next_action called in a terminal phase");

  const double h = obstacle.height;
  const bool flat = h <= 0.0;
  PlannerState st = ps;

  auto advance = [&](ClimbPhase next) {
    st.phase = next;
    st.align_rounds = 0;
  };
  auto emit = [&](ActionKind kind, Axle axle, double magnitude, ClimbPhase next) {
    PlannerStep step{Action{kind, axle, magnitude, st.phase}, st};
    if (next != st.phase) {
      step.next.phase = next;
      step.next.align_rounds = 0;
    }
    return step;
  };

  for (;;) {
    switch (st.phase) {
    case ClimbPhase::SquareUp: {
      if (const auto c = climbable(g, p, obstacle); !c.ok)
        return fail(st.phase, c.limiting_factor);
      if (std::abs(robot.pose.heading) > 1e-12)
        return emit(ActionKind::Rotate, Axle::Body, -robot.pose.heading, ClimbPhase::SquareUp);
      if (flat) {
        const double target = p.wheel_base + g.r_wheel;
        const double gap = target - robot.front.center.s;
        if (gap > kPositionTolerance)
          return emit(ActionKind::Drive, Axle::Both, gap / g.r_wheel, ClimbPhase::Done);
        return {Action{ActionKind::Stop, Axle::Both, 0.0, st.phase}, PlannerState{ClimbPhase::Done, 0, {}}};
      }
      const double gap = approach_stop(h, g) - robot.front.center.s;
      if (gap > kPositionTolerance)
        return emit(ActionKind::Drive, Axle::Both, gap / g.r_wheel, ClimbPhase::AlignFront);
      advance(ClimbPhase::AlignFront);
      break;
    }

    case ClimbPhase::AlignFront:
    case ClimbPhase::AlignRear: {
      const bool front = st.phase == ClimbPhase::AlignFront;
      const AxleState &axle = front ? robot.front : robot.rear;
      const ClimbPhase after = front ? ClimbPhase::TransformFront : ClimbPhase::TransformRear;
      const double wrapped = wrapped_phase_difference(axle.left.phase, axle.right.phase, g);
      if (std::abs(wrapped) < kAlignTolerance) {
        if (st.align_rounds == 0)
          return emit(ActionKind::LateralMove, front ? Axle::Front : Axle::Rear, 0.0, after);
        advance(after);
        break;
      }
      if (st.align_rounds >= kMaxAlignRounds)
        return fail(st.phase, "alignment did not converge");
      const auto cmd = alignment_correction(axle.left.phase, axle.right.phase, g);
      PlannerStep step = emit(ActionKind::LateralMove, front ? Axle::Front : Axle::Rear, cmd.signed_delta_x(),
                              st.phase);
      ++step.next.align_rounds;
      return step;
    }

    case ClimbPhase::TransformFront:
    case ClimbPhase::TransformRear: {
      const bool front = st.phase == ClimbPhase::TransformFront;
      const Axle which = front ? Axle::Front : Axle::Rear;
      const AxleState &axle = front ? robot.front : robot.rear;
      const ClimbPhase after = front ? ClimbPhase::ClimbFront : ClimbPhase::ClimbRear;
      if (axle.mode() == WheelMode::Legged) {
        advance(after);
        break;
      }
      if (std::abs(wrapped_phase_difference(axle.left.phase, axle.right.phase, g)) >= kAlignTolerance)
        return fail(st.phase, "misaligned");
      if (!robot.speeds.is_zero())
        return emit(ActionKind::Stop, which, 0.0, st.phase);
      return emit(ActionKind::Transform, which, g.tilt_max, after);
    }

    case ClimbPhase::ClimbFront:
    case ClimbPhase::ClimbRear: {
      const bool front = st.phase == ClimbPhase::ClimbFront;
      const AxleState &axle = front ? robot.front : robot.rear;
      const ClimbPhase after = front ? ClimbPhase::ResetFront : ClimbPhase::ResetRear;
      if (axle.on_top) {
        advance(after);
        break;
      }
      const double alpha0 = hook_contact_angle(axle.center.z, h, g);
      return emit(ActionKind::Drive, front ? Axle::Front : Axle::Rear, std::numbers::pi / 2.0 - alpha0, after);
    }

    case ClimbPhase::ResetFront:
    case ClimbPhase::ResetRear: {
      const bool front = st.phase == ClimbPhase::ResetFront;
      const Axle which = front ? Axle::Front : Axle::Rear;
      const AxleState &axle = front ? robot.front : robot.rear;
      if (axle.mode() != WheelMode::Wheeled) {
        if (!robot.speeds.is_zero())
          return emit(ActionKind::Stop, which, 0.0, st.phase);
        return emit(ActionKind::Transform, which, 0.0, front ? st.phase : ClimbPhase::Done);
      }
      if (!front) {
        advance(ClimbPhase::Done);
        break;
      }
      const double gap = approach_stop(h, g) - robot.rear.center.s;
      if (gap > kPositionTolerance)
        return emit(ActionKind::Drive, Axle::Both, gap / g.r_wheel, ClimbPhase::AlignRear);
      advance(ClimbPhase::AlignRear);
      break;
    }

    case ClimbPhase::Done:
    case ClimbPhase::Failed:
      // Reached only by falling through from a completed reset.
      return {Action{ActionKind::Stop, Axle::Both, 0.0, ps.phase}, st};
    }
  }
}

/// Result of driving the state machine to completion against the executor.
struct ClimbRun {
  std::vector<Action> actions;
  std::vector<ClimbPhase> phases; // distinct phases in visit order, ending in Done or Failed
  std::optional<std::string> failure;
  RobotState final_state;
  std::vector<TelemetrySample> telemetry;
  std::map<ClimbPhase, AlignmentTally> alignment;
  int interlock_violations = 0;
};

inline constexpr std::size_t kMaxPlanLength = 128;

inline ClimbRun run_state_machine(const Scenario &sc, Executor &exec, PlannerState ps,
                                  std::optional<ClimbPhase> stop_after = std::nullopt) {
  ClimbRun run;
  auto visit = [&](ClimbPhase p) {
    if (run.phases.empty() || run.phases.back() != p)
      run.phases.push_back(p);
  };
  while (!detail::is_terminal(ps.phase)) {
    if (run.actions.size() >= kMaxPlanLength) {
      ps = {ClimbPhase::Failed, 0, "planner did not terminate"};
      break;
    }
    const PlannerStep step = next_action(ps, exec.state(), sc.obstacle, sc.geometry, sc.params);
    if (stop_after && step.action.phase != *stop_after)
      break;
    visit(step.action.phase);
    run.actions.push_back(step.action);
    try {
      exec.apply(step.action);
    } catch (const ExecutionFailure &e) {
      ps = {ClimbPhase::Failed, 0, e.reason()};
      break;
    } catch (const ModeError &e) {
      ps = {ClimbPhase::Failed, 0, e.what()};
      break;
    }
    ps = step.next;
  }
  if (ps.phase == ClimbPhase::Failed)
    run.failure = ps.failure_reason;
  if (detail::is_terminal(ps.phase))
    visit(ps.phase);
  run.final_state = exec.state();
  run.alignment = exec.alignment();
  run.interlock_violations = exec.interlock_violations();
  return run;
}

inline ClimbRun run_climb(const Scenario &sc, bool record) {
  validate(sc.geometry);
  validate(sc.params);
  Executor exec(sc, record);
  ClimbRun run = run_state_machine(sc, exec, PlannerState{});
  run.telemetry = exec.take_telemetry();
  return run;
}

/// Deterministic action list for a scenario. Throws InfeasibleError naming the
/// failed check when the obstacle cannot be negotiated.
inline std::vector<Action> plan_climb(const Scenario &sc) {
  ClimbRun run = run_climb(sc, false);
  if (run.failure)
    throw InfeasibleError(*run.failure);
  return run.actions;
}

} // namespace omniwheg
