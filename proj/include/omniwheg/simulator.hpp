#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "omniwheg/actions.hpp"
#include "omniwheg/climb_model.hpp"
#include "omniwheg/executor.hpp"
#include "omniwheg/planner.hpp"
#include "omniwheg/scenario.hpp"

namespace omniwheg {

struct ClimbOutcome {
  bool success = false;
  std::vector<SagittalPoint> trajectory; // front wheel centre, one point per telemetry sample
  double peak_torque = 0.0;              // max |tau| over all motors and samples
  double mean_torque = 0.0;              // mean |tau| of the two front motors
  double total_lateral_displacement = 0.0; // achieved, summed over both alignment phases
  double max_lateral_displacement = 0.0;   // achieved, largest single alignment phase
  std::string limiting_factor = "none";
  std::optional<std::string> failure_reason;

  std::vector<TelemetrySample> telemetry;
  std::vector<Action> actions;
  std::vector<ClimbPhase> phases;
  RobotState final_state;
  int interlock_violations = 0;
};

/// Plans and executes one scenario. Deterministic for a fixed scenario, seed included.
inline ClimbOutcome simulate(const Scenario &sc) {
  ClimbRun run = run_climb(sc, true);
  ClimbOutcome out;
  out.telemetry = std::move(run.telemetry);
  out.actions = std::move(run.actions);
  out.phases = std::move(run.phases);
  out.final_state = run.final_state;
  out.interlock_violations = run.interlock_violations;
  out.failure_reason = run.failure;

  const auto verdict = climbable(sc.geometry, sc.params, sc.obstacle);
  out.limiting_factor = verdict.ok ? (run.failure ? *run.failure : "none") : verdict.limiting_factor;

  double front_sum = 0.0;
  out.trajectory.reserve(out.telemetry.size());
  for (const auto &s : out.telemetry) {
    out.trajectory.push_back(s.front);
    for (double tau : s.torque)
      out.peak_torque = std::max(out.peak_torque, std::abs(tau));
    front_sum += 0.5 * (std::abs(s.torque[0]) + std::abs(s.torque[1]));
  }
  if (!out.telemetry.empty())
    out.mean_torque = front_sum / static_cast<double>(out.telemetry.size());

  for (const auto &[phase, tally] : run.alignment) {
    out.total_lateral_displacement += tally.achieved;
    out.max_lateral_displacement = std::max(out.max_lateral_displacement, tally.achieved);
  }

  const double h = sc.obstacle.height;
  const double floor_z = h + sc.geometry.r_wheel - 1e-6;
  const bool finished = !run.failure && !out.phases.empty() && out.phases.back() == ClimbPhase::Done;
  out.success = finished && (h <= 0.0 || (out.final_state.front.center.z >= floor_z &&
                                           out.final_state.rear.center.z >= floor_z));
  if (finished && !out.success)
    out.failure_reason = "did not reach the top";
  return out;
}

struct AlignmentRun {
  int rounds = 0;
  double commanded = 0.0;      // total |dx| commanded
  double achieved = 0.0;       // total |dx| after slip
  double final_difference = 0.0; // wrapped left-right phase difference afterwards
  bool converged = false;
};

/// Runs only the front alignment phase from the given front wheel phases,
/// through the same planner and executor used by simulate().
inline AlignmentRun simulate_alignment(double phase_left, double phase_right, const Scenario &base) {
  Scenario sc = base;
  sc.heading = 0.0;
  sc.randomize_phases = false;
  RobotState st = initial_state(sc);
  st.front.left.phase = wrap_phase(phase_left);
  st.front.right.phase = wrap_phase(phase_right);
  Executor exec(sc, st, false);
  ClimbRun run = run_state_machine(sc, exec, PlannerState{ClimbPhase::AlignFront, 0, {}}, ClimbPhase::AlignFront);

  AlignmentRun out;
  if (auto it = run.alignment.find(ClimbPhase::AlignFront); it != run.alignment.end()) {
    out.rounds = it->second.moves;
    out.commanded = it->second.commanded;
    out.achieved = it->second.achieved;
  }
  const auto &front = run.final_state.front;
  out.final_difference = wrapped_phase_difference(front.left.phase, front.right.phase, sc.geometry);
  out.converged = !run.failure && std::abs(out.final_difference) < kAlignTolerance;
  return out;
}

/// 9 significant digits, dot decimal separator.
inline std::string format_sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline constexpr const char *kTelemetryHeader = "t,i_fl,i_fr,i_rl,i_rr,tau_fl,tau_fr,tau_rl,tau_rr,s,z,phase";

inline void write_telemetry_csv(std::ostream &os, const std::vector<TelemetrySample> &samples) {
  os << kTelemetryHeader << '\n';
  for (const auto &s : samples) {
    os << format_sig9(s.t);
    for (double i : s.current)
      os << ',' << format_sig9(i);
    for (double tau : s.torque)
      os << ',' << format_sig9(tau);
    os << ',' << format_sig9(s.front.s) << ',' << format_sig9(s.front.z) << ',' << to_string(s.phase) << '\n';
  }
}

inline void write_trajectory_csv(std::ostream &os, const std::vector<SagittalPoint> &trajectory) {
  os << "s,z\n";
  for (const auto &p : trajectory)
    os << format_sig9(p.s) << ',' << format_sig9(p.z) << '\n';
}

/// `key = value` summary record.
inline void write_summary(std::ostream &os, const Scenario &sc, const ClimbOutcome &o) {
  os << "height = " << format_sig9(sc.obstacle.height) << '\n'
     << "direction = " << to_string(sc.obstacle.direction) << '\n'
     << "success = " << (o.success ? "true" : "false") << '\n'
     << "peak_torque = " << format_sig9(o.peak_torque) << '\n'
     << "mean_torque = " << format_sig9(o.mean_torque) << '\n'
     << "max_lateral_displacement = " << format_sig9(o.max_lateral_displacement) << '\n'
     << "total_lateral_displacement = " << format_sig9(o.total_lateral_displacement) << '\n'
     << "limiting_factor = " << o.limiting_factor << '\n'
     << "failure_reason = " << o.failure_reason.value_or("none") << '\n'
     << "samples = " << o.telemetry.size() << '\n'
     << "actions = " << o.actions.size() << '\n';
}

} // namespace omniwheg
