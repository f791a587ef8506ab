#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace omniwheg {

/// Obstacle-negotiation phases in execution order; Failed is reachable from any of them.
enum class ClimbPhase {
  SquareUp,
  AlignFront,
  TransformFront,
  ClimbFront,
  ResetFront,
  AlignRear,
  TransformRear,
  ClimbRear,
  ResetRear,
  Done,
  Failed,
};

inline const char *to_string(ClimbPhase p) {
  switch (p) {
  case ClimbPhase::SquareUp: return "SquareUp";
  case ClimbPhase::AlignFront: return "AlignFront";
  case ClimbPhase::TransformFront: return "TransformFront";
  case ClimbPhase::ClimbFront: return "ClimbFront";
  case ClimbPhase::ResetFront: return "ResetFront";
  case ClimbPhase::AlignRear: return "AlignRear";
  case ClimbPhase::TransformRear: return "TransformRear";
  case ClimbPhase::ClimbRear: return "ClimbRear";
  case ClimbPhase::ResetRear: return "ResetRear";
  case ClimbPhase::Done: return "Done";
  case ClimbPhase::Failed: return "Failed";
  }
  return "?";
}

enum class ActionKind { LateralMove, Rotate, Transform, Drive, Stop };

enum class Axle { Front, Rear, Both, Body };

inline const char *to_string(ActionKind k) {
  switch (k) {
  case ActionKind::LateralMove: return "LateralMove";
  case ActionKind::Rotate: return "Rotate";
  case ActionKind::Transform: return "Transform";
  case ActionKind::Drive: return "Drive";
  case ActionKind::Stop: return "Stop";
  }
  return "?";
}

inline const char *to_string(Axle a) {
  switch (a) {
  case Axle::Front: return "front";
  case Axle::Rear: return "rear";
  case Axle::Both: return "both";
  case Axle::Body: return "body";
  }
  return "?";
}

/// One planner command. Magnitude units depend on the kind:
///   LateralMove  signed body displacement along +vx, m
///   Rotate       heading change, rad
///   Transform    target lobe tilt, rad (0 = wheeled, tilt_max = legged)
///   Drive        wheel rotation, rad (rolling, or pivot arc about the step edge)
///   Stop         unused
struct Action {
  ActionKind kind = ActionKind::Stop;
  Axle axle = Axle::Both;
  double magnitude = 0.0;
  ClimbPhase phase = ClimbPhase::SquareUp; // phase that emitted the action

  friend bool operator==(const Action &, const Action &) = default;

  const char *unit() const {
    switch (kind) {
    case ActionKind::LateralMove: return "m";
    case ActionKind::Rotate:
    case ActionKind::Transform:
    case ActionKind::Drive: return "rad";
    case ActionKind::Stop: return "-";
    }
    return "-";
  }
};

/// `kind,axle,magnitude,unit` with 9 significant digits.
inline std::string format_action(const Action &a) {
  char mag[32];
  std::snprintf(mag, sizeof mag, "%.9g", a.magnitude);
  return std::string(to_string(a.kind)) + "," + to_string(a.axle) + "," + mag + "," + a.unit();
}

inline void write_action_list(std::ostream &os, const std::vector<Action> &actions) {
  for (const Action &a : actions)
    os << format_action(a) << '\n';
}

} // namespace omniwheg
