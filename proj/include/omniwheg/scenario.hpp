#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "omniwheg/climb_model.hpp"
#include "omniwheg/errors.hpp"
#include "omniwheg/geometry.hpp"
#include "omniwheg/statics.hpp"

namespace omniwheg {

inline constexpr double kDefaultDalpha = 0.5 * std::numbers::pi / 180.0;
inline constexpr double kMaxObstacleHeight = 0.40;

struct Scenario {
  WheelGeometry geometry;
  RobotParams params;
  Obstacle obstacle;
  std::array<double, 4> initial_phases{}; // FL, FR, RL, RR, rad
  double heading = 0.0;                   // initial heading error, rad
  double slip = 0.08;
  std::uint64_t seed = 0;
  bool randomize_phases = false;
  double dalpha = kDefaultDalpha;
  double approach = 0.30; // initial front-axle distance from the riser, m
  std::string output = "out";

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError(line, "expected a number, got '" + std::string(text) + "'");
  return value;
}

template <typename Int>
Int parse_integer(std::string_view text, std::size_t line) {
  Int value = 0;
  const auto *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, "expected an integer, got '" + std::string(text) + "'");
  return value;
}

inline bool parse_bool(std::string_view text, std::size_t line) {
  if (text == "true")
    return true;
  if (text == "false")
    return false;
  throw ParseError(line, "expected true or false, got '" + std::string(text) + "'");
}

inline std::string fmt_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

/// Parses the sectioned `key = value` scenario format. Absent keys keep their
/// defaults; unknown sections or keys, malformed lines and out-of-range values
/// raise ParseError with the offending line.
inline Scenario parse_scenario(std::string_view text) {
  using detail::parse_double;
  Scenario sc;
  std::map<std::string, std::size_t> seen; // "section.key" -> line
  std::string section;
  std::size_t line_no = 0;

  auto positive = [](double v, std::size_t line, const char *what) {
    if (!(v > 0.0))
      throw ParseError(line, std::string(what) + " must be positive");
    return v;
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';')
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(line_no, "unterminated section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "geometry" && section != "params" && section != "obstacle" && section != "run")
        throw ParseError(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, "expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const auto value = detail::trim(line.substr(eq + 1));
    if (section.empty())
      throw ParseError(line_no, "key '" + key + "' outside any section");
    if (key.empty() || value.empty())
      throw ParseError(line_no, "expected key = value");
    const std::string qualified = section + "." + key;
    if (seen.contains(qualified))
      throw ParseError(line_no, "duplicate key '" + key + "'");
    seen[qualified] = line_no;

    auto &g = sc.geometry;
    auto &p = sc.params;
    if (section == "geometry") {
      if (key == "r_wheel") g.r_wheel = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "r_leg") g.r_leg = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "r_contact") g.r_contact = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "l2_max") g.l2_max = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "lobe_count") {
        g.lobe_count = detail::parse_integer<int>(value, line_no);
        if (g.lobe_count < 2)
          throw ParseError(line_no, "lobe_count must be at least 2");
      } else if (key == "tilt_max") {
        g.tilt_max = parse_double(value, line_no);
        if (!(g.tilt_max > 0.0 && g.tilt_max <= std::numbers::pi / 2.0))
          throw ParseError(line_no, "tilt_max must lie in (0, pi/2]");
      } else if (key == "servo_max") g.servo_max = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "asym_offset") {
        g.asym_offset = parse_double(value, line_no);
        if (g.asym_offset < 0.0)
          throw ParseError(line_no, "asym_offset must be non-negative");
      } else
        throw ParseError(line_no, "unknown key '" + key + "' in [geometry]");
    } else if (section == "params") {
      if (key == "mass_total") p.mass_total = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "f_wheel") p.f_wheel = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "torque_constant") p.torque_constant = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "motor_torque_limit") p.motor_torque_limit = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "servo_torque_limit") p.servo_torque_limit = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "track_width") p.track_width = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "wheel_base") p.wheel_base = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "rolling_resistance") {
        p.rolling_resistance = parse_double(value, line_no);
        if (p.rolling_resistance < 0.0)
          throw ParseError(line_no, "rolling_resistance must be non-negative");
      } else if (key == "weight_transfer") p.weight_transfer = positive(parse_double(value, line_no), line_no, key.c_str());
      else
        throw ParseError(line_no, "unknown key '" + key + "' in [params]");
    } else if (section == "obstacle") {
      if (key == "height") {
        const double h = parse_double(value, line_no);
        if (!(h >= 0.0 && h <= kMaxObstacleHeight))
          throw ParseError(line_no, "height must lie in [0, 0.40] m");
        sc.obstacle.height = h;
      } else if (key == "direction") {
        if (value == "forward") sc.obstacle.direction = ClimbDirection::Forward;
        else if (value == "backward") sc.obstacle.direction = ClimbDirection::Backward;
        else throw ParseError(line_no, "direction must be forward or backward");
      } else
        throw ParseError(line_no, "unknown key '" + key + "' in [obstacle]");
    } else { // run
      static constexpr std::array<std::string_view, 4> phase_keys{"phase_fl", "phase_fr", "phase_rl", "phase_rr"};
      bool handled = false;
      for (std::size_t i = 0; i < phase_keys.size(); ++i)
        if (key == phase_keys[i]) {
          sc.initial_phases[i] = parse_double(value, line_no);
          handled = true;
        }
      if (handled) continue;
      if (key == "heading") {
        sc.heading = parse_double(value, line_no);
        if (!(std::abs(sc.heading) < std::numbers::pi / 2.0))
          throw ParseError(line_no, "heading error must lie in (-pi/2, pi/2)");
      } else if (key == "slip") {
        sc.slip = parse_double(value, line_no);
        if (!(sc.slip >= 0.0 && sc.slip < 1.0))
          throw ParseError(line_no, "slip must lie in [0, 1)");
      } else if (key == "seed") sc.seed = detail::parse_integer<std::uint64_t>(value, line_no);
      else if (key == "randomize_phases") sc.randomize_phases = detail::parse_bool(value, line_no);
      else if (key == "dalpha") {
        sc.dalpha = parse_double(value, line_no);
        if (!(sc.dalpha > 0.0 && sc.dalpha <= 0.1))
          throw ParseError(line_no, "dalpha must lie in (0, 0.1] rad");
      } else if (key == "approach") sc.approach = positive(parse_double(value, line_no), line_no, key.c_str());
      else if (key == "output") sc.output = std::string(value);
      else
        throw ParseError(line_no, "unknown key '" + key + "' in [run]");
    }
  }

  if (seen.contains("params.mass_total") && !seen.contains("params.f_wheel"))
    sc.params.f_wheel = per_wheel_load(sc.params.mass_total);

  // Cross-field invariants are reported at the latest line among the keys involved.
  auto line_of = [&](std::initializer_list<const char *> keys) {
    std::size_t line = 0;
    for (const char *k : keys)
      if (auto it = seen.find(k); it != seen.end())
        line = std::max(line, it->second);
    return line;
  };
  const auto &g = sc.geometry;
  if (!(g.r_wheel < g.r_contact && g.r_contact <= g.r_leg))
    throw ParseError(line_of({"geometry.r_wheel", "geometry.r_contact", "geometry.r_leg"}),
                     "radii must satisfy r_wheel < r_contact <= r_leg");
  if (!(g.asym_offset < g.r_leg))
    throw ParseError(line_of({"geometry.asym_offset", "geometry.r_leg"}), "asym_offset must be below r_leg");
  if (!(sc.approach >= g.r_leg))
    throw ParseError(line_of({"run.approach", "geometry.r_leg"}), "approach must be at least r_leg");
  return sc;
}

inline Scenario load_scenario(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

/// Writes every field at full precision; parse_scenario(serialize_scenario(s)) == s.
inline std::string serialize_scenario(const Scenario &sc) {
  using detail::fmt_exact;
  const auto &g = sc.geometry;
  const auto &p = sc.params;
  std::ostringstream os;
  os << "[geometry]\n"
     << "r_wheel = " << fmt_exact(g.r_wheel) << '\n'
     << "r_leg = " << fmt_exact(g.r_leg) << '\n'
     << "r_contact = " << fmt_exact(g.r_contact) << '\n'
     << "l2_max = " << fmt_exact(g.l2_max) << '\n'
     << "lobe_count = " << g.lobe_count << '\n'
     << "tilt_max = " << fmt_exact(g.tilt_max) << '\n'
     << "servo_max = " << fmt_exact(g.servo_max) << '\n'
     << "asym_offset = " << fmt_exact(g.asym_offset) << '\n'
     << "\n[params]\n"
     << "mass_total = " << fmt_exact(p.mass_total) << '\n'
     << "f_wheel = " << fmt_exact(p.f_wheel) << '\n'
     << "torque_constant = " << fmt_exact(p.torque_constant) << '\n'
     << "motor_torque_limit = " << fmt_exact(p.motor_torque_limit) << '\n'
     << "servo_torque_limit = " << fmt_exact(p.servo_torque_limit) << '\n'
     << "track_width = " << fmt_exact(p.track_width) << '\n'
     << "wheel_base = " << fmt_exact(p.wheel_base) << '\n'
     << "rolling_resistance = " << fmt_exact(p.rolling_resistance) << '\n'
     << "weight_transfer = " << fmt_exact(p.weight_transfer) << '\n'
     << "\n[obstacle]\n"
     << "height = " << fmt_exact(sc.obstacle.height) << '\n'
     << "direction = " << to_string(sc.obstacle.direction) << '\n'
     << "\n[run]\n"
     << "phase_fl = " << fmt_exact(sc.initial_phases[0]) << '\n'
     << "phase_fr = " << fmt_exact(sc.initial_phases[1]) << '\n'
     << "phase_rl = " << fmt_exact(sc.initial_phases[2]) << '\n'
     << "phase_rr = " << fmt_exact(sc.initial_phases[3]) << '\n'
     << "heading = " << fmt_exact(sc.heading) << '\n'
     << "slip = " << fmt_exact(sc.slip) << '\n'
     << "seed = " << sc.seed << '\n'
     << "randomize_phases = " << (sc.randomize_phases ? "true" : "false") << '\n'
     << "dalpha = " << fmt_exact(sc.dalpha) << '\n'
     << "approach = " << fmt_exact(sc.approach) << '\n'
     << "output = " << sc.output << '\n';
  return os.str();
}

} // namespace omniwheg
