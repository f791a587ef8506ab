#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "omniwheg/log_analysis.hpp"
#include "omniwheg/scenario.hpp"
#include "omniwheg/simulator.hpp"
#include "omniwheg/statics.hpp"

namespace omniwheg::cli {

/// Exit codes: success, operator error (usage, parse, I/O), modeled failure.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitModelFailure = 2 };

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dalpha;
};

inline Scenario apply_options(Scenario sc, const RunOptions &opts) {
  if (opts.seed)
    sc.seed = *opts.seed;
  if (opts.dalpha) {
    if (!(*opts.dalpha > 0.0 && *opts.dalpha <= 0.1))
      throw std::invalid_argument("--dalpha must lie in (0, 0.1] rad");
    sc.dalpha = *opts.dalpha;
  }
  if (opts.out_dir)
    sc.output = *opts.out_dir;
  return sc;
}

inline std::filesystem::path prepare_dir(const std::string &dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

template <typename Writer>
void write_file(const std::filesystem::path &path, Writer &&writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  writer(os);
  if (!os)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

/// `omniwheg run`: telemetry.csv, actions.txt and summary.txt in the output directory.
inline int run(const std::string &scenario_path, const RunOptions &opts, std::ostream &out, std::ostream &err) {
  try {
    const Scenario sc = apply_options(load_scenario(scenario_path), opts);
    const ClimbOutcome outcome = simulate(sc);
    const auto dir = prepare_dir(sc.output);
    write_file(dir / "telemetry.csv", [&](std::ostream &os) { write_telemetry_csv(os, outcome.telemetry); });
    write_file(dir / "actions.txt", [&](std::ostream &os) { write_action_list(os, outcome.actions); });
    write_file(dir / "summary.txt", [&](std::ostream &os) { write_summary(os, sc, outcome); });
    write_summary(out, sc, outcome);
    return outcome.success ? kExitOk : kExitModelFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

struct SweepRow {
  double height = 0.0;
  ClimbDirection direction = ClimbDirection::Forward;
  bool success = false;
  double peak_torque = 0.0;
  std::string limiting_factor;
  std::string trajectory_file;
};

inline std::string trajectory_name(double height, ClimbDirection d) {
  return "traj_" + format_sig9(height) + "_" + to_string(d) + ".csv";
}

/// Simulates every (height, direction) cell. Rows come back height ascending,
/// Forward before Backward, whatever order the cells finish in. When
/// `out_dir` is set each cell writes its own trajectory file there.
inline std::vector<SweepRow> sweep(std::vector<double> heights, std::vector<ClimbDirection> directions,
                                   const Scenario &base, const std::optional<std::filesystem::path> &out_dir) {
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  std::sort(directions.begin(), directions.end());
  directions.erase(std::unique(directions.begin(), directions.end()), directions.end());

  std::vector<std::future<SweepRow>> cells;
  for (double h : heights)
    for (ClimbDirection d : directions)
      cells.push_back(std::async(std::launch::async, [h, d, &base, &out_dir] {
        Scenario sc = base;
        sc.obstacle = {h, d};
        const ClimbOutcome o = simulate(sc);
        SweepRow row{h, d, o.success, o.peak_torque, o.limiting_factor, trajectory_name(h, d)};
        if (out_dir)
          write_file(*out_dir / row.trajectory_file,
                     [&](std::ostream &os) { write_trajectory_csv(os, o.trajectory); });
        return row;
      }));
  std::vector<SweepRow> rows;
  rows.reserve(cells.size());
  for (auto &f : cells)
    rows.push_back(f.get());
  return rows;
}

inline void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows) {
  os << "height,direction,success,peak_torque,limiting_factor,trajectory\n";
  for (const auto &r : rows)
    os << format_sig9(r.height) << ',' << to_string(r.direction) << ',' << (r.success ? 1 : 0) << ','
       << format_sig9(r.peak_torque) << ',' << r.limiting_factor << ',' << r.trajectory_file << '\n';
}

inline int sweep(const std::vector<double> &heights, const std::vector<ClimbDirection> &directions,
                 const std::string &scenario_path, const RunOptions &opts, std::ostream &out, std::ostream &err) {
  try {
    if (heights.empty() || directions.empty())
      throw std::invalid_argument("sweep needs at least one height and one direction");
    for (double h : heights)
      if (!(h >= 0.0 && h <= kMaxObstacleHeight))
        throw std::invalid_argument("height " + format_sig9(h) + " outside [0, 0.40] m");
    const Scenario sc = apply_options(load_scenario(scenario_path), opts);
    const auto dir = prepare_dir(sc.output);
    const auto rows = sweep(heights, directions, sc, dir);
    write_file(dir / "sweep.csv", [&](std::ostream &os) { write_sweep_csv(os, rows); });
    write_sweep_csv(out, rows);
    return kExitOk;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

inline void write_log_stats(std::ostream &os, const LogStats &s) {
  os << "rows = " << s.rows << '\n';
  for (const auto &m : s.motors)
    os << "motor " << m.name << ": peak = " << format_sig9(m.peak) << " N*m, mean = " << format_sig9(m.mean)
       << " N*m\n";
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto &seg = s.segments[i];
    os << "segment " << i << " direction " << seg.direction << " rows " << seg.first_row << "-" << seg.last_row
       << " t " << format_sig9(seg.t_start) << "-" << format_sig9(seg.t_end) << '\n';
    for (const auto &m : seg.motors)
      os << "  motor " << m.name << ": peak = " << format_sig9(m.peak) << ", mean = " << format_sig9(m.mean)
         << '\n';
  }
}

/// `omniwheg analyze`: prints stats and, with an output directory, writes analyzed.csv.
inline int analyze(const std::string &log_path, double torque_constant, const std::optional<std::string> &out_dir,
                   std::ostream &out, std::ostream &err) {
  try {
    if (!(torque_constant > 0.0))
      throw std::invalid_argument("torque constant must be positive");
    std::ostringstream augmented;
    const LogStats stats = analyze_log(log_path, torque_constant, out_dir ? &augmented : nullptr);
    if (out_dir) {
      const auto dir = prepare_dir(*out_dir);
      write_file(dir / "analyzed.csv", [&](std::ostream &os) { os << augmented.str(); });
    }
    write_log_stats(out, stats);
    return kExitOk;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

inline void write_feasibility_text(std::ostream &os, const FeasibilityReport &r) {
  os << "motor_required = " << format_sig9(r.motor_required) << '\n'
     << "motor_limit = " << format_sig9(r.motor_limit) << '\n'
     << "motor_ok = " << (r.motor_ok ? "true" : "false") << '\n'
     << "servo_required = " << format_sig9(r.servo_required) << '\n'
     << "servo_limit = " << format_sig9(r.servo_limit) << '\n'
     << "servo_ok = " << (r.servo_ok ? "true" : "false") << '\n';
}

inline void write_feasibility_csv(std::ostream &os, const FeasibilityReport &r) {
  os << "actuator,required,limit,ok\n"
     << "motor," << format_sig9(r.motor_required) << ',' << format_sig9(r.motor_limit) << ',' << (r.motor_ok ? 1 : 0)
     << '\n'
     << "servo," << format_sig9(r.servo_required) << ',' << format_sig9(r.servo_limit) << ',' << (r.servo_ok ? 1 : 0)
     << '\n';
}

/// `omniwheg feasibility`: exit 0 when both actuators clear their worst case, 2 otherwise.
inline int feasibility(const std::string &scenario_path, const RunOptions &opts, std::ostream &out,
                       std::ostream &err) {
  try {
    const Scenario sc = apply_options(load_scenario(scenario_path), opts);
    const FeasibilityReport report = feasibility_report(sc.geometry, sc.params);
    const auto dir = prepare_dir(sc.output);
    write_file(dir / "feasibility.csv", [&](std::ostream &os) { write_feasibility_csv(os, report); });
    write_feasibility_text(out, report);
    return report.ok() ? kExitOk : kExitModelFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

} // namespace omniwheg::cli
