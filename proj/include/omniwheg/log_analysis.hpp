#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "omniwheg/errors.hpp"
#include "omniwheg/statics.hpp"

namespace omniwheg {

struct MotorStats {
  std::string name; // current column suffix, e.g. "fl" for i_fl
  double peak = 0.0; // max |tau|
  double mean = 0.0; // mean |tau|
};

/// Maximal run of rows whose first current column keeps one sign.
struct DirectionSegment {
  int direction = 0; // -1, 0 or +1
  std::size_t first_row = 0; // 1-based file lines
  std::size_t last_row = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<MotorStats> motors;
};

struct LogStats {
  std::size_t rows = 0;
  std::vector<MotorStats> motors;
  std::vector<DirectionSegment> segments;
};

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
      cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
      cell.remove_suffix(1);
    cells.push_back(cell);
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return cells;
}

inline double parse_cell(std::string_view cell, std::size_t row, const std::string &column) {
  double v = 0.0;
  const auto *end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw DataError(row, "non-numeric value '" + std::string(cell) + "' in column " + column);
  return v;
}

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

inline std::vector<MotorStats> motor_stats(const std::vector<std::string> &names,
                                           const std::vector<std::vector<double>> &torque, std::size_t begin,
                                           std::size_t end) {
  std::vector<MotorStats> out;
  for (std::size_t m = 0; m < names.size(); ++m) {
    MotorStats s{names[m], 0.0, 0.0};
    double sum = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      const double a = std::abs(torque[r][m]);
      s.peak = std::max(s.peak, a);
      sum += a;
    }
    if (end > begin)
      s.mean = sum / static_cast<double>(end - begin);
    out.push_back(s);
  }
  return out;
}

} // namespace detail

/// Converts every `i_<motor>` column to torque with the given constant and
/// summarizes peak and mean |torque| per motor, overall and per direction
/// segment. Other columns are ignored. When `augmented` is given, writes
/// `t`, the current columns and matching `tau_<motor>` columns to it.
inline LogStats analyze_log(std::istream &in, double torque_constant, std::ostream *augmented = nullptr) {
  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line))
    throw DataError(1, "empty log");
  ++row;
  const auto header = detail::split_csv(line);
  std::ptrdiff_t t_col = -1;
  std::vector<std::size_t> current_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "t")
      t_col = static_cast<std::ptrdiff_t>(c);
    else if (header[c].starts_with("i_") && header[c].size() > 2) {
      current_cols.push_back(c);
      names.emplace_back(header[c].substr(2));
    }
  }
  if (t_col < 0)
    throw DataError(1, "missing column t");
  if (current_cols.empty())
    throw DataError(1, "no current columns (i_*)");

  std::vector<double> times;
  std::vector<std::vector<double>> currents;
  std::vector<std::vector<double>> torque;
  std::vector<std::size_t> rows;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r")
      continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != header.size())
      throw DataError(row, "expected " + std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
    times.push_back(detail::parse_cell(cells[static_cast<std::size_t>(t_col)], row, "t"));
    std::vector<double> amps;
    std::vector<double> tau;
    for (std::size_t m = 0; m < current_cols.size(); ++m) {
      amps.push_back(detail::parse_cell(cells[current_cols[m]], row, "i_" + names[m]));
      tau.push_back(torque_from_current(amps.back(), torque_constant));
    }
    currents.push_back(std::move(amps));
    torque.push_back(std::move(tau));
    rows.push_back(row);
  }

  LogStats stats;
  stats.rows = torque.size();
  stats.motors = detail::motor_stats(names, torque, 0, torque.size());
  std::size_t begin = 0;
  while (begin < torque.size()) {
    const int dir = detail::sign_of(torque[begin][0]);
    std::size_t end = begin + 1;
    while (end < torque.size() && detail::sign_of(torque[end][0]) == dir)
      ++end;
    stats.segments.push_back(DirectionSegment{dir, rows[begin], rows[end - 1], times[begin], times[end - 1],
                                              detail::motor_stats(names, torque, begin, end)});
    begin = end;
  }

  if (augmented) {
    auto fmt = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
      return std::string(buf);
    };
    *augmented << 't';
    for (const auto &n : names)
      *augmented << ",i_" << n;
    for (const auto &n : names)
      *augmented << ",tau_" << n;
    *augmented << '\n';
    for (std::size_t r = 0; r < torque.size(); ++r) {
      *augmented << fmt(times[r]);
      for (double amps : currents[r])
        *augmented << ',' << fmt(amps);
      for (double tau : torque[r])
        *augmented << ',' << fmt(tau);
      *augmented << '\n';
    }
  }
  return stats;
}

inline LogStats analyze_log(const std::string &path, double torque_constant, std::ostream *augmented = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open log '" + path + "'");
  return analyze_log(in, torque_constant, augmented);
}

} // namespace omniwheg
