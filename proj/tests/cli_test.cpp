#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "omniwheg/cli.hpp"

using namespace omniwheg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("omniwheg_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path &path, const std::string &text) {
  std::ofstream(path) << text;
  return path;
}

std::string read_text(const fs::path &path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string &args) {
  const std::string cmd = std::string(OMNIWHEG_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario_text(double h, const char *dir) {
  return "[obstacle]\nheight = " + std::to_string(h) + "\ndirection = " + dir + "\n";
}

} // namespace

TEST(RunCommand, DefaultScenarioSucceeds) {
  const auto dir = fresh_dir("run_default");
  const auto path = write_text(dir / "default.ini", "");
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(path.string(), {(dir / "out").string(), {}, {}}, out, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(dir / "out" / "telemetry.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "actions.txt"));
  const auto summary = read_text(dir / "out" / "summary.txt");
  EXPECT_NE(summary.find("success = true"), std::string::npos);
  const auto pos = summary.find("peak_torque = ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(summary.substr(pos + 14)), 1.779 + 1e-3);
}

TEST(RunCommand, BackwardTwentySixIsModeledFailure) {
  const auto dir = fresh_dir("run_back26");
  const auto path = write_text(dir / "s.ini", scenario_text(0.26, "backward"));
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(path.string(), {(dir / "out").string(), {}, {}}, out, err), 2);
  EXPECT_NE(out.str().find("limiting_factor = hook reach"), std::string::npos);
}

TEST(RunCommand, MissingOrBadInputIsOperatorError) {
  const auto dir = fresh_dir("run_missing");
  std::ostringstream out, err;
  EXPECT_EQ(cli::run((dir / "nope.ini").string(), {}, out, err), 1);
  const auto bad = write_text(dir / "bad.ini", "[obstacle]\nheight = 0.45\n");
  EXPECT_EQ(cli::run(bad.string(), {}, out, err), 1);
  EXPECT_NE(err.str().find("line 2"), std::string::npos);
  const auto ok = write_text(dir / "ok.ini", "");
  EXPECT_EQ(cli::run(ok.string(), {(dir / "o").string(), {}, 0.5}, out, err), 1);
}

TEST(Sweep, EightHeightsTwoDirections) {
  std::vector<double> heights;
  for (int cm = 12; cm <= 26; cm += 2)
    heights.push_back(cm / 100.0);
  const auto rows = cli::sweep(heights, {ClimbDirection::Backward, ClimbDirection::Forward}, Scenario{}, std::nullopt);
  ASSERT_EQ(rows.size(), 16u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].height, heights[i / 2]);
    EXPECT_EQ(rows[i].direction, i % 2 ? ClimbDirection::Backward : ClimbDirection::Forward);
    const bool expect = rows[i].direction == ClimbDirection::Forward ? rows[i].height <= 0.26 : rows[i].height <= 0.24;
    EXPECT_EQ(rows[i].success, expect) << rows[i].height << " " << to_string(rows[i].direction);
  }
}

TEST(Sweep, FlatGroundBothDirections) {
  const auto rows = cli::sweep({0.0}, {ClimbDirection::Forward, ClimbDirection::Backward}, Scenario{}, std::nullopt);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].success);
  EXPECT_TRUE(rows[1].success);
}

TEST(Sweep, OutputIsByteIdenticalAcrossRuns) {
  const auto dir = fresh_dir("sweep");
  const auto path = write_text(dir / "s.ini", "");
  std::ostringstream out1, out2, err;
  const std::vector<double> heights{0.26, 0.24};
  const std::vector<ClimbDirection> dirs{ClimbDirection::Forward, ClimbDirection::Backward};
  ASSERT_EQ(cli::sweep(heights, dirs, path.string(), {(dir / "a").string(), {}, {}}, out1, err), 0) << err.str();
  ASSERT_EQ(cli::sweep(heights, dirs, path.string(), {(dir / "b").string(), {}, {}}, out2, err), 0) << err.str();
  EXPECT_EQ(out1.str(), out2.str());
  const auto csv = read_text(dir / "a" / "sweep.csv");
  EXPECT_EQ(csv, read_text(dir / "b" / "sweep.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "height,direction,success,peak_torque,limiting_factor,trajectory");
  EXPECT_NE(csv.find("\n0.24,forward,1,"), std::string::npos);
  EXPECT_NE(csv.find("\n0.24,backward,1,"), std::string::npos);
  EXPECT_NE(csv.find("\n0.26,forward,1,"), std::string::npos);
  EXPECT_NE(csv.find("\n0.26,backward,0,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "a" / "traj_0.24_forward.csv"));
  EXPECT_EQ(read_text(dir / "a" / "traj_0.26_backward.csv"), read_text(dir / "b" / "traj_0.26_backward.csv"));
}

TEST(Analyze, ConstantCurrent) {
  std::istringstream log("t,i_fl,i_fr\n0,2,2\n0.1,2,2\n0.2,2,2\n");
  const auto s = analyze_log(log, 0.741);
  ASSERT_EQ(s.motors.size(), 2u);
  for (const auto &m : s.motors) {
    EXPECT_NEAR(m.peak, 1.482, 1e-12);
    EXPECT_NEAR(m.mean, 1.482, 1e-12);
  }
  EXPECT_EQ(s.rows, 3u);
  ASSERT_EQ(s.segments.size(), 1u);
}

TEST(Analyze, AllZero) {
  std::istringstream log("t,i_fl\n0,0\n1,0\n");
  const auto s = analyze_log(log, 0.741);
  EXPECT_EQ(s.motors[0].peak, 0.0);
  EXPECT_EQ(s.motors[0].mean, 0.0);
}

TEST(Analyze, DirectionSegments) {
  std::istringstream log("t,i_a\n0,1\n1,2\n2,-1\n3,-3\n4,1\n");
  std::ostringstream aug;
  const auto s = analyze_log(log, 0.5, &aug);
  ASSERT_EQ(s.segments.size(), 3u);
  EXPECT_EQ(s.segments[0].direction, 1);
  EXPECT_EQ(s.segments[0].first_row, 2u);
  EXPECT_EQ(s.segments[0].last_row, 3u);
  EXPECT_EQ(s.segments[1].direction, -1);
  EXPECT_EQ(s.segments[1].motors[0].peak, 1.5);
  EXPECT_EQ(s.segments[1].motors[0].mean, 1.0);
  EXPECT_EQ(aug.str(), "t,i_a,tau_a\n0,1,0.5\n1,2,1\n2,-1,-0.5\n3,-3,-1.5\n4,1,0.5\n");
}

TEST(Analyze, DataErrorsCarryRows) {
  auto row_of = [](const std::string &text) -> std::size_t {
    std::istringstream in(text);
    try {
      analyze_log(in, 0.741);
    } catch (const DataError &e) {
      return e.row();
    }
    return 0;
  };
  EXPECT_EQ(row_of("time,i_fl\n0,1\n"), 1u);
  EXPECT_EQ(row_of("t,x\n0,1\n"), 1u);
  EXPECT_EQ(row_of("t,i_fl\n0,1\n1,abc\n"), 3u);
  EXPECT_EQ(row_of("t,i_fl\n0,1\n1\n"), 3u);
  EXPECT_EQ(row_of(""), 1u);
}

TEST(Analyze, ClosedLoopWithSimulation) {
  Scenario sc;
  sc.obstacle = {0.24, ClimbDirection::Forward};
  const auto o = simulate(sc);
  ASSERT_TRUE(o.success);
  std::ostringstream log;
  log << "t,i_fl,i_fr,i_rl,i_rr\n";
  char buf[64];
  for (const auto &s : o.telemetry) {
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    log << buf;
    for (double i : s.current) {
      std::snprintf(buf, sizeof buf, ",%.17g", i);
      log << buf;
    }
    log << '\n';
  }
  std::istringstream in(log.str());
  const auto stats = analyze_log(in, sc.params.torque_constant);
  ASSERT_EQ(stats.rows, o.telemetry.size());
  double peak = 0.0;
  for (const auto &m : stats.motors)
    peak = std::max(peak, m.peak);
  EXPECT_NEAR(peak, o.peak_torque, 1e-9);
  EXPECT_NEAR(0.5 * (stats.motors[0].mean + stats.motors[1].mean), o.mean_torque, 1e-9);
}

TEST(Analyze, CommandWritesAugmentedCsv) {
  const auto dir = fresh_dir("analyze");
  const auto log = write_text(dir / "log.csv", "t,i_fl\n0,2\n1,2\n");
  std::ostringstream out, err;
  EXPECT_EQ(cli::analyze(log.string(), 0.741, (dir / "out").string(), out, err), 0) << err.str();
  EXPECT_EQ(read_text(dir / "out" / "analyzed.csv"), "t,i_fl,tau_fl\n0,2,1.482\n1,2,1.482\n");
  EXPECT_NE(out.str().find("peak = 1.482"), std::string::npos);
  EXPECT_EQ(cli::analyze((dir / "missing.csv").string(), 0.741, std::nullopt, out, err), 1);
  const auto bad = write_text(dir / "bad.csv", "t,i_fl\n0,x\n");
  EXPECT_EQ(cli::analyze(bad.string(), 0.741, std::nullopt, out, err), 1);
}

TEST(Feasibility, Command) {
  const auto dir = fresh_dir("feasibility");
  std::ostringstream out, err;
  const auto ok = write_text(dir / "ok.ini", "");
  EXPECT_EQ(cli::feasibility(ok.string(), {(dir / "a").string(), {}, {}}, out, err), 0);
  EXPECT_EQ(read_text(dir / "a" / "feasibility.csv"),
            "actuator,required,limit,ok\nmotor,1.77936,3,1\nservo,0.8762,2,1\n");
  const auto weak = write_text(dir / "weak.ini", "[params]\nmotor_torque_limit = 1.5\n");
  EXPECT_EQ(cli::feasibility(weak.string(), {(dir / "b").string(), {}, {}}, out, err), 2);
}

TEST(Binary, ExitCodes) {
  const auto dir = fresh_dir("binary");
  const auto ok = write_text(dir / "ok.ini", "").string();
  const auto back = write_text(dir / "back.ini", scenario_text(0.26, "backward")).string();
  const auto out = " --out " + (dir / "out").string();
  EXPECT_EQ(run_cli("run " + ok + out), 0);
  EXPECT_EQ(run_cli("run " + back + out), 2);
  EXPECT_EQ(run_cli("run " + (dir / "missing.ini").string()), 1);
  EXPECT_EQ(run_cli("run " + ok + out + " --seed 3 --dalpha 0.01"), 0);
  EXPECT_EQ(run_cli("run " + ok + " --dalpha abc"), 1);
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("bogus"), 1);
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("sweep --heights 0.24,0.26 --directions forward,backward " + ok + out), 0);
  EXPECT_EQ(run_cli("sweep" + out + " --heights 0.24 0.26 --directions forward backward " + ok), 0);
  EXPECT_EQ(run_cli("sweep --directions backward --heights 0.1 0.2 " + ok + out), 0);
  EXPECT_EQ(run_cli("sweep --heights 0.1 --directions forward"), 1);
  EXPECT_EQ(run_cli("sweep --heights 0.5 --directions forward " + ok + out), 1);
  EXPECT_EQ(run_cli("sweep --heights 0.2 --directions up " + ok + out), 1);
  EXPECT_EQ(run_cli("feasibility " + ok + out), 0);
  const auto log = write_text(dir / "log.csv", "t,i_fl\n0,2\n").string();
  EXPECT_EQ(run_cli("analyze " + log + out), 0);
  EXPECT_EQ(run_cli("analyze " + log + " --torque-constant 0.5"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "sweep.csv"));
}
