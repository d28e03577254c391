// Copyright 2026 The sweepctl Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWEEPCTL_HARNESS_H_
#define SWEEPCTL_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sweepctl/model.h"
#include "sweepctl/opt.h"
#include "sweepctl/pmp.h"
#include "sweepctl/sweep.h"

namespace sweepctl {

inline constexpr std::string_view kVersion = "0.1.0";

struct RobotRow {
  double x = 0.0;
  double y = 0.0;
  double speed = 1.0;
  std::optional<double> theta_deg;
};

// Parsed scenario file.
//
//   # comment
//   name = two_robots
//   radius = 1
//   horizon = 2
//   bound = 10            (scalar, or one value per robot: 10,10)
//   theta_deg = 45        (optional; default is the position angle)
//   family = corridor     (corridor | disks)
//   theta_mode = frozen   (frozen | tracking; default depends on command)
//   m = 9
//   optimizer = multistart  (multistart | pattern | gradient | grid)
//   grid_density = 21
//   mode = constant       (constant | piecewise:K)
//   seed = 1
//   budget = 4000
//   controls = 1,1        (controls used by simulate and certify)
//   robots:
//   2 2 3                 (X Y s [theta_deg])
//   3 3 1
struct Scenario {
  std::string name = "scenario";
  std::vector<RobotRow> robots;
  double radius = 0.0;
  double horizon = 0.0;
  Vector bounds;
  std::optional<double> theta_deg;
  ConstraintFamily family = ConstraintFamily::kCorridor;
  std::optional<ThetaMode> theta_mode;
  int exponent = 9;
  std::string optimizer = "multistart";
  int grid_density = 21;
  int cells = 1;
  std::uint64_t seed = 1;
  int budget = 4000;
  std::optional<Vector> controls;
  std::string source_text;
};

// Strict parse; unknown keys and malformed rows raise ParseError with the
// offending line number.
Scenario ParseScenario(std::string_view text);
// Reads and parses a file; the name defaults to the file stem.
Scenario LoadScenario(const std::filesystem::path& path);
ProblemSpec ToProblemSpec(const Scenario& scenario, ThetaMode default_mode);

enum class Command { kSimulate, kOptimize, kCertify, kConverge };

std::string_view CommandName(Command command);
std::string_view FamilyName(ConstraintFamily family);
ConstraintFamily ParseFamily(std::string_view text);
std::string FormatVector(const Vector& v);
Vector ParseVectorList(std::string_view text);

// Command-line overrides of scenario settings.
struct RunOptions {
  std::filesystem::path out_dir;  // empty: nothing is written
  std::optional<int> exponent;
  std::optional<ConstraintFamily> family;
  std::optional<Vector> controls;
  std::optional<int> cells;
  std::optional<int> budget;
  std::optional<std::uint64_t> seed;
  int converge_lo = 6;
  int converge_hi = 11;
};

enum class RunStatus { kOk, kParseError, kNumericalError };

struct ConvergenceRow {
  int exponent = 0;
  double step = 0.0;
  double sup_delta = 0.0;  // distance between the 2^m and 2^(m+1) runs
};

struct RunRecord {
  std::string scenario_name;
  Command command = Command::kSimulate;
  RunStatus status = RunStatus::kOk;
  std::string message;
  std::map<std::string, std::string> resolved;  // resolved configuration
  double cost = 0.0;
  std::optional<Trajectory> trajectory;
  std::optional<OptResult> optimization;
  std::optional<ConditionReport> conditions;
  std::vector<ConvergenceRow> convergence;
  double wall_seconds = 0.0;
  std::string timestamp;  // UTC, ISO 8601 basic format
  std::string version = std::string(kVersion);
  std::filesystem::path directory;

  bool ok() const { return status == RunStatus::kOk; }
  std::string SummaryText() const;
};

// Executes one command. Library errors are captured in the record.
RunRecord Run(const Scenario& scenario, Command command,
              const RunOptions& options);

struct BatchResult {
  std::vector<RunRecord> records;  // sorted by file name
  std::vector<std::filesystem::path> files;
  std::filesystem::path index;  // CSV summary; empty when not written
  bool all_ok() const;
};

// Runs `command` on every regular file of `dir` with up to `jobs` workers
// (0: hardware concurrency). Throws Error when the directory is unreadable.
BatchResult Batch(const std::filesystem::path& dir, Command command,
                  const RunOptions& options, int jobs = 0);

// Trajectory CSV: header t,x_1_1,x_1_2,...,u_1,...,eta_1,... and one row
// per grid node; the last node repeats the final cell's controls and etas.
std::string TrajectoryCsv(const Trajectory& traj);

struct TrajectoryTable {
  std::vector<double> times;
  Matrix states;
  Matrix controls;
  Matrix etas;
};

TrajectoryTable ReadTrajectoryCsv(const std::filesystem::path& path);

}  // namespace sweepctl

#endif  // SWEEPCTL_HARNESS_H_
