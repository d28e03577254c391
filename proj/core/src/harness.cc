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

#include "sweepctl/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "sweepctl/errors.h"

namespace sweepctl {
namespace {

namespace fs = std::filesystem;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool ParseDouble(std::string_view text, double& out) {
  text = Trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(out);
}

double RequireDouble(std::string_view text, int line, std::string_view key) {
  double v = 0.0;
  if (!ParseDouble(text, v)) {
    throw ParseError("'" + std::string(key) + "' expects a number, got '" +
                         std::string(Trim(text)) + "'",
                     line);
  }
  return v;
}

long long RequireInt(std::string_view text, int line, std::string_view key) {
  text = Trim(text);
  long long v = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("'" + std::string(key) + "' expects an integer", line);
  }
  return v;
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> parts;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) parts.push_back(s.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::string Hex8(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(8) << std::setfill('0')
      << static_cast<std::uint32_t>(h ^ (h >> 32));
  return out.str();
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string Number(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

fs::path CreateUniqueDirectory(const fs::path& parent,
                               const std::string& stem) {
  fs::create_directories(parent);
  for (int suffix = 0;; ++suffix) {
    const fs::path candidate =
        parent / (suffix == 0 ? stem : stem + "-" + std::to_string(suffix));
    if (fs::create_directory(candidate)) return candidate;
  }
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string CsvQuote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

std::string_view StatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kOk:
      return "ok";
    case RunStatus::kParseError:
      return "parse_error";
    case RunStatus::kNumericalError:
      return "failed";
  }
  return "failed";
}

std::string_view ThetaModeName(ThetaMode mode) {
  return mode == ThetaMode::kFrozen ? "frozen" : "tracking";
}

}  // namespace

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kSimulate:
      return "simulate";
    case Command::kOptimize:
      return "optimize";
    case Command::kCertify:
      return "certify";
    case Command::kConverge:
      return "converge";
  }
  return "simulate";
}

std::string_view FamilyName(ConstraintFamily family) {
  return family == ConstraintFamily::kCorridor ? "corridor" : "disks";
}

ConstraintFamily ParseFamily(std::string_view text) {
  text = Trim(text);
  if (text == "corridor") return ConstraintFamily::kCorridor;
  if (text == "disks") return ConstraintFamily::kDisks;
  throw InvalidArgument("unknown constraint family '" + std::string(text) +
                        "'");
}

std::string FormatVector(const Vector& v) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (int i = 0; i < v.size(); ++i) out << (i ? "," : "") << v(i);
  return out.str();
}

Vector ParseVectorList(std::string_view text) {
  std::vector<double> values;
  while (true) {
    const auto comma = text.find(',');
    double v = 0.0;
    if (!ParseDouble(text.substr(0, comma), v)) {
      throw InvalidArgument("malformed number list '" + std::string(text) +
                            "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Eigen::Map<Vector>(values.data(),
                            static_cast<Eigen::Index>(values.size()));
}

Scenario ParseScenario(std::string_view text) {
  Scenario sc;
  sc.source_text = std::string(text);
  std::map<std::string, int> seen;
  bool in_robots = false;
  int robots_line = 0;
  std::optional<std::pair<Vector, int>> bound_list;
  std::optional<std::pair<Vector, int>> control_list;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos
                                                       : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    if (line == "robots:") {
      if (robots_line) throw ParseError("duplicate robots block", line_no);
      robots_line = line_no;
      in_robots = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      if (!in_robots) {
        throw ParseError("expected 'key = value' or 'robots:'", line_no);
      }
      const auto fields = SplitWhitespace(line);
      if (fields.size() < 3 || fields.size() > 4) {
        throw ParseError("malformed robot row: expected 'X Y s [theta_deg]'",
                         line_no);
      }
      RobotRow row;
      row.x = RequireDouble(fields[0], line_no, "X");
      row.y = RequireDouble(fields[1], line_no, "Y");
      row.speed = RequireDouble(fields[2], line_no, "s");
      if (!(row.speed > 0.0)) {
        throw ParseError("robot speed must be positive", line_no);
      }
      if (fields.size() == 4) {
        row.theta_deg = RequireDouble(fields[3], line_no, "theta_deg");
      }
      sc.robots.push_back(row);
      continue;
    }
    in_robots = false;
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (seen.count(key))
      throw ParseError("duplicate key '" + key + "'", line_no);
    seen[key] = line_no;
    if (value.empty())
      throw ParseError("empty value for '" + key + "'", line_no);

    if (key == "name") {
      sc.name = std::string(value);
    } else if (key == "radius") {
      sc.radius = RequireDouble(value, line_no, key);
      if (!(sc.radius > 0.0))
        throw ParseError("radius must be positive", line_no);
    } else if (key == "horizon") {
      sc.horizon = RequireDouble(value, line_no, key);
      if (!(sc.horizon > 0.0)) {
        throw ParseError("horizon must be positive", line_no);
      }
    } else if (key == "bound" || key == "controls") {
      Vector v;
      try {
        v = ParseVectorList(value);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
      }
      if ((v.array() < 0.0).any()) {
        throw ParseError("'" + key + "' values must be nonnegative", line_no);
      }
      (key == "bound" ? bound_list : control_list) = std::make_pair(v, line_no);
    } else if (key == "theta_deg") {
      sc.theta_deg = RequireDouble(value, line_no, key);
    } else if (key == "family") {
      if (value == "corridor") {
        sc.family = ConstraintFamily::kCorridor;
      } else if (value == "disks") {
        sc.family = ConstraintFamily::kDisks;
      } else {
        throw ParseError("family must be corridor or disks", line_no);
      }
    } else if (key == "theta_mode") {
      if (value == "frozen") {
        sc.theta_mode = ThetaMode::kFrozen;
      } else if (value == "tracking") {
        sc.theta_mode = ThetaMode::kTracking;
      } else {
        throw ParseError("theta_mode must be frozen or tracking", line_no);
      }
    } else if (key == "m") {
      const long long m = RequireInt(value, line_no, key);
      if (m < 0 || m > 20) throw ParseError("m must lie in [0, 20]", line_no);
      sc.exponent = static_cast<int>(m);
    } else if (key == "optimizer") {
      if (value != "multistart" && value != "pattern" && value != "gradient" &&
          value != "grid") {
        throw ParseError("unknown optimizer '" + std::string(value) + "'",
                         line_no);
      }
      sc.optimizer = std::string(value);
    } else if (key == "grid_density") {
      const long long g = RequireInt(value, line_no, key);
      if (g < 1) throw ParseError("grid_density must be >= 1", line_no);
      sc.grid_density = static_cast<int>(g);
    } else if (key == "mode") {
      if (value == "constant") {
        sc.cells = 1;
      } else if (value.starts_with("piecewise:")) {
        const long long k = RequireInt(value.substr(10), line_no, key);
        if (k < 1)
          throw ParseError("piecewise cell count must be >= 1", line_no);
        sc.cells = static_cast<int>(k);
      } else {
        throw ParseError("mode must be constant or piecewise:K", line_no);
      }
    } else if (key == "seed") {
      const long long s = RequireInt(value, line_no, key);
      if (s < 0) throw ParseError("seed must be nonnegative", line_no);
      sc.seed = static_cast<std::uint64_t>(s);
    } else if (key == "budget") {
      const long long b = RequireInt(value, line_no, key);
      if (b < 1) throw ParseError("budget must be >= 1", line_no);
      sc.budget = static_cast<int>(b);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
  }

  for (const char* key : {"radius", "horizon", "bound"}) {
    if (!seen.count(key)) {
      throw ParseError("missing mandatory key '" + std::string(key) + "'", 0);
    }
  }
  if (!robots_line) throw ParseError("missing robots block", 0);
  const int n = static_cast<int>(sc.robots.size());
  if (n < 2) {
    throw ParseError("n < 2: a scenario needs at least two robots",
                     robots_line);
  }
  const Vector& b = bound_list->first;
  if (b.size() == 1) {
    sc.bounds = Vector::Constant(n, b(0));
  } else if (b.size() == n) {
    sc.bounds = b;
  } else {
    throw ParseError("bound needs 1 or n values", bound_list->second);
  }
  if (control_list) {
    if (control_list->first.size() != n) {
      throw ParseError("controls need one value per robot",
                       control_list->second);
    }
    if (((control_list->first - sc.bounds).array() > 0.0).any()) {
      throw ParseError("controls exceed the bounds", control_list->second);
    }
    sc.controls = control_list->first;
  }
  return sc;
}

Scenario LoadScenario(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario sc = ParseScenario(buf.str());
  if (sc.name == "scenario" && buf.str().find("name") == std::string::npos) {
    sc.name = path.stem().string();
  }
  return sc;
}

ProblemSpec ToProblemSpec(const Scenario& scenario, ThetaMode default_mode) {
  std::vector<RobotSpec> robots;
  for (const RobotRow& row : scenario.robots) {
    RobotSpec r;
    r.x0 = {row.x, row.y};
    r.speed = row.speed;
    const std::optional<double> deg =
        row.theta_deg ? row.theta_deg : scenario.theta_deg;
    if (deg) {
      double rad = std::fmod(*deg, 360.0);
      if (rad < 0.0) rad += 360.0;
      r.theta0 = rad * std::numbers::pi / 180.0;
      if (r.theta0 >= 2.0 * std::numbers::pi) r.theta0 = 0.0;
    } else {
      r.theta0 = PositionAngle(r.x0);
    }
    robots.push_back(r);
  }
  ProblemSpec spec{FleetConfig(std::move(robots), scenario.radius),
                   ControlRegion{scenario.bounds}, scenario.horizon,
                   scenario.theta_mode.value_or(default_mode)};
  spec.Validate();
  return spec;
}

std::string RunRecord::SummaryText() const {
  std::ostringstream out;
  out << "scenario = " << scenario_name << "\n";
  out << "command = " << CommandName(command) << "\n";
  out << "status = " << StatusName(status) << "\n";
  if (!message.empty()) out << "message = " << message << "\n";
  out << "timestamp = " << timestamp << "\n";
  out << "version = " << version << "\n";
  for (const auto& [key, value] : resolved)
    out << key << " = " << value << "\n";
  if (ok()) {
    out << "cost = " << Number(cost) << "\n";
    if (optimization) {
      out << "verified_cost = " << Number(optimization->verified_cost) << "\n";
      out << "evaluations = " << optimization->evaluations << "\n";
      out << "budget_exhausted = "
          << (optimization->budget_exhausted ? "true" : "false") << "\n";
      out << "best_controls = " << FormatVector(optimization->schedule.Flat())
          << "\n";
    }
    if (trajectory) {
      out << "max_violation = " << Number(trajectory->violation.maxCoeff())
          << "\n";
    }
    if (conditions) {
      out << "conditions_all_pass = "
          << (conditions->all_pass() ? "true" : "false") << "\n";
    }
  }
  out << "wall_seconds = " << Number(wall_seconds) << "\n";
  return out.str();
}

std::string TrajectoryCsv(const Trajectory& traj) {
  const int n = traj.robots();
  const int s = static_cast<int>(traj.etas.cols());
  const int steps = traj.steps();
  std::ostringstream out;
  out << std::setprecision(17);
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x_" << i << "_1,x_" << i << "_2";
  for (int i = 1; i <= n; ++i) out << ",u_" << i;
  for (int j = 1; j <= s; ++j) out << ",eta_" << j;
  out << "\n";
  for (int k = 0; k <= steps; ++k) {
    const int cell = std::min(k, steps - 1);
    out << traj.grid.time(k);
    for (int c = 0; c < 2 * n; ++c) out << "," << traj.states(k, c);
    for (int i = 0; i < n; ++i) out << "," << traj.controls(cell, i);
    for (int j = 0; j < s; ++j) out << "," << traj.etas(cell, j);
    out << "\n";
  }
  return out.str();
}

TrajectoryTable ReadTrajectoryCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  int xs = 0, us = 0, etas = 0;
  {
    std::stringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (col.starts_with("x_")) ++xs;
      if (col.starts_with("u_")) ++us;
      if (col.starts_with("eta_")) ++etas;
    }
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      double v = 0.0;
      if (!ParseDouble(cell, v)) throw Error("malformed trajectory csv");
      row.push_back(v);
    }
    if (static_cast<int>(row.size()) != 1 + xs + us + etas) {
      throw Error("trajectory csv row has the wrong width");
    }
    rows.push_back(std::move(row));
  }
  TrajectoryTable table;
  const int rcount = static_cast<int>(rows.size());
  table.states.resize(rcount, xs);
  table.controls.resize(rcount, us);
  table.etas.resize(rcount, etas);
  for (int r = 0; r < rcount; ++r) {
    table.times.push_back(rows[r][0]);
    for (int c = 0; c < xs; ++c) table.states(r, c) = rows[r][1 + c];
    for (int c = 0; c < us; ++c) table.controls(r, c) = rows[r][1 + xs + c];
    for (int c = 0; c < etas; ++c) {
      table.etas(r, c) = rows[r][1 + xs + us + c];
    }
  }
  return table;
}

namespace {

void RunSimulate(const Scenario& sc, const RunOptions& options,
                 RunRecord& record) {
  const ProblemSpec spec = ToProblemSpec(sc, ThetaMode::kTracking);
  const int m = options.exponent.value_or(sc.exponent);
  const ConstraintFamily family = options.family.value_or(sc.family);
  Vector u = options.controls ? *options.controls
             : sc.controls    ? *sc.controls
                              : Vector(spec.controls.upper.cwiseMin(1.0));
  record.resolved["m"] = std::to_string(m);
  record.resolved["family"] = FamilyName(family);
  record.resolved["theta_mode"] = ThetaModeName(spec.theta_mode);
  record.resolved["controls"] = FormatVector(u);
  if (u.size() != spec.robots()) {
    throw InvalidArgument("controls need one value per robot");
  }
  record.trajectory = Simulate(spec, ControlSchedule::Constant(u), m, family);
  record.cost = TerminalCost(record.trajectory->final_state());
}

void CertifyInto(const ProblemSpec& spec, RunRecord& record) {
  const Trajectory& traj = *record.trajectory;
  const double tol = CertificationTolerance(traj.grid.step());
  AdjointOptions adjoint;
  adjoint.activity_tol = tol;
  const Certificate cert = AdjointBackward(spec, traj, adjoint);
  record.conditions = Certify(spec, traj, cert, tol);
}

void RunOptimize(const Scenario& sc, const RunOptions& options,
                 RunRecord& record) {
  const ProblemSpec spec = ToProblemSpec(sc, ThetaMode::kFrozen);
  OptimizeOptions opt;
  opt.search.exponent = options.exponent.value_or(sc.exponent);
  opt.search.family = options.family.value_or(sc.family);
  opt.search.budget = options.budget.value_or(sc.budget);
  opt.cells = options.cells.value_or(sc.cells);
  opt.seed = options.seed.value_or(sc.seed);
  record.resolved["m"] = std::to_string(opt.search.exponent);
  record.resolved["family"] = FamilyName(opt.search.family);
  record.resolved["theta_mode"] = ThetaModeName(spec.theta_mode);
  record.resolved["optimizer"] = sc.optimizer;
  record.resolved["cells"] = std::to_string(opt.cells);
  record.resolved["budget"] = std::to_string(opt.search.budget);
  record.resolved["seed"] = std::to_string(opt.seed);

  OptResult result;
  if (sc.optimizer == "grid") {
    result = GridOracle(spec, opt.search.exponent, sc.grid_density,
                        opt.search.budget, opt.search.family);
  } else if (sc.optimizer == "pattern" || sc.optimizer == "gradient") {
    Matrix init(opt.cells, spec.robots());
    for (int k = 0; k < opt.cells; ++k) {
      init.row(k) = spec.controls.upper.cwiseMin(1.0).transpose();
    }
    result =
        sc.optimizer == "pattern"
            ? PatternSearch(spec, ControlSchedule::Piecewise(init), opt.search)
            : FdGradientDescent(spec, ControlSchedule::Piecewise(init),
                                opt.search);
  } else {
    result = Optimize(spec, opt);
  }
  if (sc.optimizer != "multistart") {
    result.verified_cost = Evaluate(spec, result.schedule,
                                    opt.search.exponent + 2, opt.search.family);
  }
  record.cost = result.cost;
  record.trajectory = result.trajectory;
  record.optimization = std::move(result);
  if (opt.search.family == ConstraintFamily::kCorridor) {
    CertifyInto(spec, record);
  }
}

void RunCertify(const Scenario& sc, const RunOptions& options,
                RunRecord& record) {
  const ProblemSpec spec = ToProblemSpec(sc, ThetaMode::kFrozen);
  const std::optional<Vector> u =
      options.controls ? options.controls : sc.controls;
  if (!u) throw InvalidArgument("certify needs controls (--u or 'controls')");
  if (u->size() != spec.robots()) {
    throw InvalidArgument("controls need one value per robot");
  }
  const int m = options.exponent.value_or(sc.exponent);
  record.resolved["m"] = std::to_string(m);
  record.resolved["family"] = "corridor";
  record.resolved["theta_mode"] = ThetaModeName(spec.theta_mode);
  record.resolved["controls"] = FormatVector(*u);
  record.trajectory = Simulate(spec, ControlSchedule::Constant(*u), m,
                               ConstraintFamily::kCorridor);
  record.cost = TerminalCost(record.trajectory->final_state());
  CertifyInto(spec, record);
}

void RunConverge(const Scenario& sc, const RunOptions& options,
                 RunRecord& record) {
  const ProblemSpec spec = ToProblemSpec(sc, ThetaMode::kTracking);
  const ConstraintFamily family = options.family.value_or(sc.family);
  const Vector u = options.controls ? *options.controls
                   : sc.controls    ? *sc.controls
                                    : Vector(spec.controls.upper.cwiseMin(1.0));
  const int lo = options.converge_lo;
  const int hi = options.converge_hi;
  if (lo < 0 || hi <= lo || hi > 20) {
    throw InvalidArgument("m-range must satisfy 0 <= lo < hi <= 20");
  }
  record.resolved["m_range"] = std::to_string(lo) + ":" + std::to_string(hi);
  record.resolved["family"] = FamilyName(family);
  record.resolved["theta_mode"] = ThetaModeName(spec.theta_mode);
  record.resolved["controls"] = FormatVector(u);
  Trajectory coarse = Simulate(spec, ControlSchedule::Constant(u), lo, family);
  for (int m = lo; m < hi; ++m) {
    Trajectory fine =
        Simulate(spec, ControlSchedule::Constant(u), m + 1, family);
    record.convergence.push_back(
        {m, coarse.grid.step(), SupNormDistance(coarse, fine)});
    coarse = std::move(fine);
  }
  record.cost = TerminalCost(coarse.final_state());
  record.trajectory = std::move(coarse);
}

void WriteRecord(const Scenario& sc, const RunOptions& options,
                 RunRecord& record) {
  std::string fingerprint = sc.source_text;
  fingerprint += CommandName(record.command);
  for (const auto& [k, v] : record.resolved) fingerprint += k + "=" + v + ";";
  record.directory =
      CreateUniqueDirectory(options.out_dir, sc.name + "-" + record.timestamp +
                                                 "-" + Hex8(fingerprint));
  WriteFile(record.directory / "scenario.txt", sc.source_text);
  if (record.ok() && record.trajectory) {
    WriteFile(record.directory / "trajectory.csv",
              TrajectoryCsv(*record.trajectory));
  }
  if (record.conditions) {
    WriteFile(record.directory / "conditions.txt", record.conditions->ToText());
  }
  if (!record.convergence.empty()) {
    std::ostringstream csv;
    csv << std::setprecision(17) << "m,h,sup_delta\n";
    for (const auto& row : record.convergence) {
      csv << row.exponent << "," << row.step << "," << row.sup_delta << "\n";
    }
    WriteFile(record.directory / "convergence.csv", csv.str());
  }
  if (record.optimization) {
    std::ostringstream log;
    log << std::setprecision(17) << "iteration,cost\n";
    for (size_t i = 0; i < record.optimization->log.size(); ++i) {
      log << i << "," << record.optimization->log[i] << "\n";
    }
    WriteFile(record.directory / "optimization_log.csv", log.str());
  }
  WriteFile(record.directory / "summary.txt", record.SummaryText());
}

}  // namespace

RunRecord Run(const Scenario& scenario, Command command,
              const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.scenario_name = scenario.name;
  record.command = command;
  record.timestamp = UtcTimestamp();
  record.resolved["command"] = CommandName(command);
  try {
    switch (command) {
      case Command::kSimulate:
        RunSimulate(scenario, options, record);
        break;
      case Command::kOptimize:
        RunOptimize(scenario, options, record);
        break;
      case Command::kCertify:
        RunCertify(scenario, options, record);
        break;
      case Command::kConverge:
        RunConverge(scenario, options, record);
        break;
    }
  } catch (const ParseError& e) {
    record.status = RunStatus::kParseError;
    record.message = e.what();
  } catch (const std::exception& e) {
    record.status = RunStatus::kNumericalError;
    record.message = e.what();
  }
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (!options.out_dir.empty()) WriteRecord(scenario, options, record);
  return record;
}

bool BatchResult::all_ok() const {
  return std::all_of(records.begin(), records.end(),
                     [](const RunRecord& r) { return r.ok(); });
}

BatchResult Batch(const fs::path& dir, Command command,
                  const RunOptions& options, int jobs) {
  BatchResult result;
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) throw Error("cannot read directory " + dir.string());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().starts_with(".")) continue;
    result.files.push_back(entry.path());
  }
  std::sort(result.files.begin(), result.files.end());

  RunOptions per_file = options;
  const std::string timestamp = UtcTimestamp();
  if (!options.out_dir.empty()) {
    std::string listing;
    for (const auto& f : result.files) listing += f.string() + "\n";
    per_file.out_dir = CreateUniqueDirectory(
        options.out_dir, fs::absolute(dir).filename().string() + "-batch-" +
                             timestamp + "-" +
                             Hex8(listing + std::string(CommandName(command))));
  }

  const int count = static_cast<int>(result.files.size());
  result.records.resize(count);
  if (jobs <= 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  jobs = std::min(jobs, std::max(count, 1));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < count; i = next++) {
      try {
        result.records[i] =
            Run(LoadScenario(result.files[i]), command, per_file);
      } catch (const std::exception& e) {
        RunRecord failed;
        failed.scenario_name = result.files[i].stem().string();
        failed.command = command;
        failed.timestamp = UtcTimestamp();
        failed.status = dynamic_cast<const ParseError*>(&e)
                            ? RunStatus::kParseError
                            : RunStatus::kNumericalError;
        failed.message = e.what();
        result.records[i] = std::move(failed);
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  if (!options.out_dir.empty()) {
    std::ostringstream csv;
    csv << std::setprecision(17)
        << "file,scenario,status,cost,wall_seconds,directory,message\n";
    for (int i = 0; i < count; ++i) {
      const RunRecord& r = result.records[i];
      csv << CsvQuote(result.files[i].filename().string()) << ","
          << CsvQuote(r.scenario_name) << "," << StatusName(r.status) << ","
          << (r.ok() ? Number(r.cost) : "") << "," << r.wall_seconds << ","
          << CsvQuote(r.directory.string()) << "," << CsvQuote(r.message)
          << "\n";
    }
    result.index = per_file.out_dir / "index.csv";
    WriteFile(result.index, csv.str());
  }
  return result;
}

}  // namespace sweepctl
