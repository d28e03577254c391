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

// Command line front end: simulate, optimize, certify, converge and batch.
//
// Exit codes: 0 success, 1 parse error, 2 numerical failure, 3 partial batch.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sweepctl/errors.h"
#include "sweepctl/harness.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPartialBatch = 3;

int ExitCode(const sweepctl::RunRecord& record) {
  switch (record.status) {
    case sweepctl::RunStatus::kOk:
      return kExitOk;
    case sweepctl::RunStatus::kParseError:
      return kExitParse;
    case sweepctl::RunStatus::kNumericalError:
      return kExitNumerical;
  }
  return kExitNumerical;
}

std::optional<sweepctl::Command> CommandFromName(const std::string& name) {
  using sweepctl::Command;
  for (Command c : {Command::kSimulate, Command::kOptimize, Command::kCertify,
                    Command::kConverge}) {
    if (sweepctl::CommandName(c) == name) return c;
  }
  return std::nullopt;
}

struct Flags {
  std::string out = "runs";
  std::string file;
  std::optional<int> m;
  std::string family;
  std::string controls;
  std::string mode;
  std::optional<int> budget;
  std::optional<std::uint64_t> seed;
  std::string m_range = "6:11";
  int jobs = 0;
  std::string batch_command = "optimize";
};

sweepctl::RunOptions ToRunOptions(const Flags& f) {
  sweepctl::RunOptions options;
  options.out_dir = f.out;
  options.exponent = f.m;
  options.budget = f.budget;
  options.seed = f.seed;
  if (!f.family.empty()) options.family = sweepctl::ParseFamily(f.family);
  if (!f.controls.empty()) {
    options.controls = sweepctl::ParseVectorList(f.controls);
  }
  if (f.mode == "constant") {
    options.cells = 1;
  } else if (f.mode.starts_with("piecewise:")) {
    const int k = std::stoi(f.mode.substr(10));
    if (k < 1) throw sweepctl::InvalidArgument("piecewise:K needs K >= 1");
    options.cells = k;
  } else if (!f.mode.empty()) {
    throw sweepctl::InvalidArgument("--mode must be constant or piecewise:K");
  }
  const auto colon = f.m_range.find(':');
  if (colon == std::string::npos) {
    throw sweepctl::InvalidArgument("--m-range expects LO:HI");
  }
  options.converge_lo = std::stoi(f.m_range.substr(0, colon));
  options.converge_hi = std::stoi(f.m_range.substr(colon + 1));
  return options;
}

void PrintRecord(const sweepctl::RunRecord& record) {
  std::cout << record.SummaryText();
  if (!record.directory.empty()) {
    std::cout << "record = " << record.directory.string() << "\n";
  }
  if (!record.ok()) std::cerr << "error: " << record.message << "\n";
}

int RunSingle(sweepctl::Command command, const Flags& flags) {
  sweepctl::Scenario scenario;
  try {
    scenario = sweepctl::LoadScenario(flags.file);
  } catch (const sweepctl::ParseError& e) {
    std::cerr << flags.file << ": " << e.what() << "\n";
    return kExitParse;
  }
  const sweepctl::RunRecord record =
      sweepctl::Run(scenario, command, ToRunOptions(flags));
  PrintRecord(record);
  return ExitCode(record);
}

int RunBatch(const Flags& flags) {
  const auto command = CommandFromName(flags.batch_command);
  if (!command) {
    std::cerr << "unknown batch command '" << flags.batch_command << "'\n";
    return kExitParse;
  }
  const sweepctl::BatchResult result =
      sweepctl::Batch(flags.file, *command, ToRunOptions(flags), flags.jobs);
  int failed = 0;
  for (size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    std::cout << result.files[i].filename().string() << ": "
              << (r.ok() ? "ok" : "failed");
    if (r.ok()) std::cout << " cost=" << r.cost;
    if (!r.ok()) std::cout << " (" << r.message << ")";
    std::cout << "\n";
    failed += r.ok() ? 0 : 1;
  }
  if (!result.index.empty()) {
    std::cout << "index = " << result.index.string() << "\n";
  }
  return failed ? kExitPartialBatch : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled sweeping process simulation and optimal control"};
  app.set_version_flag("--version", std::string(sweepctl::kVersion));
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", flags.out, "Output directory for run records")
        ->capture_default_str();
  };
  auto add_m = [&](CLI::App* sub) {
    sub->add_option("--m", flags.m, "Grid exponent; h = T / 2^m")
        ->check(CLI::Range(0, 20));
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate a fixed control");
  simulate->add_option("file", flags.file, "Scenario file")->required();
  add_m(simulate);
  simulate->add_option("--family", flags.family, "corridor or disks")
      ->check(CLI::IsMember({"corridor", "disks"}));
  simulate->add_option("--u", flags.controls, "Constant controls v1,v2,...");
  add_common(simulate);

  auto* optimize = app.add_subcommand("optimize", "Minimize the terminal cost");
  optimize->add_option("file", flags.file, "Scenario file")->required();
  add_m(optimize);
  optimize->add_option("--mode", flags.mode, "constant or piecewise:K");
  optimize->add_option("--budget", flags.budget, "Cost evaluation budget")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--seed", flags.seed, "Random seed for restarts");
  optimize->add_option("--family", flags.family, "corridor or disks")
      ->check(CLI::IsMember({"corridor", "disks"}));
  add_common(optimize);

  auto* certify =
      app.add_subcommand("certify", "Check the necessary conditions");
  certify->add_option("file", flags.file, "Scenario file")->required();
  certify->add_option("--u", flags.controls, "Constant controls v1,v2,...")
      ->required();
  add_m(certify);
  add_common(certify);

  auto* converge =
      app.add_subcommand("converge", "Sup-norm deltas across grid exponents");
  converge->add_option("file", flags.file, "Scenario file")->required();
  converge->add_option("--m-range", flags.m_range, "LO:HI")
      ->capture_default_str();
  converge->add_option("--u", flags.controls, "Constant controls v1,v2,...");
  converge->add_option("--family", flags.family, "corridor or disks")
      ->check(CLI::IsMember({"corridor", "disks"}));
  add_common(converge);

  auto* batch =
      app.add_subcommand("batch", "Run every scenario in a directory");
  batch->add_option("dir", flags.file, "Scenario directory")->required();
  batch->add_option("--jobs", flags.jobs, "Worker count (default: CPU count)")
      ->check(CLI::NonNegativeNumber);
  batch
      ->add_option("--command", flags.batch_command,
                   "simulate, optimize, certify or converge")
      ->capture_default_str();
  add_m(batch);
  add_common(batch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitParse;
  }

  try {
    if (simulate->parsed())
      return RunSingle(sweepctl::Command::kSimulate, flags);
    if (optimize->parsed())
      return RunSingle(sweepctl::Command::kOptimize, flags);
    if (certify->parsed()) return RunSingle(sweepctl::Command::kCertify, flags);
    if (converge->parsed())
      return RunSingle(sweepctl::Command::kConverge, flags);
    if (batch->parsed()) return RunBatch(flags);
  } catch (const sweepctl::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: malformed option value\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitParse;
}
