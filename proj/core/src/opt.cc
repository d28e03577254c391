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

#include "sweepctl/opt.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "sweepctl/errors.h"

namespace sweepctl {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Objective over flattened schedules with an evaluation counter.
class Objective {
 public:
  Objective(const ProblemSpec& spec, int cells, const SearchOptions& options)
      : spec_(spec), cells_(cells), options_(options) {
    const int n = spec.robots();
    upper_.resize(cells * n);
    for (int k = 0; k < cells; ++k) {
      upper_.segment(k * n, n) = spec.controls.upper;
    }
  }

  double operator()(const Vector& flat) {
    ++evaluations_;
    return Evaluate(spec_, Schedule(flat), options_.exponent, options_.family);
  }

  ControlSchedule Schedule(const Vector& flat) const {
    return ControlSchedule::FromFlat(flat, cells_, spec_.robots());
  }
  Vector Clamp(const Vector& flat) const {
    return flat.cwiseMax(0.0).cwiseMin(upper_);
  }
  const Vector& upper() const { return upper_; }
  int evaluations() const { return evaluations_; }
  bool exhausted() const { return evaluations_ >= options_.budget; }

 private:
  const ProblemSpec& spec_;
  int cells_;
  SearchOptions options_;
  Vector upper_;
  int evaluations_ = 0;
};

void Finish(const ProblemSpec& spec, const SearchOptions& options,
            OptResult& result, Clock::time_point start) {
  result.trajectory =
      Simulate(spec, result.schedule, options.exponent, options.family);
  result.cost = TerminalCost(result.trajectory.final_state());
  result.verified_cost = std::numeric_limits<double>::quiet_NaN();
  result.wall_seconds = Seconds(start);
}

// One poll over every coordinate at relative step `step`; returns true on
// the first improving move.
bool Poll(Objective& objective, Vector& x, double& fx, double step) {
  const Vector& upper = objective.upper();
  for (int c = 0; c < x.size(); ++c) {
    if (upper(c) <= 0.0) continue;
    for (double dir : {1.0, -1.0}) {
      if (objective.exhausted()) return false;
      Vector y = x;
      y(c) = std::clamp(x(c) + dir * step * upper(c), 0.0, upper(c));
      if (y(c) == x(c)) continue;
      const double fy = objective(y);
      if (fy < fx) {
        x = std::move(y);
        fx = fy;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

double Evaluate(const ProblemSpec& spec, const ControlSchedule& schedule,
                int exponent, ConstraintFamily family) {
  return TerminalCost(Simulate(spec, schedule, exponent, family).final_state());
}

OptResult GridOracle(const ProblemSpec& spec, int exponent, int density,
                     long long max_evaluations, ConstraintFamily family) {
  const auto start = Clock::now();
  if (density < 1) throw InvalidArgument("lattice density must be >= 1");
  const int n = spec.robots();
  const Vector& upper = spec.controls.upper;
  auto level = [&](int i, int k) {
    return density == 1 ? 0.0 : upper(i) * k / (density - 1);
  };
  OptResult result;
  result.method = "grid";
  std::vector<int> index(n, 0);
  double best = std::numeric_limits<double>::infinity();
  Vector best_u = Vector::Zero(n);
  while (true) {
    if (result.evaluations >= max_evaluations) {
      result.budget_exhausted = true;
      break;
    }
    Vector u(n);
    for (int i = 0; i < n; ++i) u(i) = level(i, index[i]);
    const double cost =
        Evaluate(spec, ControlSchedule::Constant(u), exponent, family);
    ++result.evaluations;
    if (cost < best) {
      best = cost;
      best_u = u;
      result.log.push_back(cost);
    }
    int digit = 0;
    while (digit < n && ++index[digit] == density) index[digit++] = 0;
    if (digit == n) break;
  }
  result.schedule = ControlSchedule::Constant(best_u);
  SearchOptions options;
  options.exponent = exponent;
  options.family = family;
  Finish(spec, options, result, start);
  return result;
}

OptResult PatternSearch(const ProblemSpec& spec, const ControlSchedule& init,
                        const SearchOptions& options) {
  const auto start = Clock::now();
  Objective objective(spec, init.cells(), options);
  Vector x = objective.Clamp(init.Flat());
  double fx = objective(x);
  OptResult result;
  result.method = "pattern";
  result.log.push_back(fx);
  double step = options.initial_step;
  while (!objective.exhausted() && step >= options.min_step) {
    if (!Poll(objective, x, fx, step)) step *= 0.5;
    result.log.push_back(fx);
  }
  result.schedule = objective.Schedule(x);
  result.evaluations = objective.evaluations();
  result.budget_exhausted = objective.exhausted();
  Finish(spec, options, result, start);
  return result;
}

Vector FiniteDifferenceGradient(const ProblemSpec& spec,
                                const ControlSchedule& schedule, int exponent,
                                double rel_step, ConstraintFamily family) {
  SearchOptions options;
  options.exponent = exponent;
  options.family = family;
  options.budget = std::numeric_limits<int>::max();
  Objective objective(spec, schedule.cells(), options);
  const Vector x = schedule.Flat();
  Vector grad = Vector::Zero(x.size());
  for (int c = 0; c < x.size(); ++c) {
    const double b = objective.upper()(c);
    if (b <= 0.0) continue;
    Vector hi = x, lo = x;
    hi(c) = std::min(x(c) + rel_step * b, b);
    lo(c) = std::max(x(c) - rel_step * b, 0.0);
    grad(c) = (objective(hi) - objective(lo)) / (hi(c) - lo(c));
  }
  return grad;
}

OptResult FdGradientDescent(const ProblemSpec& spec,
                            const ControlSchedule& init,
                            const SearchOptions& options) {
  const auto start = Clock::now();
  Objective objective(spec, init.cells(), options);
  const Vector& upper = objective.upper();
  Vector x = objective.Clamp(init.Flat());
  double fx = objective(x);
  OptResult result;
  result.method = "gradient";
  result.log.push_back(fx);
  double poll_step = options.initial_step;
  double alpha = 1.0;
  constexpr double kRelStep = 1e-5;

  while (!objective.exhausted() && poll_step >= options.min_step) {
    Vector grad = Vector::Zero(x.size());
    for (int c = 0; c < x.size() && !objective.exhausted(); ++c) {
      if (upper(c) <= 0.0) continue;
      Vector hi = x, lo = x;
      hi(c) = std::min(x(c) + kRelStep * upper(c), upper(c));
      lo(c) = std::max(x(c) - kRelStep * upper(c), 0.0);
      grad(c) = (objective(hi) - objective(lo)) / (hi(c) - lo(c));
    }
    // Projected gradient is zero: x is a fixed point of the projected step.
    const Vector probe = objective.Clamp(x - grad);
    if ((probe - x).norm() <= 1e-12 * (1.0 + upper.norm())) break;

    bool decreased = false;
    double trial_alpha = alpha;
    for (int attempt = 0; attempt < 30 && !objective.exhausted(); ++attempt) {
      const Vector y = objective.Clamp(x - trial_alpha * grad);
      const double predicted = grad.dot(x - y);
      if (predicted <= 0.0) break;
      const double fy = objective(y);
      if (fy < fx - 1e-4 * predicted) {
        x = y;
        fx = fy;
        decreased = true;
        alpha = 2.0 * trial_alpha;
        break;
      }
      trial_alpha *= 0.5;
    }
    if (!decreased) {
      // Kinks from contact changes defeat the gradient model; poll instead.
      if (!Poll(objective, x, fx, poll_step)) poll_step *= 0.5;
      alpha = 1.0;
    }
    result.log.push_back(fx);
  }
  result.schedule = objective.Schedule(x);
  result.evaluations = objective.evaluations();
  result.budget_exhausted = objective.exhausted();
  Finish(spec, options, result, start);
  return result;
}

OptResult Optimize(const ProblemSpec& spec, const OptimizeOptions& options) {
  const auto start = Clock::now();
  spec.Validate();
  const int n = spec.robots();
  const int cells = options.cells;
  if (cells < 1 ||
      (MakeGrid(spec.horizon, options.search.exponent).steps() % cells) != 0) {
    throw InvalidArgument("cell count must divide the number of steps");
  }
  auto replicate = [&](const Vector& u) {
    Matrix values(cells, n);
    for (int k = 0; k < cells; ++k) values.row(k) = u.transpose();
    return ControlSchedule::Piecewise(values);
  };
  std::vector<ControlSchedule> starts;
  starts.push_back(replicate(Vector::Zero(n)));
  starts.push_back(replicate(spec.controls.upper));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < options.random_starts; ++r) {
    Matrix values(cells, n);
    for (int k = 0; k < cells; ++k) {
      for (int i = 0; i < n; ++i)
        values(k, i) = unit(rng) * spec.controls.upper(i);
    }
    starts.push_back(ControlSchedule::Piecewise(values));
  }

  const int phases = static_cast<int>(starts.size()) + (options.polish ? 1 : 0);
  SearchOptions per_start = options.search;
  per_start.budget = std::max(1, options.search.budget / phases);

  OptResult best;
  best.cost = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool exhausted = false;
  for (const ControlSchedule& init : starts) {
    OptResult r = PatternSearch(spec, init, per_start);
    evaluations += r.evaluations;
    exhausted = exhausted || r.budget_exhausted;
    if (r.cost < best.cost) best = std::move(r);
  }
  if (options.polish) {
    OptResult r = FdGradientDescent(spec, best.schedule, per_start);
    evaluations += r.evaluations;
    if (r.cost < best.cost) {
      r.log.insert(r.log.begin(), best.log.begin(), best.log.end());
      best = std::move(r);
    }
  }
  best.method = "multistart";
  best.evaluations = evaluations;
  best.budget_exhausted = exhausted;
  if (options.verify) {
    best.verified_cost =
        Evaluate(spec, best.schedule, options.search.exponent + 2,
                 options.search.family);
  } else {
    best.verified_cost = std::numeric_limits<double>::quiet_NaN();
  }
  best.wall_seconds = Seconds(start);
  return best;
}

}  // namespace sweepctl
