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

#ifndef SWEEPCTL_ERRORS_H_
#define SWEEPCTL_ERRORS_H_

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace sweepctl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidFleet : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A point lies outside a polyhedron by more than the activity band.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, int worst_index, double residual)
      : Error(what), worst_index_(worst_index), residual_(residual) {}
  int worst_index() const { return worst_index_; }
  double residual() const { return residual_; }

 private:
  int worst_index_;
  double residual_;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class UndefinedGradient : public Error {
 public:
  using Error::Error;
};

// Raised by the simulator; carries the failing step and the last good state.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, int step, Eigen::VectorXd state)
      : Error(what), step_(step), state_(std::move(state)) {}
  int step() const { return step_; }
  const Eigen::VectorXd& state() const { return state_; }

 private:
  int step_;
  Eigen::VectorXd state_;
};

class MisalignedContact : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace sweepctl

#endif  // SWEEPCTL_ERRORS_H_
