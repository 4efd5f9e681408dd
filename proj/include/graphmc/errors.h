// Copyright 2026 The graphmc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHMC_ERRORS_H_
#define GRAPHMC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphmc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (bad graph, wrong dimensions,
// out-of-domain values).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An iterative solver hit its iteration cap before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved, int iterations)
      : Error(what), achieved_(achieved), iterations_(iterations) {}

  // Residual or KKT violation reached when the solver gave up.
  double achieved() const { return achieved_; }
  int iterations() const { return iterations_; }

 private:
  double achieved_;
  int iterations_;
};

// Malformed text input. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operation requested in a mode that cannot support it.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphmc

#endif  // GRAPHMC_ERRORS_H_
