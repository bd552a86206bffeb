// Copyright 2026 The Sketchlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sketchlab {

// Base class of every library error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dense factorization routine failed to converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Rank-one update denominator fell below the update floor: the new row is
// numerically inside the existing row space.
class DegenerateUpdate : public Error {
 public:
  using Error::Error;
};

// An operation that needs at least one nonzero singular value received the
// zero matrix.
class ZeroMatrix : public Error {
 public:
  using Error::Error;
};

// The surrogate passed to psd_interval is not positive definite.
class SingularSurrogate : public Error {
 public:
  using Error::Error;
};

// Sketch size k >= rank of the spectrum: the implicit gamma equation has no
// finite solution.
class KExceedsRank : public Error {
 public:
  using Error::Error;
};

// Decay profile parameters outside their validity range.
class InvalidProfile : public Error {
 public:
  using Error::Error;
};

// The spectrum has a zero smallest singular value where a positive one is
// required (worst-case convergence rates).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// Malformed input data; line() is 1-based, 0 when the whole stream is at
// fault (e.g. empty input).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sketchlab
