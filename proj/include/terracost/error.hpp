// Copyright 2026 The Terracost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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
#include <utility>

namespace terracost {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is the 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation left the real domain of an operation (log of a negative,
/// division by zero, ...). Names the offending subexpression.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// A field was queried outside its footprint.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// A precondition on caller-supplied arguments does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The problem admits no grid path (empty stage, infeasible endpoint).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the path count exceeds the cap.
class CapExceeded : public Error {
 public:
  CapExceeded(double path_count, double cap)
      : Error("path count " + std::to_string(path_count) + " exceeds cap " +
              std::to_string(cap)),
        path_count_(path_count) {}

  double path_count() const noexcept { return path_count_; }

 private:
  double path_count_;
};

}  // namespace terracost
