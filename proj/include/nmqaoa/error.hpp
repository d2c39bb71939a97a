// Copyright 2026 The nmqaoa Authors
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

#include <stdexcept>
#include <string>

namespace nmqaoa {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on shapes, indices or ranges was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An experiment configuration failed validation. Maps to CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical solver could not produce a valid result. Maps to CLI exit code 3.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// The first-order jump probability exceeded its validity bound.
class StepSizeError : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace nmqaoa
