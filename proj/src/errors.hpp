// Copyright 2026 The selftrain Authors. All Rights Reserved.
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

#ifndef SELFTRAIN_ERRORS_HPP_
#define SELFTRAIN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace selftrain {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to a library call (dimension mismatch, out-of-range knob).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent experiment / generator configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File I/O failures and malformed on-disk artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Validation set has no correct (or no incorrect) predictions, so the ROC
// threshold search is undefined. Callers fall back to the median entropy.
class DegenerateValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace selftrain

#endif  // SELFTRAIN_ERRORS_HPP_
