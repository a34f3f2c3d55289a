/*
 * Copyright 2026 The Arx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARX_ERROR_H_
#define ARX_ERROR_H_

#include <stdexcept>
#include <string>

namespace arx {

// Base class for every failure raised by the library. The command-line tool
// maps these to the "data error" exit code; anything else is internal.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CSV cells, labels, cohorts).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration (generator config, PROFUND table, hyperparameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Shape disagreement between a fitted transformer/model and its input.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// A learner could not be fitted (single-class labels, rank deficiency, ...).
class FitError : public Error {
 public:
  using Error::Error;
};

// Persistence failures.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

class VersionMismatchError : public FormatError {
 public:
  VersionMismatchError(int found, int expected)
      : FormatError("unsupported format version " + std::to_string(found) +
                    " (expected " + std::to_string(expected) + ")"),
        found_(found),
        expected_(expected) {}

  int found() const { return found_; }
  int expected() const { return expected_; }

 private:
  int found_;
  int expected_;
};

}  // namespace arx

#endif  // ARX_ERROR_H_
