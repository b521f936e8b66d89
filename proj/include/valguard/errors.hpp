/*
 * Copyright 2026 the valguard authors.
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
#ifndef VALGUARD_ERRORS_HPP
#define VALGUARD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace valguard {

// Error taxonomy mirrors the CLI exit codes: config 2, data 3, degenerate 4.

/// Malformed or inconsistent configuration (bad field, conflicting options).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Unusable input data (missing file, non-numeric cell, infeasible split).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A computation that cannot proceed on this data (zero variance, constant
/// response, rank exhaustion).
class DegenerateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace valguard

#endif
