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
#ifndef VALGUARD_PREPROCESS_HPP
#define VALGUARD_PREPROCESS_HPP

#include <span>
#include <string>
#include <vector>

#include "valguard/matrix.hpp"

namespace valguard {

// Variable-wise kinds (mean_center, autoscale) learn parameters from the
// build rows and must never see test rows; row-internal kinds (row_normalize,
// interval_center) take their statistics from each row itself, so applying
// them to unseen rows is consistent with real-life use.

enum class PreprocKind { none, mean_center, autoscale, row_normalize, interval_center };

struct PreprocSpec {
  PreprocKind kind = PreprocKind::none;
  /// interval_center only: interior cut points that partition the variable
  /// range [0, p). Empty means one interval covering all columns.
  std::vector<std::size_t> interval_cuts;
};

/// Learned preprocessing parameters. For row-internal kinds this is just a
/// marker (means/scales stay empty).
struct FittedPreproc {
  PreprocKind kind = PreprocKind::none;
  std::size_t n_vars = 0;
  std::vector<double> means;
  std::vector<double> scales;
  std::vector<std::size_t> interval_cuts;

  bool is_row_internal() const {
    return kind == PreprocKind::row_normalize || kind == PreprocKind::interval_center;
  }
};

/// Estimates preprocessing parameters from build rows only. Autoscale uses
/// the sample standard deviation (n-1) and rejects zero-variance columns.
FittedPreproc fit_preproc(const PreprocSpec& spec, const Matrix& x_build);

/// Pure function of (fp, input): variable-wise kinds subtract stored means
/// and divide stored scales; row-internal kinds recompute statistics from
/// each input row.
Matrix apply_preproc(const FittedPreproc& fp, const Matrix& x_any);

/// Maps preprocessed values back to original units. Only defined for
/// variable-wise kinds (none, mean_center, autoscale).
Matrix invert_preproc(const FittedPreproc& fp, const Matrix& x_pre);

/// Restriction of a variable-wise fit to a column subset (after variable
/// selection). Row-internal kinds cannot be restricted.
FittedPreproc subset_preproc(const FittedPreproc& fp, std::span<const std::size_t> idx);

std::string to_string(PreprocKind kind);
PreprocKind preproc_kind_from_string(const std::string& s);

}  // namespace valguard

#endif
