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
#ifndef VALGUARD_SPLIT_HPP
#define VALGUARD_SPLIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "valguard/dataset.hpp"
#include "valguard/rng.hpp"

namespace valguard {

enum class SplitKind { random, stratified, grouped, time_blocked };

struct SplitPolicy {
  SplitKind kind = SplitKind::random;
  /// 0 means auto: leave-one-out for n <= 25 rows, otherwise 10 folds for the
  /// outer loop and 7 for the inner loop.
  std::size_t n_folds = 0;
  /// time_blocked only: rows dropped on each side of every fold boundary.
  std::size_t gap = 0;
  /// stratified only: Y column whose values define the classes.
  std::size_t strat_y_col = 0;
};

/// Assignment of every row to a fold, or to no fold at all (time-gap rows).
struct SplitPlan {
  static constexpr std::ptrdiff_t kExcluded = -1;
  std::vector<std::ptrdiff_t> fold_of_row;
  std::size_t n_folds = 0;

  std::vector<std::size_t> fold_rows(std::size_t f) const;
  /// All non-excluded rows outside fold f (the build portion).
  std::vector<std::size_t> complement_rows(std::size_t f) const;
  /// JSON array of per-row fold indices (-1 for excluded rows).
  std::string to_json() const;
};

/// Resolves n_folds == 0 to the default for the data size.
std::size_t resolve_n_folds(const SplitPolicy& policy, std::size_t n_rows, bool inner);

/// Deterministic function of (policy, dataset annotations, rng).
///   random:       uniform shuffle, then contiguous chunks.
///   stratified:   per-class shuffle, class counts per fold within +-1.
///   grouped:      whole groups per fold, balanced by size greedily.
///   time_blocked: contiguous time intervals with `gap` rows dropped on each
///                 side of every internal boundary.
SplitPlan make_split(const SplitPolicy& policy, const Dataset& ds, RngStream rng);

std::string to_string(SplitKind kind);
SplitKind split_kind_from_string(const std::string& s);

}  // namespace valguard

#endif
