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
#ifndef VALGUARD_DATASET_HPP
#define VALGUARD_DATASET_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valguard/matrix.hpp"

namespace valguard {

/// Observations-by-variables block with optional response block and per-row
/// annotations. Immutable by convention after construction.
struct Dataset {
  Matrix X;
  std::optional<Matrix> Y;
  std::optional<std::vector<std::string>> group_labels;
  std::optional<std::vector<double>> timestamps;
  std::optional<std::vector<std::string>> variable_names;  // X columns
  std::optional<std::vector<std::string>> y_names;         // Y columns

  std::size_t rows() const noexcept { return X.rows(); }

  /// Throws DataError when per-row annotations disagree with X.rows or a
  /// value is non-finite.
  void validate() const;
};

/// Row subset of a dataset in the requested order, carrying annotations.
Dataset gather_dataset_rows(const Dataset& ds, std::span<const std::size_t> idx);

}  // namespace valguard

#endif
