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
#ifndef VALGUARD_CSV_HPP
#define VALGUARD_CSV_HPP

#include <optional>
#include <string>
#include <vector>

#include "valguard/dataset.hpp"

namespace valguard {

/// Column reference: either a header name or a zero-based index.
/// Parsed from text such as "y", "3", or "y1,y2". A token that is all digits
/// is an index; anything else is a name (which requires a header row).
struct ColumnSelector {
  std::vector<std::string> names;
  std::vector<std::size_t> indices;

  static ColumnSelector parse(const std::string& text);
  bool empty() const { return names.empty() && indices.empty(); }
};

/// Loads a comma-separated file. The first row is a header iff any of its
/// cells is non-numeric; '.' is the decimal separator. Columns named by
/// y_cols are routed to Y, group_col to group labels (kept as strings),
/// time_col to timestamps (numeric). Remaining columns form X. Every X/Y/time
/// cell must parse as a finite number.
Dataset load_dataset(const std::string& path, const ColumnSelector& y_cols = {},
                     const std::optional<std::string>& group_col = std::nullopt,
                     const std::optional<std::string>& time_col = std::nullopt);

/// Writes a dataset as CSV with a header row (x columns, then y, group, time).
void write_dataset_csv(const Dataset& ds, const std::string& path);

}  // namespace valguard

#endif
