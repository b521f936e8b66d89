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
#include "valguard/dataset.hpp"

#include <cmath>

#include "valguard/errors.hpp"

namespace valguard {

void Dataset::validate() const {
  const std::size_t n = X.rows();
  if (Y && Y->rows() != n) throw DataError("dataset: Y row count differs from X");
  if (group_labels && group_labels->size() != n)
    throw DataError("dataset: group label count differs from X rows");
  if (timestamps && timestamps->size() != n)
    throw DataError("dataset: timestamp count differs from X rows");
  if (variable_names && variable_names->size() != X.cols())
    throw DataError("dataset: variable name count differs from X columns");
  if (y_names && (!Y || y_names->size() != Y->cols()))
    throw DataError("dataset: y name count differs from Y columns");
  for (double v : X.values())
    if (!std::isfinite(v)) throw DataError("dataset: non-finite value in X");
  if (Y)
    for (double v : Y->values())
      if (!std::isfinite(v)) throw DataError("dataset: non-finite value in Y");
  if (timestamps)
    for (double v : *timestamps)
      if (!std::isfinite(v)) throw DataError("dataset: non-finite timestamp");
}

Dataset gather_dataset_rows(const Dataset& ds, std::span<const std::size_t> idx) {
  Dataset out;
  out.X = gather_rows(ds.X, idx);
  if (ds.Y) out.Y = gather_rows(*ds.Y, idx);
  if (ds.group_labels) {
    std::vector<std::string> g;
    g.reserve(idx.size());
    for (std::size_t i : idx) g.push_back((*ds.group_labels)[i]);
    out.group_labels = std::move(g);
  }
  if (ds.timestamps) {
    std::vector<double> t;
    t.reserve(idx.size());
    for (std::size_t i : idx) t.push_back((*ds.timestamps)[i]);
    out.timestamps = std::move(t);
  }
  out.variable_names = ds.variable_names;
  out.y_names = ds.y_names;
  return out;
}

}  // namespace valguard
