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
#include "valguard/split.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "valguard/errors.hpp"

namespace valguard {

std::vector<std::size_t> SplitPlan::fold_rows(std::size_t f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i)
    if (fold_of_row[i] == static_cast<std::ptrdiff_t>(f)) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> SplitPlan::complement_rows(std::size_t f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i)
    if (fold_of_row[i] != kExcluded && fold_of_row[i] != static_cast<std::ptrdiff_t>(f))
      rows.push_back(i);
  return rows;
}

std::string SplitPlan::to_json() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < fold_of_row.size(); ++i) os << (i ? "," : "") << fold_of_row[i];
  os << "]";
  return os.str();
}

std::size_t resolve_n_folds(const SplitPolicy& policy, std::size_t n_rows, bool inner) {
  if (policy.n_folds != 0) return policy.n_folds;
  if (n_rows <= 25) return n_rows;  // leave-one-out
  return inner ? 7 : 10;
}

namespace {

void check_fold_count(std::size_t k, std::size_t n_rows) {
  if (k < 2) throw ConfigError("split: need at least 2 folds");
  if (k > n_rows)
    throw DataError("split: " + std::to_string(k) + " folds exceed " + std::to_string(n_rows) +
                    " rows");
}

SplitPlan random_split(std::size_t n, std::size_t k, RngStream& rng) {
  SplitPlan plan;
  plan.n_folds = k;
  plan.fold_of_row.assign(n, SplitPlan::kExcluded);
  const auto perm = rng.permutation(n);
  const std::size_t base = n / k, rem = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < rem ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) plan.fold_of_row[perm[pos++]] = f;
  }
  return plan;
}

SplitPlan stratified_split(const Dataset& ds, std::size_t k, std::size_t y_col, RngStream& rng) {
  if (!ds.Y) throw DataError("stratified split: dataset has no Y block");
  if (y_col >= ds.Y->cols()) throw ConfigError("stratified split: label column out of range");
  std::map<double, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < ds.rows(); ++i) classes[(*ds.Y)(i, y_col)].push_back(i);
  for (const auto& [label, idx] : classes)
    if (idx.size() < k)
      throw DataError("stratified split: class " + std::to_string(label) + " has " +
                      std::to_string(idx.size()) + " rows, fewer than " + std::to_string(k) +
                      " folds");

  SplitPlan plan;
  plan.n_folds = k;
  plan.fold_of_row.assign(ds.rows(), SplitPlan::kExcluded);
  std::vector<std::size_t> load(k, 0);
  for (auto& [label, idx] : classes) {
    rng.shuffle(idx);
    const std::size_t base = idx.size() / k, rem = idx.size() % k;
    // The +1 remainders go to the currently lightest folds so no fold
    // accumulates all the spill.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return load[a] < load[b]; });
    std::vector<std::size_t> count(k, base);
    for (std::size_t r = 0; r < rem; ++r) ++count[order[r]];
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      for (std::size_t i = 0; i < count[f]; ++i) plan.fold_of_row[idx[pos++]] = f;
      load[f] += count[f];
    }
  }
  return plan;
}

SplitPlan grouped_split(const Dataset& ds, std::size_t k, RngStream& rng) {
  if (!ds.group_labels) throw DataError("grouped split: dataset has no group labels");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ds.rows(); ++i) groups[(*ds.group_labels)[i]].push_back(i);
  if (groups.size() < k)
    throw DataError("grouped split: " + std::to_string(groups.size()) +
                    " groups, fewer than " + std::to_string(k) + " folds");

  std::vector<const std::vector<std::size_t>*> order;
  for (const auto& [label, idx] : groups) order.push_back(&idx);
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->size() > b->size(); });

  SplitPlan plan;
  plan.n_folds = k;
  plan.fold_of_row.assign(ds.rows(), SplitPlan::kExcluded);
  std::vector<std::size_t> load(k, 0);
  for (const auto* idx : order) {
    const std::size_t f =
        std::min_element(load.begin(), load.end()) - load.begin();  // lowest index wins ties
    for (std::size_t i : *idx) plan.fold_of_row[i] = static_cast<std::ptrdiff_t>(f);
    load[f] += idx->size();
  }
  return plan;
}

SplitPlan time_blocked_split(const Dataset& ds, std::size_t k, std::size_t gap) {
  if (!ds.timestamps) throw DataError("time_blocked split: dataset has no timestamps");
  const std::size_t n = ds.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return (*ds.timestamps)[a] < (*ds.timestamps)[b];
  });

  SplitPlan plan;
  plan.n_folds = k;
  plan.fold_of_row.assign(n, SplitPlan::kExcluded);
  const std::size_t base = n / k, rem = n % k;
  std::size_t pos = 0;
  std::vector<std::pair<std::size_t, std::size_t>> chunks;  // [begin, end) in time order
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < rem ? 1 : 0);
    chunks.emplace_back(pos, pos + len);
    pos += len;
  }
  for (std::size_t f = 0; f < k; ++f) {
    auto [b, e] = chunks[f];
    // Embargo: drop `gap` rows adjacent to every internal boundary.
    const std::size_t lead = (f > 0) ? gap : 0;
    const std::size_t trail = (f + 1 < k) ? gap : 0;
    if (b + lead + trail >= e)
      throw DataError("time_blocked split: gap " + std::to_string(gap) + " empties fold " +
                      std::to_string(f));
    for (std::size_t i = b + lead; i < e - trail; ++i)
      plan.fold_of_row[order[i]] = static_cast<std::ptrdiff_t>(f);
  }
  return plan;
}

}  // namespace

SplitPlan make_split(const SplitPolicy& policy, const Dataset& ds, RngStream rng) {
  const std::size_t k = resolve_n_folds(policy, ds.rows(), false);
  check_fold_count(k, ds.rows());
  switch (policy.kind) {
    case SplitKind::random: return random_split(ds.rows(), k, rng);
    case SplitKind::stratified: return stratified_split(ds, k, policy.strat_y_col, rng);
    case SplitKind::grouped: return grouped_split(ds, k, rng);
    case SplitKind::time_blocked: return time_blocked_split(ds, k, policy.gap);
  }
  throw ConfigError("split: unknown kind");
}

std::string to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::random: return "random";
    case SplitKind::stratified: return "stratified";
    case SplitKind::grouped: return "grouped";
    case SplitKind::time_blocked: return "time_blocked";
  }
  return "random";
}

SplitKind split_kind_from_string(const std::string& s) {
  if (s == "random") return SplitKind::random;
  if (s == "stratified") return SplitKind::stratified;
  if (s == "grouped") return SplitKind::grouped;
  if (s == "time_blocked") return SplitKind::time_blocked;
  throw ConfigError("unknown split kind: '" + s + "'");
}

}  // namespace valguard
