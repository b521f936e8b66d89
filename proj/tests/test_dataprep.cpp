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
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "valguard/errors.hpp"
#include "valguard/preprocess.hpp"
#include "valguard/rng.hpp"
#include "valguard/split.hpp"

using namespace valguard;

namespace {

Dataset labeled_dataset(const std::vector<double>& labels) {
  Dataset ds;
  ds.X = Matrix(labels.size(), 1);
  ds.Y = Matrix(labels.size(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ds.X(i, 0) = static_cast<double>(i);
    (*ds.Y)(i, 0) = labels[i];
  }
  return ds;
}

}  // namespace

TEST_CASE("mean_center learns column means with unit scales") {
  const auto fp = fit_preproc({PreprocKind::mean_center, {}}, Matrix::from_rows({{1.0}, {3.0}}));
  CHECK(fp.means[0] == doctest::Approx(2.0));
  CHECK(fp.scales[0] == 1.0);
}

TEST_CASE("autoscale uses the sample standard deviation") {
  const auto fp = fit_preproc({PreprocKind::autoscale, {}}, Matrix::from_rows({{0.0}, {2.0}}));
  CHECK(fp.means[0] == doctest::Approx(1.0));
  CHECK(fp.scales[0] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("autoscale rejects a zero-variance column") {
  CHECK_THROWS_AS(fit_preproc({PreprocKind::autoscale, {}}, Matrix::from_rows({{5.0}, {5.0}})),
                  DegenerateError);
}

TEST_CASE("apply subtracts stored means") {
  FittedPreproc fp;
  fp.kind = PreprocKind::mean_center;
  fp.n_vars = 1;
  fp.means = {2.0};
  fp.scales = {1.0};
  const Matrix out = apply_preproc(fp, Matrix::from_rows({{5.0}}));
  CHECK(out(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("row_normalize scales each row to unit length from its own values") {
  FittedPreproc fp;
  fp.kind = PreprocKind::row_normalize;
  fp.n_vars = 2;
  const Matrix out = apply_preproc(fp, Matrix::from_rows({{3.0, 4.0}}));
  CHECK(out(0, 0) == doctest::Approx(0.6));
  CHECK(out(0, 1) == doctest::Approx(0.8));
}

TEST_CASE("interval_center removes each row's per-interval mean") {
  const auto fp =
      fit_preproc({PreprocKind::interval_center, {}}, Matrix::from_rows({{0.0, 0.0}}));
  const Matrix out = apply_preproc(fp, Matrix::from_rows({{1.0, 3.0}}));
  CHECK(out(0, 0) == doctest::Approx(-1.0));
  CHECK(out(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("column-count mismatch is rejected at apply time") {
  const auto fp = fit_preproc({PreprocKind::mean_center, {}}, Matrix::from_rows({{1.0}, {2.0}}));
  CHECK_THROWS_AS(apply_preproc(fp, Matrix::from_rows({{1.0, 2.0}})), DataError);
}

TEST_CASE("apply is a pure function of the fit and its input") {
  // Fitting only sees build rows by construction; applying the same fit to
  // the same input must give identical output no matter what else happened.
  Matrix build = Matrix::from_rows({{1.0, 5.0}, {3.0, 9.0}});
  const auto fp = fit_preproc({PreprocKind::autoscale, {}}, build);
  const Matrix probe = Matrix::from_rows({{2.0, 7.0}});
  const Matrix first = apply_preproc(fp, probe);
  build(0, 0) = 999.0;  // mutating the original build block changes nothing
  const Matrix second = apply_preproc(fp, probe);
  CHECK(first == second);
}

TEST_CASE("invert composed with apply is the identity for variable-wise kinds") {
  RngStream rng(5);
  const Matrix x = standard_normal_matrix(rng, 10, 4);
  for (PreprocKind kind : {PreprocKind::mean_center, PreprocKind::autoscale}) {
    const auto fp = fit_preproc({kind, {}}, x);
    const Matrix back = invert_preproc(fp, apply_preproc(fp, x));
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(back.values()[i] == doctest::Approx(x.values()[i]).epsilon(1e-12));
  }
}

TEST_CASE("random split covers all rows with balanced disjoint folds") {
  Dataset ds;
  ds.X = Matrix(4, 1);
  const SplitPlan plan = make_split({SplitKind::random, 2, 0, 0}, ds, RngStream(1));
  CHECK(plan.n_folds == 2);
  const auto f0 = plan.fold_rows(0);
  const auto f1 = plan.fold_rows(1);
  CHECK(f0.size() == 2);
  CHECK(f1.size() == 2);
  std::set<std::size_t> all(f0.begin(), f0.end());
  all.insert(f1.begin(), f1.end());
  CHECK(all.size() == 4);
}

TEST_CASE("stratified split keeps exact class proportions on the six-row example") {
  const Dataset ds = labeled_dataset({0, 0, 0, 0, 1, 1});
  const SplitPlan plan = make_split({SplitKind::stratified, 2, 0, 0}, ds, RngStream(3));
  for (std::size_t f = 0; f < 2; ++f) {
    std::size_t a = 0, b = 0;
    for (std::size_t row : plan.fold_rows(f)) ((*ds.Y)(row, 0) == 0.0 ? a : b)++;
    CHECK(a == 2);
    CHECK(b == 1);
  }
}

TEST_CASE("stratified proportions stay within one row per class on random instances") {
  RngStream rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 12 + rng.next_below(40);
    const std::size_t k = 2 + rng.next_below(3);
    std::vector<double> labels(n);
    for (auto& l : labels) l = static_cast<double>(rng.next_below(3));
    // Ensure feasibility: each class needs at least k members.
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < k; ++i) labels[(c * k + i) % n] = static_cast<double>(c);
    const Dataset ds = labeled_dataset(labels);
    const SplitPlan plan =
        make_split({SplitKind::stratified, k, 0, 0}, ds, rng.derive({static_cast<std::uint64_t>(trial)}));
    std::map<double, std::size_t> total;
    for (double l : labels) total[l]++;
    for (std::size_t f = 0; f < k; ++f) {
      const auto rows = plan.fold_rows(f);
      std::map<double, std::size_t> in_fold;
      for (std::size_t r : rows) in_fold[(*ds.Y)(r, 0)]++;
      for (const auto& [cls, cnt] : total) {
        const double lhs = std::abs(static_cast<double>(in_fold[cls]) / rows.size() -
                                    static_cast<double>(cnt) / n);
        CHECK(lhs <= 1.0 / static_cast<double>(rows.size()) + 1e-12);
      }
    }
  }
}

TEST_CASE("grouped split keeps replicate groups together") {
  Dataset ds;
  ds.X = Matrix(4, 1);
  ds.group_labels = std::vector<std::string>{"g1", "g1", "g2", "g3"};
  const SplitPlan plan = make_split({SplitKind::grouped, 2, 0, 0}, ds, RngStream(2));
  CHECK(plan.fold_of_row[0] == plan.fold_of_row[1]);
}

TEST_CASE("no group label ever appears in two folds") {
  RngStream rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng.next_below(30);
    Dataset ds;
    ds.X = Matrix(n, 1);
    std::vector<std::string> groups(n);
    for (auto& g : groups) g = "g" + std::to_string(rng.next_below(6));
    for (int c = 0; c < 6; ++c) groups[c % n] = "g" + std::to_string(c);  // feasibility
    ds.group_labels = groups;
    const SplitPlan plan =
        make_split({SplitKind::grouped, 3, 0, 0}, ds, rng.derive({static_cast<std::uint64_t>(trial)}));
    std::map<std::string, std::set<std::ptrdiff_t>> folds_of_group;
    for (std::size_t i = 0; i < n; ++i) folds_of_group[groups[i]].insert(plan.fold_of_row[i]);
    for (const auto& [g, folds] : folds_of_group) CHECK(folds.size() == 1);
  }
}

TEST_CASE("time_blocked split excludes embargo rows and keeps folds ordered") {
  Dataset ds;
  ds.X = Matrix(10, 1);
  std::vector<double> t(10);
  for (std::size_t i = 0; i < 10; ++i) t[i] = static_cast<double>(i);
  ds.timestamps = t;
  const SplitPlan plan = make_split({SplitKind::time_blocked, 2, 1, 0}, ds, RngStream(1));

  // Enumerated expectation: chunks are rows 0..4 / 5..9 and one row on each
  // side of the boundary is embargoed.
  CHECK(plan.fold_of_row[4] == SplitPlan::kExcluded);
  CHECK(plan.fold_of_row[5] == SplitPlan::kExcluded);
  for (std::size_t i = 0; i <= 3; ++i) CHECK(plan.fold_of_row[i] == 0);
  for (std::size_t i = 6; i <= 9; ++i) CHECK(plan.fold_of_row[i] == 1);

  double max_f0 = -1e300, min_f1 = 1e300;
  for (std::size_t r : plan.fold_rows(0)) max_f0 = std::max(max_f0, (*ds.timestamps)[r]);
  for (std::size_t r : plan.fold_rows(1)) min_f1 = std::min(min_f1, (*ds.timestamps)[r]);
  CHECK(max_f0 < min_f1);
}

TEST_CASE("time_blocked ordering holds with shuffled timestamps") {
  RngStream rng(31);
  Dataset ds;
  ds.X = Matrix(24, 1);
  std::vector<double> t(24);
  for (auto& v : t) v = rng.next_double();
  ds.timestamps = t;
  const SplitPlan plan = make_split({SplitKind::time_blocked, 3, 2, 0}, ds, RngStream(1));
  for (std::size_t f = 0; f + 1 < 3; ++f) {
    double hi = -1e300, lo = 1e300;
    for (std::size_t r : plan.fold_rows(f)) hi = std::max(hi, t[r]);
    for (std::size_t r : plan.fold_rows(f + 1)) lo = std::min(lo, t[r]);
    CHECK(hi < lo);
  }
  std::size_t excluded = 0;
  for (auto v : plan.fold_of_row) excluded += v == SplitPlan::kExcluded;
  CHECK(excluded == 2 * 2 * 2);  // two internal boundaries, gap rows on both sides
}

TEST_CASE("splits are deterministic functions of the rng") {
  Dataset ds;
  ds.X = Matrix(30, 1);
  const SplitPlan a = make_split({SplitKind::random, 5, 0, 0}, ds, RngStream(77));
  const SplitPlan b = make_split({SplitKind::random, 5, 0, 0}, ds, RngStream(77));
  CHECK(a.fold_of_row == b.fold_of_row);
  const SplitPlan c = make_split({SplitKind::random, 5, 0, 0}, ds, RngStream(78));
  CHECK(a.fold_of_row != c.fold_of_row);
}

TEST_CASE("infeasible split policies are rejected") {
  const Dataset strat = labeled_dataset({0, 0, 0, 0, 0, 1});
  CHECK_THROWS_AS(make_split({SplitKind::stratified, 2, 0, 0}, strat, RngStream(1)), DataError);

  Dataset grouped;
  grouped.X = Matrix(4, 1);
  grouped.group_labels = std::vector<std::string>{"a", "a", "a", "b"};
  CHECK_THROWS_AS(make_split({SplitKind::grouped, 3, 0, 0}, grouped, RngStream(1)), DataError);

  Dataset timed;
  timed.X = Matrix(6, 1);
  timed.timestamps = std::vector<double>{0, 1, 2, 3, 4, 5};
  CHECK_THROWS_AS(make_split({SplitKind::time_blocked, 3, 2, 0}, timed, RngStream(1)),
                  DataError);

  Dataset plain;
  plain.X = Matrix(4, 1);
  CHECK_THROWS_AS(make_split({SplitKind::random, 5, 0, 0}, plain, RngStream(1)), DataError);
  CHECK_THROWS_AS(make_split({SplitKind::stratified, 2, 0, 0}, plain, RngStream(1)), DataError);
}

TEST_CASE("split plan serializes to a JSON fold array") {
  Dataset ds;
  ds.X = Matrix(3, 1);
  SplitPlan plan = make_split({SplitKind::random, 3, 0, 0}, ds, RngStream(4));
  const std::string json = plan.to_json();
  CHECK(json.front() == '[');
  CHECK(json.back() == ']');
  CHECK(std::count(json.begin(), json.end(), ',') == 2);
}

TEST_CASE("auto fold resolution: LOO for small data, 10/7 beyond") {
  CHECK(resolve_n_folds({SplitKind::random, 0, 0, 0}, 20, false) == 20);
  CHECK(resolve_n_folds({SplitKind::random, 0, 0, 0}, 100, false) == 10);
  CHECK(resolve_n_folds({SplitKind::random, 0, 0, 0}, 100, true) == 7);
  CHECK(resolve_n_folds({SplitKind::random, 4, 0, 0}, 100, true) == 4);
}
