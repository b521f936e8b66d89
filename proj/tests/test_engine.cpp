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
#include <numeric>
#include <set>
#include <vector>

#include "valguard/engine.hpp"
#include "valguard/errors.hpp"
#include "valguard/report.hpp"
#include "valguard/simgen.hpp"

using namespace valguard;

namespace {

PipelineSpec press_pipeline(std::uint64_t seed) {
  PipelineSpec spec;
  spec.model = ModelKind::pls;
  spec.metric.name = MetricName::press;
  spec.n_lv_grid = {0, 1, 2};
  spec.seed = seed;
  return spec;
}

Dataset linear_dataset(std::size_t n, double slope, double noise_sd, std::uint64_t seed) {
  RngStream rng(seed);
  Dataset ds;
  ds.X = standard_normal_matrix(rng, n, 1);
  Matrix y(n, 1);
  for (std::size_t i = 0; i < n; ++i) y(i, 0) = slope * ds.X(i, 0) + noise_sd * rng.next_normal();
  ds.Y = std::move(y);
  return ds;
}

}  // namespace

TEST_CASE("inner_cv_select prefers one component when the signal dominates") {
  const Dataset ds = linear_dataset(16, 2.0, 0.01, 5);
  PipelineSpec spec = press_pipeline(5);
  spec.n_lv_grid = {0, 1};
  const InnerSelection sel = inner_cv_select(ds, spec, RngStream(5));
  CHECK(sel.chosen.n_lv == 1);
  CHECK(sel.curve.size() == 2);
  CHECK(sel.curve[0].n_lv == 0);
}

TEST_CASE("a single-point grid still carries the 0-LV baseline in the curve") {
  const Dataset ds = linear_dataset(12, 1.0, 0.1, 6);
  PipelineSpec spec = press_pipeline(6);
  spec.n_lv_grid = {0};
  const InnerSelection sel = inner_cv_select(ds, spec, RngStream(6));
  CHECK(sel.chosen.n_lv == 0);
  CHECK(sel.curve.size() == 1);
}

TEST_CASE("on null data no component beats the 0-LV baseline by much") {
  // Quick version of the null CV-curve experiment: 6 seeds here, the full
  // 20-seed band lives in the acceptance suite.
  std::size_t seeds_ok = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Dataset ds = gen_fig4(RngStream(seed));
    PipelineSpec spec = press_pipeline(seed);
    spec.n_lv_grid = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const InnerSelection sel = single_cv_curve(ds, spec);
    double press0 = 0.0, best = 1e300;
    for (const auto& pt : sel.curve) {
      if (pt.n_lv == 0)
        press0 = pt.metric;
      else
        best = std::min(best, pt.metric);
    }
    if (best >= 0.95 * press0) ++seeds_ok;
  }
  CHECK(seeds_ok >= 4);
}

TEST_CASE("double_cv is deterministic: equal seeds give identical repetitions") {
  const Dataset ds = linear_dataset(14, 1.5, 0.5, 9);
  PipelineSpec spec = press_pipeline(9);
  spec.n_repetitions = 2;
  // Two repetitions share the seed-derived split streams but use different
  // tags, so they are NOT identical; rerunning the whole thing must be.
  const ValidationReport a = double_cv(ds, spec);
  const ValidationReport b = double_cv(ds, spec);
  CHECK(a.per_rep_metrics() == b.per_rep_metrics());
  CHECK(report_to_json(a) == report_to_json(b));
}

TEST_CASE("double_cv with threads matches the sequential result") {
  const Dataset ds = linear_dataset(18, 1.0, 0.8, 11);
  PipelineSpec spec = press_pipeline(11);
  spec.n_repetitions = 4;
  RunOptions seq, par;
  par.threads = 4;
  CHECK(double_cv(ds, spec, seq).per_rep_metrics() ==
        double_cv(ds, spec, par).per_rep_metrics());
}

TEST_CASE("identical repetition seeds collapse to identical repetition results") {
  // R repetitions differ only through their derived streams; forcing the
  // same stream by construction is covered above, here we check the spec
  // example directly: rerunning with the same seed reproduces every field.
  const Dataset ds = linear_dataset(14, 1.0, 0.3, 21);
  PipelineSpec spec = press_pipeline(21);
  spec.n_repetitions = 2;
  const ValidationReport a = double_cv(ds, spec);
  const ValidationReport b = double_cv(ds, spec);
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(a.per_repetition[r].pooled_metric == b.per_repetition[r].pooled_metric);
    CHECK(a.per_repetition[r].zero_lv_baseline == b.per_repetition[r].zero_lv_baseline);
  }
}

TEST_CASE("leakage firewall: build-phase gathers never touch held-out rows") {
  const Dataset ds = linear_dataset(12, 1.0, 0.5, 13);
  PipelineSpec spec = press_pipeline(13);
  spec.n_repetitions = 2;

  struct Event {
    GatherPhase phase;
    std::size_t rep, fold;
    std::vector<std::size_t> rows;
  };
  std::vector<Event> events;
  RunOptions opts;
  opts.hooks.on_gather = [&](const GatherEvent& e) {
    events.push_back({e.phase, e.repetition, e.outer_fold,
                      std::vector<std::size_t>(e.rows.begin(), e.rows.end())});
  };
  const ValidationReport report = double_cv(ds, spec, opts);
  (void)report;

  REQUIRE(!events.empty());
  // Pair build and test gathers per (rep, fold) and check disjointness plus
  // ordering: the build gather always precedes its fold's test gather.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> build_rows;
  std::size_t leaky_events = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.phase == GatherPhase::leaky_selection) ++leaky_events;
    if (e.phase == GatherPhase::outer_build) build_rows[{e.rep, e.fold}] = e.rows;
    if (e.phase == GatherPhase::outer_test) {
      const auto& build = build_rows.at({e.rep, e.fold});  // build happened first
      for (std::size_t row : e.rows)
        CHECK(std::find(build.begin(), build.end(), row) == build.end());
    }
  }
  CHECK(leaky_events == 0);
}

TEST_CASE("the leaky mode announces itself through hook and watermark") {
  const Dataset ds = gen_null_dataset(14, 30, RngStream(3));
  PipelineSpec spec = press_pipeline(3);
  spec.metric.name = MetricName::q2;
  spec.selection_grid = {SelectionSpec{SelectionMethod::vip, 1.0, 0}};

  std::size_t leaky_rows_seen = 0;
  RunOptions opts;
  opts.demonstrate_leakage = true;
  opts.hooks.on_gather = [&](const GatherEvent& e) {
    if (e.phase == GatherPhase::leaky_selection) leaky_rows_seen = e.rows.size();
  };
  const ValidationReport report = double_cv(ds, spec, opts);
  CHECK(leaky_rows_seen == 14);  // selection saw every row before splitting
  CHECK(report.leakage_demonstration);
  const std::string json = report_to_json(report);
  CHECK(json.find("INVALID") != std::string::npos);
  CHECK(json.find("leakage demonstration") != std::string::npos);

  // Without a selection method the demonstration is meaningless and refused.
  PipelineSpec no_sel = press_pipeline(3);
  CHECK_THROWS_AS(double_cv(ds, no_sel, opts), ConfigError);
}

TEST_CASE("permutation p-value follows the add-one rule and its floor") {
  // Observed above every null draw: p = 1/(n_perm + 1).
  MetricSpec higher{MetricName::q2};
  std::vector<double> nulls(19, 0.1);
  CHECK(permutation_p_value(higher, nulls, 0.9) == doctest::Approx(1.0 / 20.0));
  // Observed below every null draw: p = 1 for a higher-better metric.
  CHECK(permutation_p_value(higher, nulls, 0.0) == doctest::Approx(1.0));
  MetricSpec lower{MetricName::press};
  CHECK(permutation_p_value(lower, nulls, 0.0) == doctest::Approx(1.0 / 20.0));
}

TEST_CASE("the LOO mean-predictor statistic is permutation-invariant (and says so)") {
  // With a 0-LV pipeline and leave-one-out folds, the pooled PRESS is a
  // symmetric function of the response values, so every Y permutation
  // reproduces it exactly and the permutation p-value is 1 by construction.
  Dataset ds;
  ds.X = Matrix::from_rows({{1.0}, {2.0}, {3.0}});
  ds.Y = Matrix::from_rows({{10.0}, {4.0}, {7.0}});
  PipelineSpec spec;
  spec.metric.name = MetricName::press;
  spec.n_lv_grid = {0};
  spec.outer_policy.n_folds = 3;
  spec.inner_policy.n_folds = 2;
  spec.seed = 17;
  spec.n_repetitions = 1;
  const PermutationResult r = permutation_null(ds, spec, 30, PermuteBlock::y);
  for (double v : r.null_metrics) CHECK(v == doctest::Approx(r.observed));
  CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("monte-carlo permutation p converges to the exhaustive enumeration") {
  // Four rows admit 24 Y permutations, few enough to enumerate. The grid
  // includes one component so the statistic depends on the X-Y pairing.
  Dataset ds;
  ds.X = Matrix::from_rows({{1.0}, {2.0}, {3.0}, {4.0}});
  ds.Y = Matrix::from_rows({{1.2}, {2.3}, {2.9}, {4.4}});
  PipelineSpec spec;
  spec.metric.name = MetricName::press;
  spec.n_lv_grid = {0, 1};
  spec.outer_policy.n_folds = 4;
  spec.inner_policy.n_folds = 3;
  spec.seed = 11;
  spec.n_repetitions = 1;

  // Exhaustive oracle: the split streams depend only on the seed, so every
  // permuted copy shares the fold structure, exactly as permutation_null
  // conditions on folds.
  const double observed = double_cv(ds, spec).per_repetition[0].pooled_metric;
  std::vector<std::size_t> perm{0, 1, 2, 3};
  double at_most = 0.0, total = 0.0;
  do {
    Dataset permuted = ds;
    permuted.Y = gather_rows(*ds.Y, perm);
    at_most += double_cv(permuted, spec).per_repetition[0].pooled_metric <= observed;
    total += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double exhaustive = at_most / total;
  CHECK(exhaustive < 1.0);  // interior: the observed pairing is informative

  RunOptions opts;
  opts.threads = 2;
  const PermutationResult mc = permutation_null(ds, spec, 1200, PermuteBlock::y, opts);
  CHECK(mc.observed == doctest::Approx(observed));
  CHECK(std::abs(mc.p_value - exhaustive) < 0.02);
  CHECK(mc.p_value >= 1.0 / 1201.0);
}

TEST_CASE("permutation p is roughly uniform under the null") {
  // 50 seeded null datasets; the fraction of runs with p <= 0.2 should sit
  // near 0.2 (checked in [0.1, 0.3]).
  std::size_t small_p = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Dataset ds = gen_null_dataset(10, 2, RngStream(seed + 1000));
    PipelineSpec spec;
    spec.model = ModelKind::pls;
    spec.metric.name = MetricName::press;
    spec.n_lv_grid = {0, 1};
    spec.outer_policy.n_folds = 5;
    spec.inner_policy.n_folds = 3;
    spec.seed = seed;
    spec.n_repetitions = 1;
    RunOptions opts;
    opts.threads = 2;
    const PermutationResult r = permutation_null(ds, spec, 19, PermuteBlock::y, opts);
    if (r.p_value <= 0.2) ++small_p;
  }
  const double fraction = static_cast<double>(small_p) / 50.0;
  CHECK(fraction >= 0.1);
  CHECK(fraction <= 0.3);
}

TEST_CASE("permuting the X block leaves Y untouched") {
  const Dataset ds = linear_dataset(10, 1.0, 0.1, 3);
  PipelineSpec spec = press_pipeline(3);
  spec.outer_policy.n_folds = 5;
  spec.inner_policy.n_folds = 3;
  const PermutationResult r = permutation_null(ds, spec, 5, PermuteBlock::x);
  CHECK(r.null_metrics.size() == 5);
  for (double v : r.null_metrics) CHECK(v > r.observed);  // shuffled X kills the fit
}

TEST_CASE("bootstrap of a constant sample has a zero-width interval") {
  std::vector<double> values(10, 3.25);
  const BootstrapSummary s = bootstrap_metric(values, 200, RngStream(1));
  CHECK(s.mean == doctest::Approx(3.25));
  CHECK(s.sd == doctest::Approx(0.0));
  CHECK(s.lo95 == doctest::Approx(3.25));
  CHECK(s.hi95 == doctest::Approx(3.25));
}

TEST_CASE("bootstrap interval of a balanced 0/1 sample covers one half") {
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    values.push_back(0.0);
    values.push_back(1.0);
  }
  const BootstrapSummary s = bootstrap_metric(values, 500, RngStream(2));
  CHECK(s.lo95 < 0.5);
  CHECK(s.hi95 > 0.5);
}

TEST_CASE("bootstrap interval matches the CLT approximation on normal data") {
  RngStream rng(3);
  std::vector<double> values(1000);
  for (auto& v : values) v = rng.next_normal();
  const BootstrapSummary s = bootstrap_metric(values, 4000, RngStream(4));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= 1000.0;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / 999.0) / std::sqrt(1000.0);
  CHECK(std::abs(s.lo95 - (mean - 1.96 * se)) < 0.02);
  CHECK(std::abs(s.hi95 - (mean + 1.96 * se)) < 0.02);
  CHECK_THROWS_AS(bootstrap_metric(std::vector<double>{1.0}, 10, RngStream(1)), DataError);
}

TEST_CASE("wilcoxon: identical reports give p = 1") {
  std::vector<double> diffs(10, 0.0);
  CHECK(wilcoxon_signed_rank_p(diffs) == doctest::Approx(1.0));
}

TEST_CASE("wilcoxon: strict dominance over 10 repetitions gives the exact tail") {
  std::vector<double> diffs{0.11, 0.23, 0.05, 0.4, 0.17, 0.31, 0.09, 0.26, 0.14, 0.02};
  CHECK(wilcoxon_signed_rank_p(diffs) == doctest::Approx(2.0 / 1024.0));
}

TEST_CASE("wilcoxon handles ties through average ranks") {
  std::vector<double> diffs{1.0, 1.0, -1.0, 2.0, 2.0};
  const double p = wilcoxon_signed_rank_p(diffs);
  CHECK(p > 0.0);
  CHECK(p <= 1.0);
}

TEST_CASE("compare_models is symmetric and validates pairing") {
  const auto sample = gen_informative(20, 30, 1, 5, 1.0, RngStream(8));
  PipelineSpec a_spec;
  a_spec.name = "dense";
  a_spec.model = ModelKind::pls;
  a_spec.metric.name = MetricName::q2;
  a_spec.n_lv_grid = {0, 1, 2, 3};
  a_spec.n_repetitions = 6;
  a_spec.seed = 31;
  PipelineSpec b_spec = a_spec;
  b_spec.name = "vip";
  b_spec.selection_grid = {SelectionSpec{SelectionMethod::vip, 1.0, 0}};

  RunOptions opts;
  opts.threads = 2;
  const ValidationReport ra = double_cv(sample.data, a_spec, opts);
  const ValidationReport rb = double_cv(sample.data, b_spec, opts);
  const ComparisonResult ab = compare_models(ra, rb);
  const ComparisonResult ba = compare_models(rb, ra);
  CHECK(ab.p_value == doctest::Approx(ba.p_value));
  CHECK(ab.median_a == doctest::Approx(ba.median_b));
  for (std::size_t i = 0; i < ab.diffs.size(); ++i)
    CHECK(ab.diffs[i] == doctest::Approx(-ba.diffs[i]));

  const ComparisonResult self = compare_models(ra, ra);
  CHECK(self.p_value == doctest::Approx(1.0));

  ValidationReport odd = rb;
  odd.spec.seed = 999;
  CHECK_THROWS_AS(compare_models(ra, odd), ConfigError);
  ValidationReport fewer = rb;
  fewer.per_repetition.pop_back();
  CHECK_THROWS_AS(compare_models(ra, fewer), ConfigError);
}

TEST_CASE("zero_lv_baseline matches the closed-form LOO identity") {
  // y = {-1, +1} with LOO: each held-out value is predicted by the other
  // one, so PRESS = ((-1)-1)^2 + (1-(-1))^2 = 8.
  Dataset ds;
  ds.X = Matrix::from_rows({{0.5}, {-0.5}});
  ds.Y = Matrix::from_rows({{-1.0}, {1.0}});
  PipelineSpec spec = press_pipeline(1);
  spec.outer_policy.n_folds = 2;
  CHECK(zero_lv_baseline(ds, spec) == doctest::Approx(8.0));

  // Constant response is degenerate.
  Dataset flat = ds;
  flat.Y = Matrix::from_rows({{2.0}, {2.0}});
  CHECK_THROWS_AS(zero_lv_baseline(flat, spec), DegenerateError);
}

TEST_CASE("zero_lv_baseline approximates the analytic LOO-mean identity") {
  // LOO mean predictor: PRESS ~= n * var(y) * (n/(n-1))^2.
  RngStream rng(55);
  Dataset ds;
  ds.X = standard_normal_matrix(rng, 20, 3);
  ds.Y = standard_normal_matrix(rng, 20, 1);
  PipelineSpec spec = press_pipeline(2);
  const double press0 = zero_lv_baseline(ds, spec);
  const double sd = column_sds(*ds.Y)[0];
  const double expected = 20.0 * sd * sd * std::pow(20.0 / 19.0, 2.0);
  CHECK(std::abs(press0 - expected) / expected < 0.2);
}

TEST_CASE("reports pool q2 over outer folds with the build-portion baseline") {
  const Dataset ds = linear_dataset(16, 2.0, 0.2, 77);
  PipelineSpec spec;
  spec.model = ModelKind::pls;
  spec.metric.name = MetricName::q2;
  spec.n_lv_grid = {0, 1};
  spec.seed = 77;
  spec.n_repetitions = 2;
  const ValidationReport report = double_cv(ds, spec);
  for (double q2 : report.per_rep_metrics()) {
    CHECK(q2 > 0.8);  // strong linear signal
    CHECK(q2 <= 1.0);
  }
  CHECK(report.baseline_zero_lv > 0.0);
  CHECK(report.independence_disclosure == kDefaultDisclosure);
}

TEST_CASE("classification double_cv reports the naive baseline") {
  RngStream rng(90);
  Dataset ds;
  ds.X = standard_normal_matrix(rng, 20, 3);
  Matrix y(20, 1);
  for (std::size_t i = 0; i < 20; ++i) {
    y(i, 0) = i < 12 ? 0.0 : 1.0;
    ds.X(i, 0) += y(i, 0) * 4.0;  // separable signal in column 0
  }
  ds.Y = std::move(y);
  PipelineSpec spec;
  spec.model = ModelKind::plsda;
  spec.metric.name = MetricName::nmc;
  spec.n_lv_grid = {0, 1, 2};
  spec.outer_policy.kind = SplitKind::stratified;
  spec.outer_policy.n_folds = 4;
  spec.inner_policy.kind = SplitKind::stratified;
  spec.inner_policy.n_folds = 3;
  spec.seed = 4;
  spec.n_repetitions = 2;
  const ValidationReport report = double_cv(ds, spec);
  REQUIRE(report.baseline_naive_class.has_value());
  CHECK(*report.baseline_naive_class == doctest::Approx(8.0));  // minority count
  for (double v : report.per_rep_metrics()) CHECK(v <= 2.0);    // separable
}

TEST_CASE("plsda on randomly labeled data scores at chance in double CV") {
  // Permutation oracle for the classifier: random labels on Gaussian X are
  // fit overly well on the build set but generalize at chance level.
  RngStream rng(140);
  Dataset ds;
  ds.X = standard_normal_matrix(rng, 20, 10);
  Matrix y(20, 1);
  for (std::size_t i = 0; i < 20; ++i) y(i, 0) = i % 2 ? 1.0 : 0.0;
  ds.Y = gather_rows(y, rng.permutation(20));

  // Build-set optimism: a 3-component fit still misclassifies some rows,
  // but far fewer than chance.
  const auto x_pre = fit_preproc({PreprocKind::mean_center, {}}, ds.X);
  const Matrix xc = apply_preproc(x_pre, ds.X);
  std::vector<double> labels(20);
  for (std::size_t i = 0; i < 20; ++i) labels[i] = (*ds.Y)(i, 0);
  const PlsModel m = fit_plsda(xc, labels, 3);
  const auto train_pred = predict_labels(m, xc);
  std::size_t train_miss = 0;
  for (std::size_t i = 0; i < 20; ++i) train_miss += train_pred[i] != labels[i];
  CHECK(train_miss > 0);
  CHECK(train_miss < 10);

  PipelineSpec spec;
  spec.model = ModelKind::plsda;
  spec.metric.name = MetricName::nmc;
  spec.n_lv_grid = {0, 1, 2, 3};
  spec.outer_policy = {SplitKind::stratified, 5, 0, 0};
  spec.inner_policy = {SplitKind::stratified, 4, 0, 0};
  spec.seed = 140;
  spec.n_repetitions = 3;
  const ValidationReport report = double_cv(ds, spec);
  // Chance level for balanced classes is 10 of 20; allow a wide band.
  for (double nmc_value : report.per_rep_metrics()) {
    CHECK(nmc_value >= 5.0);
    CHECK(nmc_value <= 15.0);
  }
}

TEST_CASE("degenerate metric conventions are flagged in the report") {
  // Pure-noise classes: the fitted classifier ends up predicting the
  // majority, so pooled precision hits the 0/0 convention.
  RngStream rng(66);
  Dataset ds;
  ds.X = standard_normal_matrix(rng, 20, 2);
  Matrix y(20, 1);
  for (std::size_t i = 0; i < 20; ++i) y(i, 0) = i < 16 ? 0.0 : 1.0;
  ds.Y = std::move(y);
  PipelineSpec spec;
  spec.model = ModelKind::plsda;
  spec.metric.name = MetricName::precision;
  spec.n_lv_grid = {0};
  spec.outer_policy = {SplitKind::stratified, 4, 0, 0};
  spec.inner_policy = {SplitKind::stratified, 2, 0, 0};
  spec.seed = 12;
  spec.n_repetitions = 1;
  const ValidationReport report = double_cv(ds, spec);
  CHECK(report.per_repetition[0].pooled_metric == 0.0);
  CHECK(report.metric_convention_flags == 1);
}

TEST_CASE("empty selections fall back to all variables and are counted") {
  // A single predictor has VIP exactly 1, which is not > 1, so every fit
  // falls back and the report says so.
  const Dataset ds = linear_dataset(12, 1.5, 0.4, 33);
  PipelineSpec spec;
  spec.metric.name = MetricName::press;
  spec.n_lv_grid = {0, 1};
  spec.selection_grid = {SelectionSpec{SelectionMethod::vip, 1.0, 0}};
  spec.outer_policy.n_folds = 4;
  spec.inner_policy.n_folds = 3;
  spec.seed = 33;
  spec.n_repetitions = 1;
  const ValidationReport report = double_cv(ds, spec);
  CHECK(report.selection_fallbacks > 0);
  for (const auto& f : report.per_repetition[0].folds) {
    CHECK(f.chosen.fallback == (f.chosen.n_lv > 0));
    CHECK(f.chosen.n_selected == 1);
  }
}

TEST_CASE("model/metric mismatches are rejected up front") {
  const Dataset ds = linear_dataset(10, 1.0, 0.1, 1);
  PipelineSpec spec = press_pipeline(1);
  spec.metric.name = MetricName::nmc;
  CHECK_THROWS_AS(double_cv(ds, spec), ConfigError);
  PipelineSpec spec2 = press_pipeline(1);
  spec2.n_lv_grid = {1, 2};
  CHECK_THROWS_AS(double_cv(ds, spec2), ConfigError);
  PipelineSpec spec3 = press_pipeline(1);
  spec3.y_preproc.kind = PreprocKind::none;
  CHECK_THROWS_AS(double_cv(ds, spec3), ConfigError);
}
