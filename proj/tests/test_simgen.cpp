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
#include <filesystem>
#include <set>
#include <vector>

#include <json.hpp>

#include "valguard/engine.hpp"
#include "valguard/errors.hpp"
#include "valguard/metrics.hpp"
#include "valguard/runner.hpp"
#include "valguard/simgen.hpp"

using namespace valguard;

namespace {

double label_mean(const std::vector<double>& labels) {
  double s = 0.0;
  for (double l : labels) s += l;
  return s / static_cast<double>(labels.size());
}

double nmc_at(const ClassifierSample& s, double threshold) {
  double miss = 0.0;
  for (std::size_t i = 0; i < s.scores.size(); ++i)
    miss += (s.scores[i] > threshold ? 1.0 : 0.0) != s.labels[i];
  return miss;
}

double wmc_at(const ClassifierSample& s, double threshold, double w_fp, double w_fn) {
  double cost = 0.0;
  for (std::size_t i = 0; i < s.scores.size(); ++i) {
    const bool said_pos = s.scores[i] > threshold;
    if (said_pos && s.labels[i] == 0.0) cost += w_fp;
    if (!said_pos && s.labels[i] == 1.0) cost += w_fn;
  }
  return cost;
}

}  // namespace

TEST_CASE("zero discriminability gives a chance-level classifier") {
  const auto s = gen_classifier_scores(1000, 0.3, 0.0, RngStream(2));
  const double auroc = roc_curve(s.scores, s.labels, 1.0).auroc;
  CHECK(auroc > 0.45);
  CHECK(auroc < 0.55);
}

TEST_CASE("default discriminability lands in the Fig. 1 AUROC band at 30%") {
  const RngStream root(11);
  double mean = 0.0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const auto s =
        gen_classifier_scores(1000, 0.30, kDefaultDiscriminability, root.derive({rep}));
    const double auroc = roc_curve(s.scores, s.labels, 1.0).auroc;
    CHECK(auroc > 0.80);
    CHECK(auroc < 0.90);
    mean += auroc / 10.0;
  }
  CHECK(mean > 0.82);
  CHECK(mean < 0.88);
}

TEST_CASE("huge discriminability separates perfectly") {
  const auto s = gen_classifier_scores(1000, 0.3, 8.0, RngStream(3));
  CHECK(roc_curve(s.scores, s.labels, 1.0).auroc == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("minority fraction is honored within binomial bounds") {
  const auto s = gen_classifier_scores(4000, 0.1, 1.0, RngStream(5));
  const double f = label_mean(s.labels);
  const double bound = 3.0 * std::sqrt(0.1 * 0.9 / 4000.0);  // ~99% band
  CHECK(std::abs(f - 0.1) < bound);
}

TEST_CASE("classifier generator rejects infeasible parameters") {
  CHECK_THROWS_AS(gen_classifier_scores(100, 0.6, 1.0, RngStream(1)), ConfigError);
  CHECK_THROWS_AS(gen_classifier_scores(10, 0.01, 1.0, RngStream(1)), ConfigError);
}

TEST_CASE("null datasets have the right shapes and no accidental duplication") {
  const Dataset d4 = gen_fig4(RngStream(1));
  CHECK(d4.X.rows() == 20);
  CHECK(d4.X.cols() == 10);
  CHECK(d4.Y->rows() == 20);
  CHECK(d4.Y->cols() == 1);
  const Dataset d5 = gen_fig5(RngStream(1));
  CHECK(d5.X.cols() == 1000);

  // |correlation| with y strictly below 0.999 for every column.
  const auto y_mean = column_means(*d4.Y)[0];
  const auto x_means = column_means(d4.X);
  for (std::size_t j = 0; j < d4.X.cols(); ++j) {
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
      const double dx = d4.X(i, j) - x_means[j];
      const double dy = (*d4.Y)(i, 0) - y_mean;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.999);
  }

  const Dataset other = gen_fig4(RngStream(2));
  CHECK(other.X != d4.X);
}

TEST_CASE("generators are deterministic under fixed seeds") {
  CHECK(gen_fig5(RngStream(7)).X == gen_fig5(RngStream(7)).X);
  const auto a = gen_classifier_scores(100, 0.2, 1.0, RngStream(9));
  const auto b = gen_classifier_scores(100, 0.2, 1.0, RngStream(9));
  CHECK(a.scores == b.scores);
  const auto s1 = gen_informative(20, 50, 2, 5, 1.0, RngStream(4));
  const auto s2 = gen_informative(20, 50, 2, 5, 1.0, RngStream(4));
  CHECK(s1.data.X == s2.data.X);
  CHECK(s1.informative == s2.informative);
}

TEST_CASE("informative generator: noiseless single-variable signal is learnable") {
  const auto sample = gen_informative(20, 10, 1, 1, 0.0, RngStream(6));
  PipelineSpec spec;
  spec.model = ModelKind::pls;
  spec.metric.name = MetricName::q2;
  spec.n_lv_grid = {0, 1, 2, 3, 4};
  spec.n_repetitions = 1;
  spec.seed = 6;
  const ValidationReport report = double_cv(sample.data, spec);
  CHECK(report.per_repetition[0].pooled_metric > 0.95);
}

TEST_CASE("informative generator: dense PLS lands in the widened Fig. 6 band") {
  // 20-seed median of the double-CV Q2 with default parameters.
  std::vector<double> q2s;
  RunOptions opts;
  opts.threads = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sample =
        gen_informative(20, 100, 2, 10, kDefaultInformativeNoiseSd, RngStream(seed));
    PipelineSpec spec = fig6_pipelines(seed, 1)[0];
    q2s.push_back(double_cv(sample.data, spec, opts).per_repetition[0].pooled_metric);
  }
  const double med = median_of(q2s);
  CHECK(med > 0.5);
  CHECK(med < 0.85);
}

TEST_CASE("vip selection recovers most of the ground-truth variables") {
  // Oracle: the generator's informative index set. Median overlap of the
  // default-threshold VIP selection over seeds must reach 6 of 10.
  std::vector<double> overlaps;
  for (std::uint64_t seed = 0; seed < 11; ++seed) {
    const auto sample =
        gen_informative(20, 100, 2, 10, kDefaultInformativeNoiseSd, RngStream(seed));
    const auto x_pre = fit_preproc({PreprocKind::mean_center, {}}, sample.data.X);
    const Matrix xc = apply_preproc(x_pre, sample.data.X);
    const auto y_pre = fit_preproc({PreprocKind::mean_center, {}}, *sample.data.Y);
    const PlsModel m = fit_pls(xc, apply_preproc(y_pre, *sample.data.Y), 4);
    const auto selected = apply_selection({SelectionMethod::vip, 1.0, 0}, m, xc);
    std::size_t overlap = 0;
    for (std::size_t j : selected)
      overlap += std::binary_search(sample.informative.begin(), sample.informative.end(), j);
    overlaps.push_back(static_cast<double>(overlap));
  }
  CHECK(median_of(overlaps) >= 6.0);
}

TEST_CASE("permute_y preserves the response values and n=2 is identity-or-swap") {
  const Dataset ds = gen_fig4(RngStream(3));
  const Dataset null = make_null_example(ds, NullMode::permute_y, RngStream(4));
  std::multiset<double> before(ds.Y->values().begin(), ds.Y->values().end());
  std::multiset<double> after(null.Y->values().begin(), null.Y->values().end());
  CHECK(before == after);
  CHECK(null.X == ds.X);

  Dataset two;
  two.X = Matrix(2, 1);
  two.Y = Matrix::from_rows({{1.0}, {2.0}});
  const Dataset swapped = make_null_example(two, NullMode::permute_y, RngStream(5));
  const bool identity = (*swapped.Y)(0, 0) == 1.0 && (*swapped.Y)(1, 0) == 2.0;
  const bool swap = (*swapped.Y)(0, 0) == 2.0 && (*swapped.Y)(1, 0) == 1.0;
  CHECK((identity || swap));
}

TEST_CASE("synth_gaussian matches per-column moments") {
  RngStream rng(8);
  Dataset ds;
  ds.X = standard_normal_matrix(rng, 400, 3);
  for (std::size_t i = 0; i < 400; ++i) {
    ds.X(i, 1) = ds.X(i, 1) * 3.0 + 10.0;  // shifted, scaled column
  }
  ds.Y = standard_normal_matrix(rng, 400, 1);
  const Dataset null = make_null_example(ds, NullMode::synth_gaussian, RngStream(9));
  const auto means = column_means(ds.X);
  const auto sds = column_sds(ds.X);
  const auto null_means = column_means(null.X);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(std::abs(null_means[j] - means[j]) < 3.0 * sds[j] / std::sqrt(400.0));
  CHECK(*null.Y == *ds.Y);
}

TEST_CASE("Fig. 2 behavior: the classifier's NMC is worse than always-negative at 1%") {
  std::size_t seeds_worse = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s =
        gen_classifier_scores(1000, 0.01, kDefaultDiscriminability, RngStream(seed));
    double positives = 0.0;
    for (double l : s.labels) positives += l;
    if (nmc_at(s, 0.5) > positives) ++seeds_worse;
  }
  CHECK(seeds_worse >= 19);  // >= 95% of seeds
}

TEST_CASE("Fig. 3 behavior: WMC ordering across thresholds and the naive rule") {
  std::vector<double> w070, w099, wneg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s =
        gen_classifier_scores(1000, 0.01, kDefaultDiscriminability, RngStream(seed));
    double positives = 0.0;
    for (double l : s.labels) positives += l;
    w070.push_back(wmc_at(s, 0.70, 1.0, 100.0));
    w099.push_back(wmc_at(s, 0.99, 1.0, 100.0));
    wneg.push_back(100.0 * positives);
  }
  CHECK(median_of(w070) < median_of(w099));
  CHECK(median_of(w099) < median_of(wneg));
}

TEST_CASE("figure 5 reproduction shows the leakage gap") {
  namespace fs = std::filesystem;
  const auto out = fs::temp_directory_path() / "vg_fig5_test";
  fs::remove_all(out);
  const std::string summary = reproduce_figure(5, 3, out.string(), 2);
  CHECK(summary.find("q2_leaky") != std::string::npos);
  CHECK(fs::exists(out / "inner_curve_correct.csv"));
  CHECK(fs::exists(out / "inner_curve_leaky.csv"));
  // Headline numbers: the leaky estimate dwarfs the honest one.
  const auto doc = nlohmann::json::parse(summary);
  CHECK(doc.at("gap").get<double>() > 0.3);
}

TEST_CASE("scenario specs materialize as datasets") {
  ScenarioSpec roc = ScenarioSpec::defaults_for("fig1_roc");
  roc.seed = 3;
  const Dataset ds = generate_scenario(roc);
  CHECK(ds.X.cols() == 1);
  CHECK(ds.Y->cols() == 1);
  CHECK(ds.rows() == 1000);
  CHECK((*ds.variable_names)[0] == "score");

  ScenarioSpec f6 = ScenarioSpec::defaults_for("fig6_informative");
  const Dataset d6 = generate_scenario(f6);
  CHECK(d6.X.cols() == 100);
  CHECK(d6.Y->cols() == 2);

  CHECK_THROWS_AS(ScenarioSpec::defaults_for("nope"), ConfigError);
}
