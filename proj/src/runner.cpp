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
#include "valguard/runner.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "valguard/csv.hpp"
#include "valguard/errors.hpp"
#include "valguard/metrics.hpp"
#include "valguard/report.hpp"
#include "valguard/simgen.hpp"

namespace valguard {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

Dataset resolve_dataset(const RunConfig& cfg) {
  if (cfg.data) {
    return load_dataset(cfg.data->path, ColumnSelector::parse(cfg.data->y_cols),
                        cfg.data->group_col, cfg.data->time_col);
  }
  return generate_scenario(*cfg.scenario);
}

bool leakage_active(const RunConfig& cfg, const RunOverrides& ov) {
  if (cfg.demonstrate_leakage && !ov.demonstrate_leakage_flag)
    throw ConfigError(
        "config sets demonstrate_leakage but the --demonstrate-leakage flag is missing; "
        "both are required");
  if (!cfg.demonstrate_leakage && ov.demonstrate_leakage_flag)
    throw ConfigError(
        "--demonstrate-leakage was given but the config field demonstrate_leakage is false; "
        "both are required");
  return cfg.demonstrate_leakage && ov.demonstrate_leakage_flag;
}

}  // namespace

std::string run_experiment(const RunConfig& cfg_in, const std::string& out_dir,
                           const RunOverrides& overrides) {
  RunConfig cfg = cfg_in;
  const bool leaky = leakage_active(cfg, overrides);
  if (overrides.seed) {
    cfg.seed = *overrides.seed;
    for (auto& p : cfg.pipelines) p.seed = *overrides.seed;
  }

  const Dataset ds = resolve_dataset(cfg);

  RunOptions opts;
  opts.threads = overrides.threads;
  opts.demonstrate_leakage = leaky;

  std::vector<ValidationReport> reports;
  reports.reserve(cfg.pipelines.size());
  for (const auto& spec : cfg.pipelines) {
    ValidationReport report = double_cv(ds, spec, opts);
    if (cfg.independence_disclosure) report.independence_disclosure = *cfg.independence_disclosure;
    if (cfg.permutation.enabled) {
      const auto nulls =
          permutation_null_draws(ds, spec, cfg.permutation.n_perm, cfg.permutation.block, opts);
      report.p_value_vs_null =
          permutation_p_value(spec.metric, nulls, median_of(report.per_rep_metrics()));
      report.null_distribution = nulls;
    }
    reports.push_back(std::move(report));
  }

  std::vector<ComparisonResult> comparisons;
  for (std::size_t i = 0; i < reports.size(); ++i)
    for (std::size_t j = i + 1; j < reports.size(); ++j)
      comparisons.push_back(compare_models(reports[i], reports[j]));

  const fs::path base(out_dir);
  fs::create_directories(base);
  const fs::path curves = base / cfg.outputs.curves_dir;
  fs::create_directories(curves);

  for (const auto& r : reports) {
    write_cv_curves_csv(r, (curves / (r.spec.name + "_cv_curves.csv")).string());
    if (r.null_distribution)
      write_null_distribution_csv(*r.null_distribution,
                                  (curves / (r.spec.name + "_null.csv")).string());
  }
  // Boxplot data: per-repetition metric for every pipeline, when paired.
  if (!reports.empty()) {
    const std::size_t reps = reports.front().per_repetition.size();
    const bool paired = std::all_of(reports.begin(), reports.end(), [&](const auto& r) {
      return r.per_repetition.size() == reps;
    });
    if (paired) {
      PlotData pd;
      pd.kind = "boxplot";
      std::vector<double> idx(reps);
      for (std::size_t r = 0; r < reps; ++r) idx[r] = static_cast<double>(r);
      pd.columns.emplace_back("repetition", idx);
      for (const auto& r : reports) pd.columns.emplace_back(r.spec.name, r.per_rep_metrics());
      pd.write_csv((curves / "metric_per_repetition.csv").string());
    }
  }

  const std::string document =
      run_document_to_json(run_config_to_json(cfg), reports, comparisons);
  validate_run_document(document);
  write_text(base / cfg.outputs.report_path, document);
  write_text(base / "timings.json", run_timings_to_json(reports, comparisons));
  return document;
}

PipelineSpec fig4_pipeline(std::uint64_t seed) {
  PipelineSpec spec;
  spec.name = "pls_null_curve";
  spec.model = ModelKind::pls;
  spec.n_lv_grid = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  spec.metric.name = MetricName::press;
  spec.n_repetitions = 1;
  spec.seed = seed;
  return spec;  // policies default to auto folds: leave-one-out at n = 20
}

PipelineSpec fig5_pipeline(std::uint64_t seed) {
  PipelineSpec spec;
  spec.name = "vip_pls_highdim";
  spec.model = ModelKind::pls;
  spec.selection_grid = {SelectionSpec{SelectionMethod::vip, 1.0, 0}};
  spec.n_lv_grid = {0, 1, 2, 3};
  spec.metric.name = MetricName::q2;
  spec.n_repetitions = 1;
  spec.seed = seed;
  return spec;
}

std::vector<PipelineSpec> fig6_pipelines(std::uint64_t seed, std::size_t n_repetitions) {
  PipelineSpec base;
  base.model = ModelKind::pls;
  base.n_lv_grid = {0, 1, 2, 3, 4, 5, 6};
  base.metric.name = MetricName::q2;
  base.n_repetitions = n_repetitions;
  base.seed = seed;
  // Randomized k-fold splits: repetitions must differ, that spread is the
  // whole point of the comparison (leave-one-out would be deterministic).
  base.outer_policy.n_folds = 5;
  base.inner_policy.n_folds = 7;

  PipelineSpec pls = base;
  pls.name = "pls";

  // Selection thresholds calibrated on the informative-block generator so
  // that both filters recover approximately the true variable set (the SR
  // score is averaged over the two responses, which halves single-response
  // values, hence the lower cut). See docs/calibration.md.
  PipelineSpec sr_pls = base;
  sr_pls.name = "sr_pls";
  sr_pls.selection_grid = {SelectionSpec{SelectionMethod::sr, 0.5, 0}};

  PipelineSpec vip_pls = base;
  vip_pls.name = "vip_pls";
  vip_pls.selection_grid = {SelectionSpec{SelectionMethod::vip, 1.3, 0}};

  PipelineSpec spls = base;
  spls.name = "spls";
  spls.selection_grid = {SelectionSpec{SelectionMethod::sparse, 0.0, 1},
                         SelectionSpec{SelectionMethod::sparse, 0.0, 3},
                         SelectionSpec{SelectionMethod::sparse, 0.0, 10},
                         SelectionSpec{SelectionMethod::sparse, 0.0, 30},
                         SelectionSpec{SelectionMethod::sparse, 0.0, 100}};

  return {pls, sr_pls, vip_pls, spls};
}

namespace {

std::string figure1(std::uint64_t seed, const fs::path& out) {
  json summary;
  const RngStream root(seed);
  const struct {
    const char* tag;
    double minority;
  } settings[] = {{"minority30", 0.30}, {"minority1", 0.01}};
  for (std::size_t s = 0; s < 2; ++s) {
    std::vector<double> aurocs;
    for (std::size_t rep = 0; rep < 10; ++rep) {
      const auto sample = gen_classifier_scores(
          1000, settings[s].minority, kDefaultDiscriminability, root.derive({s, rep}));
      const RocCurve roc = roc_curve(sample.scores, sample.labels, 1.0);
      PlotData pd;
      pd.kind = "roc";
      std::vector<double> fpr, tpr;
      for (const auto& [f, t] : roc.points) {
        fpr.push_back(f);
        tpr.push_back(t);
      }
      pd.columns.emplace_back("fpr", fpr);
      pd.columns.emplace_back("tpr", tpr);
      pd.write_csv((out / ("roc_" + std::string(settings[s].tag) + "_rep" +
                           std::to_string(rep) + ".csv"))
                       .string());
      aurocs.push_back(roc.auroc);
    }
    const auto [mn, mx] = std::minmax_element(aurocs.begin(), aurocs.end());
    json block;
    block["auroc"] = aurocs;
    block["min"] = *mn;
    block["max"] = *mx;
    block["spread"] = *mx - *mn;
    summary[settings[s].tag] = block;
  }
  return summary.dump(2) + "\n";
}

double nmc_at_threshold(const ClassifierSample& sample, double threshold) {
  std::vector<double> pred(sample.scores.size());
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = sample.scores[i] > threshold ? 1.0 : 0.0;
  return nmc(classification_counts(sample.labels, pred, 1.0));
}

double wmc_at_threshold(const ClassifierSample& sample, double threshold, double w_fp,
                        double w_fn) {
  std::vector<double> pred(sample.scores.size());
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = sample.scores[i] > threshold ? 1.0 : 0.0;
  return wmc(classification_counts(sample.labels, pred, 1.0), w_fp, w_fn);
}

double positives_of(const ClassifierSample& sample) {
  double n = 0.0;
  for (double l : sample.labels) n += l == 1.0;
  return n;
}

std::string figure2(std::uint64_t seed, const fs::path& out) {
  const RngStream root(seed);
  std::vector<double> idx, nmc30, nmc1, nmc_neg;
  for (std::size_t rep = 0; rep < 10; ++rep) {
    const auto s30 =
        gen_classifier_scores(1000, 0.30, kDefaultDiscriminability, root.derive({0, rep}));
    const auto s1 =
        gen_classifier_scores(1000, 0.01, kDefaultDiscriminability, root.derive({1, rep}));
    idx.push_back(static_cast<double>(rep));
    nmc30.push_back(nmc_at_threshold(s30, 0.5));
    nmc1.push_back(nmc_at_threshold(s1, 0.5));
    nmc_neg.push_back(positives_of(s1));  // always-negative errs once per positive
  }
  PlotData pd;
  pd.kind = "boxplot";
  pd.columns = {{"replicate", idx},
                {"nmc_minority30", nmc30},
                {"nmc_minority1", nmc1},
                {"nmc_always_negative_minority1", nmc_neg}};
  pd.write_csv((out / "nmc.csv").string());
  json summary;
  summary["median_nmc_minority30"] = median_of(nmc30);
  summary["median_nmc_minority1"] = median_of(nmc1);
  summary["median_nmc_always_negative"] = median_of(nmc_neg);
  return summary.dump(2) + "\n";
}

std::string figure3(std::uint64_t seed, const fs::path& out) {
  const RngStream root(seed);
  std::vector<double> idx, w099, w_neg, w070;
  for (std::size_t rep = 0; rep < 10; ++rep) {
    const auto s =
        gen_classifier_scores(1000, 0.01, kDefaultDiscriminability, root.derive({rep}));
    idx.push_back(static_cast<double>(rep));
    w099.push_back(wmc_at_threshold(s, 0.99, 1.0, 100.0));
    w_neg.push_back(100.0 * positives_of(s));
    w070.push_back(wmc_at_threshold(s, 0.70, 1.0, 100.0));
  }
  PlotData pd;
  pd.kind = "boxplot";
  pd.columns = {{"replicate", idx},
                {"wmc_threshold099", w099},
                {"wmc_always_negative", w_neg},
                {"wmc_threshold070", w070}};
  pd.write_csv((out / "wmc.csv").string());
  json summary;
  summary["median_wmc_threshold099"] = median_of(w099);
  summary["median_wmc_always_negative"] = median_of(w_neg);
  summary["median_wmc_threshold070"] = median_of(w070);
  return summary.dump(2) + "\n";
}

std::string figure4(std::uint64_t seed, const fs::path& out) {
  const Dataset ds = gen_fig4(RngStream(seed));
  const PipelineSpec spec = fig4_pipeline(seed);
  const InnerSelection cv = single_cv_curve(ds, spec);
  PlotData pd;
  pd.kind = "cv_curve";
  std::vector<double> lv, press;
  for (const auto& pt : cv.curve) {
    lv.push_back(static_cast<double>(pt.n_lv));
    press.push_back(pt.metric);
  }
  pd.columns = {{"n_lv", lv}, {"metric", press}};
  pd.write_csv((out / "cv_curve.csv").string());

  double press0 = 0.0, best_pos = 0.0;
  bool have_pos = false;
  for (const auto& pt : cv.curve) {
    if (pt.n_lv == 0) press0 = pt.metric;
    else if (!have_pos || pt.metric < best_pos) {
      best_pos = pt.metric;
      have_pos = true;
    }
  }
  json summary;
  summary["press_0lv"] = press0;
  summary["min_press_positive_lv"] = best_pos;
  summary["chosen_n_lv"] = cv.chosen.n_lv;
  return summary.dump(2) + "\n";
}

void write_curve_csv(const std::vector<CvCurvePoint>& curve, const fs::path& path) {
  PlotData pd;
  pd.kind = "cv_curve";
  std::vector<double> lv, metric;
  for (const auto& pt : curve) {
    lv.push_back(static_cast<double>(pt.n_lv));
    metric.push_back(pt.metric);
  }
  pd.columns = {{"n_lv", lv}, {"metric", metric}};
  pd.write_csv(path.string());
}

std::string figure5(std::uint64_t seed, const fs::path& out, std::size_t threads) {
  const Dataset ds = gen_fig5(RngStream(seed));
  const PipelineSpec spec = fig5_pipeline(seed);

  RunOptions correct_opts;
  correct_opts.threads = threads;
  const ValidationReport correct = double_cv(ds, spec, correct_opts);

  RunOptions leaky_opts = correct_opts;
  leaky_opts.demonstrate_leakage = true;
  const ValidationReport leaky = double_cv(ds, spec, leaky_opts);

  write_curve_csv(correct.per_repetition[0].folds[0].inner_curve,
                  out / "inner_curve_correct.csv");
  write_curve_csv(leaky.per_repetition[0].folds[0].inner_curve, out / "inner_curve_leaky.csv");

  json summary;
  summary["q2_correct"] = correct.per_repetition[0].pooled_metric;
  summary["q2_leaky"] = leaky.per_repetition[0].pooled_metric;
  summary["gap"] =
      leaky.per_repetition[0].pooled_metric - correct.per_repetition[0].pooled_metric;
  summary["watermark_leaky"] = kLeakageWatermark;
  return summary.dump(2) + "\n";
}

std::string figure6(std::uint64_t seed, const fs::path& out, std::size_t threads) {
  const auto sample = gen_informative(20, 100, 2, 10, kDefaultInformativeNoiseSd,
                                      RngStream(seed));
  const auto specs = fig6_pipelines(seed);

  RunOptions opts;
  opts.threads = threads;
  std::vector<ValidationReport> reports;
  for (const auto& spec : specs) reports.push_back(double_cv(sample.data, spec, opts));

  PlotData pd;
  pd.kind = "boxplot";
  std::vector<double> idx(reports.front().per_repetition.size());
  for (std::size_t r = 0; r < idx.size(); ++r) idx[r] = static_cast<double>(r);
  pd.columns.emplace_back("repetition", idx);
  for (const auto& r : reports) pd.columns.emplace_back(r.spec.name, r.per_rep_metrics());
  pd.write_csv((out / "q2_per_repetition.csv").string());

  const ComparisonResult sr_vs_vip = compare_models(reports[1], reports[2]);

  json summary;
  for (const auto& r : reports) {
    json block;
    block["median_q2"] = r.summary.median;
    block["iqr"] = r.summary.iqr;
    block["mean_q2"] = r.summary.mean;
    block["sd"] = r.summary.sd;
    summary["pipelines"][r.spec.name] = block;
  }
  summary["p_value_sr_vs_vip"] = sr_vs_vip.p_value;
  write_text(out / "timings.json", run_timings_to_json(reports, {sr_vs_vip}));
  return summary.dump(2) + "\n";
}

}  // namespace

std::string reproduce_figure(int figure_id, std::uint64_t seed, const std::string& out_dir,
                             std::size_t threads) {
  const fs::path out(out_dir);
  fs::create_directories(out);
  std::string summary;
  switch (figure_id) {
    case 1: summary = figure1(seed, out); break;
    case 2: summary = figure2(seed, out); break;
    case 3: summary = figure3(seed, out); break;
    case 4: summary = figure4(seed, out); break;
    case 5: summary = figure5(seed, out, threads); break;
    case 6: summary = figure6(seed, out, threads); break;
    default:
      throw ConfigError("figure id must be 1..6, got " + std::to_string(figure_id));
  }
  write_text(out / "summary.json", summary);
  return summary;
}

}  // namespace valguard
