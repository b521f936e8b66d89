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
#ifndef VALGUARD_ENGINE_HPP
#define VALGUARD_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valguard/dataset.hpp"
#include "valguard/metrics.hpp"
#include "valguard/pls.hpp"
#include "valguard/preprocess.hpp"
#include "valguard/rng.hpp"
#include "valguard/split.hpp"

namespace valguard {

enum class ModelKind { pls, plsda };

/// One candidate in the meta-parameter grid searched by the inner loop.
struct GridPoint {
  std::size_t n_lv = 0;
  SelectionSpec selection;
};

/// Declarative pipeline: what to fit, how to split, what to optimize.
/// All model-building operations (preprocessing fit, variable selection,
/// model fit) run strictly inside the loop that owns the build data.
struct PipelineSpec {
  std::string name = "pipeline";
  ModelKind model = ModelKind::pls;
  PreprocSpec x_preproc{PreprocKind::mean_center, {}};
  PreprocSpec y_preproc{PreprocKind::mean_center, {}};  // regression; PLS-DA centers dummies itself
  std::vector<SelectionSpec> selection_grid{SelectionSpec{}};
  std::vector<std::size_t> n_lv_grid{0, 1, 2};  // must contain 0 so the baseline is a candidate
  SplitPolicy inner_policy;
  SplitPolicy outer_policy;
  MetricSpec metric;
  std::size_t n_repetitions = 1;
  std::uint64_t seed = 0;
};

/// Phase labels for the dataset-row materialization hook. Every read of
/// dataset rows by the engine flows through one gather call, so an observer
/// can prove that no held-out row is touched before prediction time.
enum class GatherPhase { outer_build, outer_test, leaky_selection };

struct GatherEvent {
  GatherPhase phase;
  std::size_t repetition;
  std::size_t outer_fold;  // SIZE_MAX when not applicable
  std::span<const std::size_t> rows;
};

struct EngineHooks {
  std::function<void(const GatherEvent&)> on_gather;
};

struct RunOptions {
  std::size_t threads = 1;
  /// Reproduces the classic leakage mistake (variable selection on the full
  /// dataset before splitting). Reports produced this way carry a watermark
  /// and are never valid performance estimates.
  bool demonstrate_leakage = false;
  EngineHooks hooks;
};

struct ChosenMeta {
  std::size_t n_lv = 0;
  SelectionSpec selection;
  std::size_t n_selected = 0;
  bool fallback = false;  // empty selection fell back to all variables
};

struct CvCurvePoint {
  std::size_t n_lv = 0;
  double metric = 0.0;
};

/// Result of one inner-loop meta-parameter search.
struct InnerSelection {
  GridPoint chosen;
  double chosen_metric = 0.0;
  std::size_t chosen_n_selected = 0;
  /// Best inner-CV metric per n_lv (always includes the 0-LV point).
  std::vector<CvCurvePoint> curve;
  std::size_t degenerate_folds = 0;
  std::size_t fallbacks = 0;
};

struct OuterFoldResult {
  std::size_t fold = 0;
  std::optional<double> metric;  // absent when undefined on this fold alone
  bool skipped = false;          // fold dropped as degenerate
  ChosenMeta chosen;
  std::vector<CvCurvePoint> inner_curve;
};

struct RepetitionResult {
  std::vector<OuterFoldResult> folds;
  double pooled_metric = 0.0;
  double zero_lv_baseline = 0.0;
  std::optional<double> naive_class_metric;
  /// The pooled metric used a degenerate-denominator convention (0 score).
  bool metric_convention_flag = false;
  double seconds = 0.0;  // wall clock; reported in the timing sidecar only
};

struct SummaryStats {
  double mean = 0.0, sd = 0.0, median = 0.0, iqr = 0.0;
};

struct ValidationReport {
  PipelineSpec spec;
  std::vector<RepetitionResult> per_repetition;
  SummaryStats summary;
  double baseline_zero_lv = 0.0;
  std::optional<double> baseline_naive_class;
  std::optional<std::vector<double>> null_distribution;
  std::optional<double> p_value_vs_null;
  std::string independence_disclosure;
  std::size_t selection_fallbacks = 0;
  std::size_t degenerate_folds = 0;
  std::size_t metric_convention_flags = 0;
  bool leakage_demonstration = false;

  std::vector<double> per_rep_metrics() const;
  double total_seconds() const;
};

/// Meta-parameter search over n_lv_grid x selection_grid using K-fold CV on
/// the build portion only. Per inner fold, preprocessing and variable
/// selection are fit on the inner-train split alone. Returns the best grid
/// point (ties prefer fewer LVs, then fewer selected variables) and the CV
/// curve including the 0-LV baseline point.
InnerSelection inner_cv_select(const Dataset& build, const PipelineSpec& spec, RngStream rng);

/// Repeated double CV: per repetition an outer split estimates
/// generalization on held-out folds while inner_cv_select picks
/// meta-parameters on each build portion. Deterministic function of
/// (dataset, spec) including the seed, regardless of thread count.
ValidationReport double_cv(const Dataset& ds, const PipelineSpec& spec,
                           const RunOptions& opts = {});

enum class PermuteBlock { y, x };

struct PermutationResult {
  std::vector<double> null_metrics;
  double observed = 0.0;  // median of the observed run's repetition metrics
  double p_value = 0.0;   // add-one estimate, never below 1/(n_perm+1)
};

/// Null distribution by rerunning the full double CV (one repetition each)
/// on row-permuted copies of the chosen block.
PermutationResult permutation_null(const Dataset& ds, const PipelineSpec& spec,
                                   std::size_t n_perm, PermuteBlock block,
                                   const RunOptions& opts = {});

/// Just the null draws, for callers that already ran the observed estimate.
std::vector<double> permutation_null_draws(const Dataset& ds, const PipelineSpec& spec,
                                           std::size_t n_perm, PermuteBlock block,
                                           const RunOptions& opts = {});

/// Add-one permutation p-value: (1 + #{null at least as good}) / (1 + n).
double permutation_p_value(const MetricSpec& metric, std::span<const double> null_metrics,
                           double observed);

struct BootstrapSummary {
  double mean = 0.0, sd = 0.0, lo95 = 0.0, hi95 = 0.0;
};

/// Nonparametric bootstrap of the mean with a percentile 95% interval.
BootstrapSummary bootstrap_metric(std::span<const double> values, std::size_t n_boot,
                                  RngStream rng);

struct ComparisonResult {
  std::string name_a, name_b;
  std::vector<double> diffs;  // per-repetition metric differences (a - b)
  double p_value = 1.0;
  double median_a = 0.0, median_b = 0.0;
  double iqr_a = 0.0, iqr_b = 0.0;
  double seconds_a = 0.0, seconds_b = 0.0;
};

/// Paired two-sided Wilcoxon signed-rank comparison of per-repetition
/// metrics. Requires the same repetition count, metric, seed and outer
/// policy (the paired design).
ComparisonResult compare_models(const ValidationReport& a, const ValidationReport& b);

/// Cross-validated performance of the 0-LV model: each held-out fold's Y is
/// predicted by the build-fold mean (majority class for classifiers).
double zero_lv_baseline(const Dataset& ds, const PipelineSpec& spec);

/// CV profile on the whole dataset (no outer loop) - the classic curve of
/// metric versus number of latent variables with its 0-LV point.
InnerSelection single_cv_curve(const Dataset& ds, const PipelineSpec& spec);

/// Two-sided Wilcoxon signed-rank p-value; zero differences are dropped,
/// tied magnitudes get average ranks, the null distribution is enumerated
/// exactly for up to 20 nonzero differences (normal approximation beyond).
double wilcoxon_signed_rank_p(std::span<const double> diffs);

double median_of(std::vector<double> values);
double iqr_of(std::vector<double> values);

inline constexpr const char* kDefaultDisclosure =
    "single-block data split; independence holds only for operations after splitting";
inline constexpr const char* kLeakageWatermark = "INVALID — leakage demonstration";

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);
std::string to_string(PermuteBlock block);
PermuteBlock permute_block_from_string(const std::string& s);

}  // namespace valguard

#endif
