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
#ifndef VALGUARD_METRICS_HPP
#define VALGUARD_METRICS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "valguard/matrix.hpp"

namespace valguard {

enum class MetricName { press, q2, mae, mse, nmc, wmc, precision, recall, f1, auroc, mcc, kappa };
enum class Orientation { higher_better, lower_better };

/// Named performance criterion. Orientation is fixed per name; wmc carries
/// the false-positive / false-negative unit costs (defaults 1 and 100).
struct MetricSpec {
  MetricName name = MetricName::press;
  double w_fp = 1.0;
  double w_fn = 100.0;
  double positive_class = 1.0;  // binary metrics

  Orientation orientation() const;
  bool is_classification() const;
  /// True when the metric consumes continuous scores rather than hard labels.
  bool needs_scores() const { return name == MetricName::auroc; }
};

/// Binary confusion counts.
struct Counts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// press = sum((y-yhat)^2); q2 = 1 - press/press(baseline means), which
/// requires the cross-validated per-column baseline means; mae and mse are
/// elementwise means over all cells.
double regression_metric(const MetricSpec& spec, const Matrix& y_true, const Matrix& y_pred,
                         const std::vector<double>* baseline_mean = nullptr);

/// Standard confusion counts; errors when more than two distinct label
/// values appear across truth and predictions.
Counts classification_counts(std::span<const double> y_true, std::span<const double> y_pred,
                             double positive_class);

double nmc(const Counts& c);
double wmc(const Counts& c, double w_fp, double w_fn);
// Degenerate denominators score 0 by convention (and are flagged upstream):
// precision/recall/f1 with an empty denominator, mcc with a zero marginal,
// kappa when expected agreement is 1.
double precision(const Counts& c);
double recall(const Counts& c);
double f1(const Counts& c);
double mcc(const Counts& c);
double kappa(const Counts& c);

/// True when the metric value for these counts came from a degenerate
/// denominator convention.
bool counts_metric_degenerate(MetricName name, const Counts& c);

double classification_metric(const MetricSpec& spec, const Counts& c);

/// ROC curve from a descending threshold sweep over unique score values;
/// tied scores are grouped into one sweep step (diagonal segment). AUROC by
/// trapezoidal integration, which equals the Mann-Whitney pairwise statistic.
struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0) .. (1,1)
  double auroc = 0.0;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const double> labels,
                   double positive_class);

/// Two-column CSV (fpr, tpr) for external plotting.
void write_roc_csv(const RocCurve& curve, const std::string& path);

std::string to_string(MetricName name);
MetricName metric_name_from_string(const std::string& s);

}  // namespace valguard

#endif
