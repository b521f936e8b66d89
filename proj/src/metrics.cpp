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
#include "valguard/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "valguard/errors.hpp"

namespace valguard {

Orientation MetricSpec::orientation() const {
  switch (name) {
    case MetricName::q2:
    case MetricName::precision:
    case MetricName::recall:
    case MetricName::f1:
    case MetricName::auroc:
    case MetricName::mcc:
    case MetricName::kappa:
      return Orientation::higher_better;
    case MetricName::press:
    case MetricName::mae:
    case MetricName::mse:
    case MetricName::nmc:
    case MetricName::wmc:
      return Orientation::lower_better;
  }
  return Orientation::lower_better;
}

bool MetricSpec::is_classification() const {
  switch (name) {
    case MetricName::press:
    case MetricName::q2:
    case MetricName::mae:
    case MetricName::mse:
      return false;
    default:
      return true;
  }
}

double regression_metric(const MetricSpec& spec, const Matrix& y_true, const Matrix& y_pred,
                         const std::vector<double>* baseline_mean) {
  if (y_true.rows() != y_pred.rows() || y_true.cols() != y_pred.cols())
    throw DataError("regression_metric: shape mismatch");
  if (y_true.empty()) throw DataError("regression_metric: empty input");
  const std::size_t cells = y_true.size();
  double press = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < y_true.rows(); ++i) {
    auto t = y_true.row(i), e = y_pred.row(i);
    for (std::size_t j = 0; j < y_true.cols(); ++j) {
      const double d = t[j] - e[j];
      press += d * d;
      abs_sum += std::abs(d);
    }
  }
  switch (spec.name) {
    case MetricName::press:
      return press;
    case MetricName::mae:
      return abs_sum / static_cast<double>(cells);
    case MetricName::mse:
      return press / static_cast<double>(cells);
    case MetricName::q2: {
      if (!baseline_mean) throw ConfigError("q2 requires the cross-validated baseline means");
      if (baseline_mean->size() != y_true.cols())
        throw DataError("q2: baseline mean count differs from Y columns");
      double press0 = 0.0;
      for (std::size_t i = 0; i < y_true.rows(); ++i) {
        auto t = y_true.row(i);
        for (std::size_t j = 0; j < y_true.cols(); ++j) {
          const double d = t[j] - (*baseline_mean)[j];
          press0 += d * d;
        }
      }
      if (press0 == 0.0) throw DegenerateError("q2: constant response, baseline PRESS is zero");
      return 1.0 - press / press0;
    }
    default:
      throw ConfigError("regression_metric: '" + to_string(spec.name) +
                        "' is not a regression metric");
  }
}

Counts classification_counts(std::span<const double> y_true, std::span<const double> y_pred,
                             double positive_class) {
  if (y_true.size() != y_pred.size()) throw DataError("classification_counts: length mismatch");
  if (y_true.empty()) throw DataError("classification_counts: empty input");
  std::set<double> domain(y_true.begin(), y_true.end());
  domain.insert(y_pred.begin(), y_pred.end());
  if (domain.size() > 2)
    throw DataError("classification_counts: more than two label values seen (" +
                    std::to_string(domain.size()) + ")");
  Counts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool is_pos = y_true[i] == positive_class;
    const bool said_pos = y_pred[i] == positive_class;
    if (is_pos && said_pos)
      ++c.tp;
    else if (is_pos)
      ++c.fn;
    else if (said_pos)
      ++c.fp;
    else
      ++c.tn;
  }
  return c;
}

double nmc(const Counts& c) { return static_cast<double>(c.fp + c.fn); }

double wmc(const Counts& c, double w_fp, double w_fn) {
  return w_fp * static_cast<double>(c.fp) + w_fn * static_cast<double>(c.fn);
}

double precision(const Counts& c) {
  const double denom = static_cast<double>(c.tp + c.fp);
  return denom == 0.0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

double recall(const Counts& c) {
  const double denom = static_cast<double>(c.tp + c.fn);
  return denom == 0.0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

double f1(const Counts& c) {
  const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}

double mcc(const Counts& c) {
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  const double denom2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  return denom2 == 0.0 ? 0.0 : (tp * tn - fp * fn) / std::sqrt(denom2);
}

double kappa(const Counts& c) {
  const double n = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
  const double po = (static_cast<double>(c.tp) + static_cast<double>(c.tn)) / n;
  const double p_yes = (static_cast<double>(c.tp + c.fp) / n) *
                       (static_cast<double>(c.tp + c.fn) / n);
  const double p_no = (static_cast<double>(c.tn + c.fn) / n) *
                      (static_cast<double>(c.tn + c.fp) / n);
  const double pe = p_yes + p_no;
  return pe == 1.0 ? 0.0 : (po - pe) / (1.0 - pe);
}

bool counts_metric_degenerate(MetricName name, const Counts& c) {
  switch (name) {
    case MetricName::precision: return c.tp + c.fp == 0;
    case MetricName::recall: return c.tp + c.fn == 0;
    case MetricName::f1: return 2 * c.tp + c.fp + c.fn == 0;
    case MetricName::mcc:
      return (c.tp + c.fp) == 0 || (c.tp + c.fn) == 0 || (c.tn + c.fp) == 0 ||
             (c.tn + c.fn) == 0;
    case MetricName::kappa: {
      const double n = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
      const double pe = (static_cast<double>(c.tp + c.fp) / n) *
                            (static_cast<double>(c.tp + c.fn) / n) +
                        (static_cast<double>(c.tn + c.fn) / n) *
                            (static_cast<double>(c.tn + c.fp) / n);
      return pe == 1.0;
    }
    default:
      return false;
  }
}

double classification_metric(const MetricSpec& spec, const Counts& c) {
  switch (spec.name) {
    case MetricName::nmc: return nmc(c);
    case MetricName::wmc: return wmc(c, spec.w_fp, spec.w_fn);
    case MetricName::precision: return precision(c);
    case MetricName::recall: return recall(c);
    case MetricName::f1: return f1(c);
    case MetricName::mcc: return mcc(c);
    case MetricName::kappa: return kappa(c);
    default:
      throw ConfigError("classification_metric: '" + to_string(spec.name) +
                        "' does not apply to confusion counts");
  }
}

RocCurve roc_curve(std::span<const double> scores, std::span<const double> labels,
                   double positive_class) {
  if (scores.size() != labels.size()) throw DataError("roc_curve: length mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (double l : labels) (l == positive_class ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0)
    throw DegenerateError("roc_curve: needs at least one positive and one negative");

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  double tp = 0.0, fp = 0.0, auc = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // Group tied scores into a single step so ties trace a diagonal segment.
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]] == positive_class)
        tp += 1.0;
      else
        fp += 1.0;
      ++i;
    }
    const double fpr = fp / static_cast<double>(n_neg);
    const double tpr = tp / static_cast<double>(n_pos);
    auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    curve.points.emplace_back(fpr, tpr);
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  curve.auroc = auc;
  return curve;
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "fpr,tpr\n";
  char buf[64];
  for (const auto& [fpr, tpr] : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", fpr, tpr);
    out << buf;
  }
}

std::string to_string(MetricName name) {
  switch (name) {
    case MetricName::press: return "press";
    case MetricName::q2: return "q2";
    case MetricName::mae: return "mae";
    case MetricName::mse: return "mse";
    case MetricName::nmc: return "nmc";
    case MetricName::wmc: return "wmc";
    case MetricName::precision: return "precision";
    case MetricName::recall: return "recall";
    case MetricName::f1: return "f1";
    case MetricName::auroc: return "auroc";
    case MetricName::mcc: return "mcc";
    case MetricName::kappa: return "kappa";
  }
  return "press";
}

MetricName metric_name_from_string(const std::string& s) {
  static const std::pair<const char*, MetricName> table[] = {
      {"press", MetricName::press}, {"q2", MetricName::q2},
      {"mae", MetricName::mae},     {"mse", MetricName::mse},
      {"nmc", MetricName::nmc},     {"wmc", MetricName::wmc},
      {"precision", MetricName::precision}, {"recall", MetricName::recall},
      {"f1", MetricName::f1},       {"auroc", MetricName::auroc},
      {"mcc", MetricName::mcc},     {"kappa", MetricName::kappa},
  };
  for (const auto& [text, name] : table)
    if (s == text) return name;
  throw ConfigError("unknown metric: '" + s + "'");
}

}  // namespace valguard
