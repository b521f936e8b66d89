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
#ifndef VALGUARD_REPORT_HPP
#define VALGUARD_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "valguard/engine.hpp"

namespace valguard {

/// Named numeric series ready to be redrawn by any plotting tool.
/// Mandatory columns per kind: roc (fpr, tpr), cv_curve (n_lv, metric),
/// null_histogram (metric), boxplot (one series per box).
struct PlotData {
  std::string kind;
  std::vector<std::pair<std::string, std::vector<double>>> columns;

  void validate() const;
  void write_csv(const std::string& path) const;
};

/// Deterministic JSON for one pipeline report. Wall-clock timings are
/// deliberately excluded (they go to the timing sidecar) so reruns with the
/// same seed produce byte-identical documents.
std::string report_to_json(const ValidationReport& report);

std::string comparison_to_json(const ComparisonResult& cmp);

/// Whole-run document: config echo, per-pipeline reports, pairwise
/// comparisons, and the sidecar file name.
std::string run_document_to_json(const std::string& normalized_config_json,
                                 const std::vector<ValidationReport>& reports,
                                 const std::vector<ComparisonResult>& comparisons);

/// Wall-clock sidecar (not deterministic, not part of the report proper).
std::string run_timings_to_json(const std::vector<ValidationReport>& reports,
                                const std::vector<ComparisonResult>& comparisons);

/// Structural validation against the shipped schema
/// (docs/report.schema.json mirrors these checks). Throws DataError.
void validate_run_document(const std::string& json_text);

/// Audit export of a fitted model: W, P, Q, B and preprocessing parameters.
std::string pls_model_to_json(const PlsModel& m);

/// One row per (repetition, outer fold, n_lv) point of the inner CV curves.
void write_cv_curves_csv(const ValidationReport& report, const std::string& path);

void write_null_distribution_csv(const std::vector<double>& nulls, const std::string& path);

}  // namespace valguard

#endif
