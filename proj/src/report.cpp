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
#include "valguard/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "valguard/config.hpp"
#include "valguard/errors.hpp"

namespace valguard {

using nlohmann::json;

namespace {

json selection_json(const SelectionSpec& s) {
  json j;
  j["method"] = to_string(s.method);
  if (s.method == SelectionMethod::vip || s.method == SelectionMethod::sr)
    j["threshold"] = s.threshold;
  if (s.method == SelectionMethod::sparse) j["keep_k"] = s.keep_k;
  return j;
}

json report_json_obj(const ValidationReport& report) {
  json j;
  j["name"] = report.spec.name;
  j["pipeline"] = json::parse(pipeline_spec_to_json(report.spec));
  j["n_repetitions"] = report.per_repetition.size();

  json reps = json::array();
  for (std::size_t r = 0; r < report.per_repetition.size(); ++r) {
    const auto& rep = report.per_repetition[r];
    json jr;
    jr["repetition"] = r;
    jr["pooled_metric"] = rep.pooled_metric;
    jr["zero_lv_baseline"] = rep.zero_lv_baseline;
    jr["naive_class_metric"] =
        rep.naive_class_metric ? json(*rep.naive_class_metric) : json(nullptr);
    json folds = json::array();
    for (const auto& f : rep.folds) {
      json jf;
      jf["fold"] = f.fold;
      jf["metric"] = f.metric ? json(*f.metric) : json(nullptr);
      jf["skipped"] = f.skipped;
      json chosen;
      chosen["n_lv"] = f.chosen.n_lv;
      chosen["selection"] = selection_json(f.chosen.selection);
      chosen["n_selected"] = f.chosen.n_selected;
      chosen["fallback"] = f.chosen.fallback;
      jf["chosen"] = chosen;
      folds.push_back(jf);
    }
    jr["folds"] = folds;
    reps.push_back(jr);
  }
  j["per_repetition"] = reps;

  json s;
  s["mean"] = report.summary.mean;
  s["sd"] = report.summary.sd;
  s["median"] = report.summary.median;
  s["iqr"] = report.summary.iqr;
  j["summary"] = s;

  j["baseline_zero_lv"] = report.baseline_zero_lv;
  j["baseline_naive_class"] =
      report.baseline_naive_class ? json(*report.baseline_naive_class) : json(nullptr);
  j["null_distribution"] =
      report.null_distribution ? json(*report.null_distribution) : json(nullptr);
  j["p_value_vs_null"] =
      report.p_value_vs_null ? json(*report.p_value_vs_null) : json(nullptr);
  j["independence_disclosure"] = report.independence_disclosure;
  j["selection_fallbacks"] = report.selection_fallbacks;
  j["degenerate_folds"] = report.degenerate_folds;
  j["metric_convention_flags"] = report.metric_convention_flags;
  if (report.leakage_demonstration) j["watermark"] = kLeakageWatermark;
  return j;
}

json comparison_json_obj(const ComparisonResult& cmp) {
  json j;
  j["a"] = cmp.name_a;
  j["b"] = cmp.name_b;
  j["diffs"] = cmp.diffs;
  j["p_value"] = cmp.p_value;
  j["median_a"] = cmp.median_a;
  j["median_b"] = cmp.median_b;
  j["iqr_a"] = cmp.iqr_a;
  j["iqr_b"] = cmp.iqr_b;
  return j;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DataError("report validation: " + what);
}

void check_number(const json& j, const char* key, const std::string& where) {
  require(j.contains(key) && j.at(key).is_number(), where + " needs numeric '" + key + "'");
}

void check_pipeline_report(const json& p) {
  for (const char* key : {"name", "pipeline", "per_repetition", "summary", "baseline_zero_lv",
                          "independence_disclosure", "selection_fallbacks", "degenerate_folds"})
    require(p.contains(key), std::string("pipeline report needs '") + key + "'");
  require(p.at("per_repetition").is_array() && !p.at("per_repetition").empty(),
          "per_repetition must be a non-empty array");
  require(p.at("per_repetition").size() == p.at("n_repetitions").get<std::size_t>(),
          "per_repetition length must equal n_repetitions");
  const json& s = p.at("summary");
  for (const char* key : {"mean", "sd", "median", "iqr"}) check_number(s, key, "summary");
  for (const auto& rep : p.at("per_repetition")) {
    check_number(rep, "pooled_metric", "repetition");
    require(rep.contains("folds") && rep.at("folds").is_array(), "repetition needs 'folds'");
  }
  if (p.contains("p_value_vs_null") && !p.at("p_value_vs_null").is_null()) {
    const double pv = p.at("p_value_vs_null").get<double>();
    require(pv > 0.0 && pv <= 1.0, "p_value_vs_null must lie in (0, 1]");
  }
}

}  // namespace

void PlotData::validate() const {
  if (columns.empty()) throw DataError("plot data: no columns");
  const std::size_t len = columns.front().second.size();
  for (const auto& [name, series] : columns)
    if (series.size() != len)
      throw DataError("plot data: column '" + name + "' length differs");
  auto has = [&](const char* name) {
    for (const auto& [n, s] : columns)
      if (n == name) return true;
    return false;
  };
  if (kind == "roc") {
    if (!has("fpr") || !has("tpr")) throw DataError("roc plot data needs fpr and tpr");
  } else if (kind == "cv_curve") {
    if (!has("n_lv") || !has("metric"))
      throw DataError("cv_curve plot data needs n_lv and metric");
  } else if (kind == "null_histogram") {
    if (!has("metric")) throw DataError("null_histogram plot data needs metric");
  } else if (kind != "boxplot") {
    throw DataError("unknown plot kind: '" + kind + "'");
  }
}

void PlotData::write_csv(const std::string& path) const {
  validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c].first;
  out << "\n";
  char buf[64];
  const std::size_t rows = columns.front().second.size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", columns[c].second[i]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
}

std::string report_to_json(const ValidationReport& report) {
  return report_json_obj(report).dump(2) + "\n";
}

std::string comparison_to_json(const ComparisonResult& cmp) {
  return comparison_json_obj(cmp).dump(2) + "\n";
}

std::string run_document_to_json(const std::string& normalized_config_json,
                                 const std::vector<ValidationReport>& reports,
                                 const std::vector<ComparisonResult>& comparisons) {
  json j;
  j["schema_version"] = 1;
  j["config"] = json::parse(normalized_config_json);
  json pipes = json::array();
  for (const auto& r : reports) pipes.push_back(report_json_obj(r));
  j["pipelines"] = pipes;
  json cmps = json::array();
  for (const auto& c : comparisons) cmps.push_back(comparison_json_obj(c));
  j["comparisons"] = cmps;
  j["timings_file"] = "timings.json";
  return j.dump(2) + "\n";
}

std::string run_timings_to_json(const std::vector<ValidationReport>& reports,
                                const std::vector<ComparisonResult>& comparisons) {
  json j;
  json pipes;
  for (const auto& r : reports) {
    json entry;
    std::vector<double> secs;
    for (const auto& rep : r.per_repetition) secs.push_back(rep.seconds);
    entry["per_repetition_seconds"] = secs;
    entry["total_seconds"] = r.total_seconds();
    pipes[r.spec.name] = entry;
  }
  j["pipelines"] = pipes;
  json cmps = json::array();
  for (const auto& c : comparisons) {
    json entry;
    entry["a"] = c.name_a;
    entry["b"] = c.name_b;
    entry["seconds_a"] = c.seconds_a;
    entry["seconds_b"] = c.seconds_b;
    cmps.push_back(entry);
  }
  j["comparisons"] = cmps;
  return j.dump(2) + "\n";
}

void validate_run_document(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("report is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "top level must be an object");
  require(j.contains("schema_version") && j.at("schema_version") == 1,
          "schema_version must be 1");
  require(j.contains("config") && j.at("config").is_object(), "missing config echo");
  require(j.contains("pipelines") && j.at("pipelines").is_array() && !j.at("pipelines").empty(),
          "missing pipeline reports");
  for (const auto& p : j.at("pipelines")) check_pipeline_report(p);
  require(j.contains("comparisons") && j.at("comparisons").is_array(),
          "missing comparisons array");
  for (const auto& c : j.at("comparisons")) {
    require(c.contains("p_value") && c.at("p_value").is_number(), "comparison needs p_value");
    const double pv = c.at("p_value").get<double>();
    require(pv > 0.0 && pv <= 1.0, "comparison p_value must lie in (0, 1]");
    require(c.contains("diffs") && c.at("diffs").is_array(), "comparison needs diffs");
  }
}

std::string pls_model_to_json(const PlsModel& m) {
  auto matrix_json = [](const Matrix& a) {
    json rows = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  auto preproc_json = [](const FittedPreproc& fp) {
    json j;
    j["kind"] = to_string(fp.kind);
    j["n_vars"] = fp.n_vars;
    if (!fp.means.empty()) j["means"] = fp.means;
    if (!fp.scales.empty()) j["scales"] = fp.scales;
    return j;
  };
  json j;
  j["n_lv"] = m.n_lv;
  j["W"] = matrix_json(m.W);
  j["P"] = matrix_json(m.P);
  j["Q"] = matrix_json(m.Q);
  j["B"] = matrix_json(m.B);
  j["x_preproc"] = preproc_json(m.x_pre);
  j["y_preproc"] = preproc_json(m.y_pre);
  if (m.is_classifier) j["class_values"] = m.class_values;
  return j.dump(2) + "\n";
}

void write_cv_curves_csv(const ValidationReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "repetition,outer_fold,n_lv,metric\n";
  char buf[64];
  for (std::size_t r = 0; r < report.per_repetition.size(); ++r) {
    for (const auto& f : report.per_repetition[r].folds) {
      for (const auto& pt : f.inner_curve) {
        std::snprintf(buf, sizeof buf, "%.17g", pt.metric);
        out << r << "," << f.fold << "," << pt.n_lv << "," << buf << "\n";
      }
    }
  }
}

void write_null_distribution_csv(const std::vector<double>& nulls, const std::string& path) {
  PlotData pd;
  pd.kind = "null_histogram";
  pd.columns.emplace_back("metric", nulls);
  pd.write_csv(path);
}

}  // namespace valguard
