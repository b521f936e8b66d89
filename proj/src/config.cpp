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
#include "valguard/config.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "valguard/errors.hpp"

namespace valguard {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config " + path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  return j.at(key);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    fail(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end())
      fail(path + "." + key, "unknown field");
  }
}

PreprocSpec parse_preproc(const json& j, const std::string& path) {
  PreprocSpec spec;
  if (j.is_string()) {
    spec.kind = preproc_kind_from_string(j.get<std::string>());
    return spec;
  }
  if (!j.is_object()) fail(path, "expected a string or an object with 'kind'");
  reject_unknown(j, {"kind", "cuts"}, path);
  spec.kind = preproc_kind_from_string(get_string(need(j, "kind", path), path + ".kind"));
  if (j.contains("cuts")) {
    if (spec.kind != PreprocKind::interval_center)
      fail(path + ".cuts", "only interval_center takes cut points");
    for (const auto& c : j.at("cuts")) spec.interval_cuts.push_back(get_count(c, path + ".cuts"));
  }
  return spec;
}

json preproc_to_json(const PreprocSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  if (spec.kind == PreprocKind::interval_center) j["cuts"] = spec.interval_cuts;
  return j;
}

std::vector<SelectionSpec> parse_selection(const json& j, const std::string& path) {
  std::vector<SelectionSpec> grid;
  auto parse_one = [&](const json& obj, const std::string& p) {
    if (!obj.is_object()) fail(p, "expected an object with 'method'");
    reject_unknown(obj, {"method", "threshold", "keep_k", "keep_k_grid", "threshold_grid"}, p);
    SelectionSpec base;
    base.method =
        selection_method_from_string(get_string(need(obj, "method", p), p + ".method"));
    switch (base.method) {
      case SelectionMethod::none:
        grid.push_back(base);
        break;
      case SelectionMethod::vip:
      case SelectionMethod::sr: {
        if (obj.contains("keep_k") || obj.contains("keep_k_grid"))
          fail(p, "keep_k applies to sparse selection only");
        if (obj.contains("threshold_grid")) {
          for (const auto& t : obj.at("threshold_grid")) {
            base.threshold = get_number(t, p + ".threshold_grid");
            grid.push_back(base);
          }
        } else {
          base.threshold =
              obj.contains("threshold") ? get_number(obj.at("threshold"), p + ".threshold") : 1.0;
          grid.push_back(base);
        }
        break;
      }
      case SelectionMethod::sparse: {
        if (obj.contains("threshold") || obj.contains("threshold_grid"))
          fail(p, "threshold applies to vip/sr selection only");
        if (obj.contains("keep_k_grid")) {
          for (const auto& k : obj.at("keep_k_grid")) {
            base.keep_k = get_count(k, p + ".keep_k_grid");
            grid.push_back(base);
          }
        } else {
          base.keep_k = get_count(need(obj, "keep_k", p), p + ".keep_k");
          grid.push_back(base);
        }
        break;
      }
    }
  };
  if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& obj : j) parse_one(obj, path + "[" + std::to_string(i++) + "]");
  } else {
    parse_one(j, path);
  }
  if (grid.empty()) fail(path, "selection grid is empty");
  return grid;
}

json selection_to_json(const SelectionSpec& s) {
  json j;
  j["method"] = to_string(s.method);
  if (s.method == SelectionMethod::vip || s.method == SelectionMethod::sr)
    j["threshold"] = s.threshold;
  if (s.method == SelectionMethod::sparse) j["keep_k"] = s.keep_k;
  return j;
}

SplitPolicy parse_policy(const json& j, const std::string& path) {
  SplitPolicy pol;
  if (!j.is_object()) fail(path, "expected an object with 'kind'");
  reject_unknown(j, {"kind", "n_folds", "gap", "strat_y_col"}, path);
  pol.kind = split_kind_from_string(get_string(need(j, "kind", path), path + ".kind"));
  if (j.contains("n_folds")) pol.n_folds = get_count(j.at("n_folds"), path + ".n_folds");
  if (pol.n_folds == 1) fail(path + ".n_folds", "need at least 2 folds (or 0 for auto)");
  if (j.contains("gap")) {
    if (pol.kind != SplitKind::time_blocked)
      fail(path + ".gap", "gap applies to time_blocked splits only");
    pol.gap = get_count(j.at("gap"), path + ".gap");
  }
  if (j.contains("strat_y_col")) {
    if (pol.kind != SplitKind::stratified)
      fail(path + ".strat_y_col", "strat_y_col applies to stratified splits only");
    pol.strat_y_col = get_count(j.at("strat_y_col"), path + ".strat_y_col");
  }
  return pol;
}

json policy_to_json(const SplitPolicy& pol) {
  json j;
  j["kind"] = to_string(pol.kind);
  j["n_folds"] = pol.n_folds;
  if (pol.kind == SplitKind::time_blocked) j["gap"] = pol.gap;
  if (pol.kind == SplitKind::stratified) j["strat_y_col"] = pol.strat_y_col;
  return j;
}

MetricSpec parse_metric(const json& j, const std::string& path) {
  MetricSpec m;
  if (j.is_string()) {
    m.name = metric_name_from_string(j.get<std::string>());
    return m;
  }
  if (!j.is_object()) fail(path, "expected a string or an object with 'name'");
  reject_unknown(j, {"name", "orientation", "w_fp", "w_fn", "positive_class"}, path);
  m.name = metric_name_from_string(get_string(need(j, "name", path), path + ".name"));
  if (j.contains("orientation")) {
    const std::string o = get_string(j.at("orientation"), path + ".orientation");
    const std::string expect =
        m.orientation() == Orientation::higher_better ? "higher_better" : "lower_better";
    if (o != expect)
      fail(path + ".orientation", "metric '" + to_string(m.name) + "' is fixed to " + expect);
  }
  if (j.contains("w_fp")) {
    m.w_fp = get_number(j.at("w_fp"), path + ".w_fp");
    if (m.w_fp < 0) fail(path + ".w_fp", "must be >= 0");
  }
  if (j.contains("w_fn")) {
    m.w_fn = get_number(j.at("w_fn"), path + ".w_fn");
    if (m.w_fn < 0) fail(path + ".w_fn", "must be >= 0");
  }
  if (j.contains("positive_class"))
    m.positive_class = get_number(j.at("positive_class"), path + ".positive_class");
  return m;
}

json metric_to_json(const MetricSpec& m) {
  json j;
  j["name"] = to_string(m.name);
  j["orientation"] =
      m.orientation() == Orientation::higher_better ? "higher_better" : "lower_better";
  if (m.name == MetricName::wmc) {
    j["w_fp"] = m.w_fp;
    j["w_fn"] = m.w_fn;
  }
  if (m.is_classification()) j["positive_class"] = m.positive_class;
  return j;
}

PipelineSpec parse_pipeline(const json& j, std::uint64_t run_seed, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a pipeline object");
  reject_unknown(j,
                 {"name", "model", "x_preproc", "y_preproc", "selection", "n_lv_grid",
                  "inner_policy", "outer_policy", "metric", "n_repetitions", "seed"},
                 path);
  PipelineSpec spec;
  if (j.contains("name")) spec.name = get_string(j.at("name"), path + ".name");

  std::string model = "pls";
  if (j.contains("model")) model = get_string(j.at("model"), path + ".model");
  bool wants_sparse = false;
  if (model == "sparse_pls") {
    model = "pls";
    wants_sparse = true;
  } else if (model == "sparse_plsda") {
    model = "plsda";
    wants_sparse = true;
  }
  spec.model = model_kind_from_string(model);

  if (j.contains("x_preproc")) spec.x_preproc = parse_preproc(j.at("x_preproc"), path + ".x_preproc");
  if (j.contains("y_preproc")) spec.y_preproc = parse_preproc(j.at("y_preproc"), path + ".y_preproc");
  if (j.contains("selection")) spec.selection_grid = parse_selection(j.at("selection"), path + ".selection");
  if (wants_sparse) {
    const bool has_sparse =
        std::any_of(spec.selection_grid.begin(), spec.selection_grid.end(),
                    [](const SelectionSpec& s) { return s.method == SelectionMethod::sparse; });
    if (!has_sparse)
      fail(path + ".selection", "model 'sparse_" + model +
                                    "' requires selection entries with method 'sparse'");
  }

  if (j.contains("n_lv_grid")) {
    spec.n_lv_grid.clear();
    for (const auto& v : j.at("n_lv_grid"))
      spec.n_lv_grid.push_back(get_count(v, path + ".n_lv_grid"));
    if (spec.n_lv_grid.empty()) fail(path + ".n_lv_grid", "grid is empty");
  }
  // The 0-LV baseline is always a candidate.
  if (std::find(spec.n_lv_grid.begin(), spec.n_lv_grid.end(), 0u) == spec.n_lv_grid.end())
    spec.n_lv_grid.push_back(0);
  std::sort(spec.n_lv_grid.begin(), spec.n_lv_grid.end());
  spec.n_lv_grid.erase(std::unique(spec.n_lv_grid.begin(), spec.n_lv_grid.end()),
                       spec.n_lv_grid.end());

  if (j.contains("inner_policy"))
    spec.inner_policy = parse_policy(j.at("inner_policy"), path + ".inner_policy");
  if (j.contains("outer_policy"))
    spec.outer_policy = parse_policy(j.at("outer_policy"), path + ".outer_policy");
  if (j.contains("metric")) spec.metric = parse_metric(j.at("metric"), path + ".metric");
  else if (spec.model == ModelKind::plsda) spec.metric.name = MetricName::nmc;
  if (j.contains("n_repetitions"))
    spec.n_repetitions = get_count(j.at("n_repetitions"), path + ".n_repetitions");
  if (spec.n_repetitions < 1) fail(path + ".n_repetitions", "must be >= 1");
  spec.seed = j.contains("seed") ? get_count(j.at("seed"), path + ".seed") : run_seed;
  return spec;
}

json pipeline_to_json_impl(const PipelineSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["model"] = to_string(spec.model);
  j["x_preproc"] = preproc_to_json(spec.x_preproc);
  j["y_preproc"] = preproc_to_json(spec.y_preproc);
  json sel = json::array();
  for (const auto& s : spec.selection_grid) sel.push_back(selection_to_json(s));
  j["selection"] = sel;
  j["n_lv_grid"] = spec.n_lv_grid;
  j["inner_policy"] = policy_to_json(spec.inner_policy);
  j["outer_policy"] = policy_to_json(spec.outer_policy);
  j["metric"] = metric_to_json(spec.metric);
  j["n_repetitions"] = spec.n_repetitions;
  j["seed"] = spec.seed;
  return j;
}

ScenarioSpec parse_scenario(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a scenario object");
  reject_unknown(j, {"name", "seed", "params"}, path);
  ScenarioSpec spec =
      ScenarioSpec::defaults_for(get_string(need(j, "name", path), path + ".name"));
  if (j.contains("seed")) spec.seed = get_count(j.at("seed"), path + ".seed");
  if (j.contains("params")) {
    const json& p = j.at("params");
    reject_unknown(p, {"n", "minority_fraction", "discriminability", "n_informative", "noise_sd"},
                   path + ".params");
    if (p.contains("n")) spec.n = get_count(p.at("n"), path + ".params.n");
    if (p.contains("minority_fraction"))
      spec.minority_fraction = get_number(p.at("minority_fraction"), path + ".params.minority_fraction");
    if (p.contains("discriminability"))
      spec.discriminability = get_number(p.at("discriminability"), path + ".params.discriminability");
    if (p.contains("n_informative"))
      spec.n_informative = get_count(p.at("n_informative"), path + ".params.n_informative");
    if (p.contains("noise_sd")) spec.noise_sd = get_number(p.at("noise_sd"), path + ".params.noise_sd");
  }
  return spec;
}

json scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["seed"] = spec.seed;
  json p;
  if (spec.name == "fig1_roc" || spec.name == "fig23_nmc_wmc") {
    p["n"] = spec.n;
    p["minority_fraction"] = spec.minority_fraction;
    p["discriminability"] = spec.discriminability;
  } else if (spec.name == "fig6_informative") {
    p["n_informative"] = spec.n_informative;
    p["noise_sd"] = spec.noise_sd;
  }
  j["params"] = p;
  return j;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("$", "top level must be an object");
  reject_unknown(j,
                 {"schema_version", "data", "scenario", "pipelines", "seed", "permutation",
                  "outputs", "demonstrate_leakage", "independence_disclosure"},
                 "$");

  RunConfig cfg;
  if (j.contains("schema_version")) {
    cfg.schema_version = static_cast<int>(get_count(j.at("schema_version"), "$.schema_version"));
    if (cfg.schema_version != 1) fail("$.schema_version", "this build understands version 1");
  }
  if (j.contains("seed")) cfg.seed = get_count(j.at("seed"), "$.seed");

  if (j.contains("data") && j.contains("scenario"))
    fail("$", "'data' and 'scenario' are mutually exclusive; give exactly one");
  if (!j.contains("data") && !j.contains("scenario"))
    fail("$", "one of 'data' or 'scenario' is required");
  if (j.contains("data")) {
    const json& d = j.at("data");
    reject_unknown(d, {"path", "y_cols", "group_col", "time_col"}, "$.data");
    DataConfig dc;
    dc.path = get_string(need(d, "path", "$.data"), "$.data.path");
    if (d.contains("y_cols")) dc.y_cols = get_string(d.at("y_cols"), "$.data.y_cols");
    if (d.contains("group_col")) dc.group_col = get_string(d.at("group_col"), "$.data.group_col");
    if (d.contains("time_col")) dc.time_col = get_string(d.at("time_col"), "$.data.time_col");
    cfg.data = std::move(dc);
  } else {
    cfg.scenario = parse_scenario(j.at("scenario"), "$.scenario");
  }

  if (!j.contains("pipelines") || !j.at("pipelines").is_array() || j.at("pipelines").empty())
    fail("$.pipelines", "at least one pipeline is required");
  std::size_t i = 0;
  for (const auto& p : j.at("pipelines"))
    cfg.pipelines.push_back(parse_pipeline(p, cfg.seed, "$.pipelines[" + std::to_string(i++) + "]"));

  // Unique names (auto-number the default).
  std::set<std::string> names;
  i = 0;
  for (auto& p : cfg.pipelines) {
    if (p.name == "pipeline") p.name = "pipeline_" + std::to_string(i);
    if (!names.insert(p.name).second)
      fail("$.pipelines[" + std::to_string(i) + "].name", "duplicate pipeline name '" + p.name + "'");
    ++i;
  }

  if (j.contains("permutation")) {
    const json& p = j.at("permutation");
    reject_unknown(p, {"enabled", "n_perm", "block"}, "$.permutation");
    if (p.contains("enabled")) cfg.permutation.enabled = get_bool(p.at("enabled"), "$.permutation.enabled");
    if (p.contains("n_perm")) cfg.permutation.n_perm = get_count(p.at("n_perm"), "$.permutation.n_perm");
    if (cfg.permutation.enabled && cfg.permutation.n_perm < 1)
      fail("$.permutation.n_perm", "must be >= 1");
    if (p.contains("block"))
      cfg.permutation.block = permute_block_from_string(get_string(p.at("block"), "$.permutation.block"));
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    reject_unknown(o, {"report_path", "curves_dir"}, "$.outputs");
    if (o.contains("report_path"))
      cfg.outputs.report_path = get_string(o.at("report_path"), "$.outputs.report_path");
    if (o.contains("curves_dir"))
      cfg.outputs.curves_dir = get_string(o.at("curves_dir"), "$.outputs.curves_dir");
  }
  if (j.contains("demonstrate_leakage"))
    cfg.demonstrate_leakage = get_bool(j.at("demonstrate_leakage"), "$.demonstrate_leakage");
  if (j.contains("independence_disclosure"))
    cfg.independence_disclosure =
        get_string(j.at("independence_disclosure"), "$.independence_disclosure");
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["seed"] = cfg.seed;
  if (cfg.data) {
    json d;
    d["path"] = cfg.data->path;
    d["y_cols"] = cfg.data->y_cols;
    if (cfg.data->group_col) d["group_col"] = *cfg.data->group_col;
    if (cfg.data->time_col) d["time_col"] = *cfg.data->time_col;
    j["data"] = d;
  } else if (cfg.scenario) {
    j["scenario"] = scenario_to_json(*cfg.scenario);
  }
  json pipes = json::array();
  for (const auto& p : cfg.pipelines) pipes.push_back(pipeline_to_json_impl(p));
  j["pipelines"] = pipes;
  json perm;
  perm["enabled"] = cfg.permutation.enabled;
  perm["n_perm"] = cfg.permutation.n_perm;
  perm["block"] = to_string(cfg.permutation.block);
  j["permutation"] = perm;
  json out;
  out["report_path"] = cfg.outputs.report_path;
  out["curves_dir"] = cfg.outputs.curves_dir;
  j["outputs"] = out;
  j["demonstrate_leakage"] = cfg.demonstrate_leakage;
  if (cfg.independence_disclosure) j["independence_disclosure"] = *cfg.independence_disclosure;
  return j.dump(2) + "\n";
}

std::string pipeline_spec_to_json(const PipelineSpec& spec) {
  return pipeline_to_json_impl(spec).dump(2);
}

}  // namespace valguard
