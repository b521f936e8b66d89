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
#include "valguard.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "valguard/config.hpp"
#include "valguard/csv.hpp"
#include "valguard/errors.hpp"
#include "valguard/runner.hpp"

namespace {

using valguard::ConfigError;
using valguard::DataError;
using valguard::DegenerateError;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error, const std::string& message) {
  if (error) *error = dup_string(message);
}

/// Runs the body, translating the C++ error taxonomy into status codes.
template <typename Fn>
vg_status guarded(char** error, Fn&& fn) {
  try {
    fn();
    return VG_OK;
  } catch (const ConfigError& e) {
    set_error(error, e.what());
    return VG_ERROR_CONFIG;
  } catch (const DataError& e) {
    set_error(error, e.what());
    return VG_ERROR_DATA;
  } catch (const DegenerateError& e) {
    set_error(error, e.what());
    return VG_ERROR_DEGENERATE;
  } catch (const std::exception& e) {
    set_error(error, e.what());
    return VG_ERROR_INTERNAL;
  } catch (...) {
    set_error(error, "unknown error");
    return VG_ERROR_INTERNAL;
  }
}

valguard::RunOverrides parse_overrides(const char* overrides_json) {
  valguard::RunOverrides ov;
  if (!overrides_json || !*overrides_json) return ov;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(overrides_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("overrides are not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("overrides must be a JSON object");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ConfigError("overrides.seed must be an integer");
    ov.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_unsigned())
      throw ConfigError("overrides.threads must be a non-negative integer");
    ov.threads = j.at("threads").get<std::size_t>();
    if (ov.threads == 0) ov.threads = 1;
  }
  if (j.contains("demonstrate_leakage")) {
    if (!j.at("demonstrate_leakage").is_boolean())
      throw ConfigError("overrides.demonstrate_leakage must be a boolean");
    ov.demonstrate_leakage_flag = j.at("demonstrate_leakage").get<bool>();
  }
  return ov;
}

}  // namespace

struct vg_dataset {
  valguard::Dataset data;
};

extern "C" {

VG_API const char* vg_version(void) { return "1.0.0"; }

VG_API void vg_string_free(char* s) { std::free(s); }

VG_API vg_status vg_dataset_load_csv(const char* path, const char* y_cols,
                                     const char* group_col, const char* time_col,
                                     vg_dataset** out, char** error) {
  if (!path || !out) {
    set_error(error, "path and out must be non-NULL");
    return VG_ERROR_CONFIG;
  }
  *out = nullptr;
  return guarded(error, [&] {
    auto selector = valguard::ColumnSelector::parse(y_cols ? y_cols : "");
    std::optional<std::string> group, time;
    if (group_col && *group_col) group = group_col;
    if (time_col && *time_col) time = time_col;
    auto handle = new vg_dataset{valguard::load_dataset(path, selector, group, time)};
    *out = handle;
  });
}

VG_API vg_status vg_dataset_from_scenario(const char* scenario_json, vg_dataset** out,
                                          char** error) {
  if (!scenario_json || !out) {
    set_error(error, "scenario_json and out must be non-NULL");
    return VG_ERROR_CONFIG;
  }
  *out = nullptr;
  return guarded(error, [&] {
    // Reuse the config parser by wrapping the scenario in a minimal config.
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(scenario_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    nlohmann::json wrapper;
    wrapper["scenario"] = j;
    wrapper["pipelines"] = nlohmann::json::array({nlohmann::json::object()});
    const valguard::RunConfig cfg = valguard::parse_run_config(wrapper.dump());
    *out = new vg_dataset{valguard::generate_scenario(*cfg.scenario)};
  });
}

VG_API vg_status vg_dataset_dims(const vg_dataset* ds, size_t* rows, size_t* x_cols,
                                 size_t* y_cols) {
  if (!ds) return VG_ERROR_CONFIG;
  if (rows) *rows = ds->data.rows();
  if (x_cols) *x_cols = ds->data.X.cols();
  if (y_cols) *y_cols = ds->data.Y ? ds->data.Y->cols() : 0;
  return VG_OK;
}

VG_API vg_status vg_dataset_write_csv(const vg_dataset* ds, const char* path, char** error) {
  if (!ds || !path) {
    set_error(error, "dataset and path must be non-NULL");
    return VG_ERROR_CONFIG;
  }
  return guarded(error, [&] { valguard::write_dataset_csv(ds->data, path); });
}

VG_API void vg_dataset_free(vg_dataset* ds) { delete ds; }

VG_API vg_status vg_validate_config(const char* config_json, char** normalized_json,
                                    char** error) {
  if (!config_json) {
    set_error(error, "config_json must be non-NULL");
    return VG_ERROR_CONFIG;
  }
  return guarded(error, [&] {
    const valguard::RunConfig cfg = valguard::parse_run_config(config_json);
    if (normalized_json) *normalized_json = dup_string(valguard::run_config_to_json(cfg));
  });
}

VG_API vg_status vg_run(const char* config_json, const char* out_dir,
                        const char* overrides_json, char** report_json, char** error) {
  if (!config_json || !out_dir) {
    set_error(error, "config_json and out_dir must be non-NULL");
    return VG_ERROR_CONFIG;
  }
  return guarded(error, [&] {
    const valguard::RunConfig cfg = valguard::parse_run_config(config_json);
    const valguard::RunOverrides ov = parse_overrides(overrides_json);
    const std::string document = valguard::run_experiment(cfg, out_dir, ov);
    if (report_json) *report_json = dup_string(document);
  });
}

VG_API vg_status vg_reproduce_figure(int figure_id, uint64_t seed, const char* out_dir,
                                     int threads, char** summary_json, char** error) {
  if (!out_dir) {
    set_error(error, "out_dir must be non-NULL");
    return VG_ERROR_CONFIG;
  }
  return guarded(error, [&] {
    const std::size_t t = threads > 0 ? static_cast<std::size_t>(threads) : 1;
    const std::string summary = valguard::reproduce_figure(figure_id, seed, out_dir, t);
    if (summary_json) *summary_json = dup_string(summary);
  });
}

}  // extern "C"
