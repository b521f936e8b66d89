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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "valguard.h"

namespace {

namespace fs = std::filesystem;

std::string temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::create_directories(dir);
  return dir.string();
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("version string is available") {
  CHECK(vg_version() != nullptr);
  CHECK(std::strlen(vg_version()) > 0);
}

TEST_CASE("dataset handles: load, dims, write, free") {
  const auto path = write_temp("capi_data.csv", "x1,x2,y\n1,2,3\n4,5,6\n7,8,9\n");
  vg_dataset* ds = nullptr;
  char* error = nullptr;
  REQUIRE(vg_dataset_load_csv(path.c_str(), "y", nullptr, nullptr, &ds, &error) == VG_OK);
  REQUIRE(ds != nullptr);
  size_t rows = 0, x_cols = 0, y_cols = 0;
  CHECK(vg_dataset_dims(ds, &rows, &x_cols, &y_cols) == VG_OK);
  CHECK(rows == 3);
  CHECK(x_cols == 2);
  CHECK(y_cols == 1);

  const auto out_path = (fs::temp_directory_path() / "capi_out.csv").string();
  CHECK(vg_dataset_write_csv(ds, out_path.c_str(), &error) == VG_OK);
  CHECK(fs::exists(out_path));
  vg_dataset_free(ds);
}

TEST_CASE("missing files map to the data error code with a message") {
  vg_dataset* ds = nullptr;
  char* error = nullptr;
  CHECK(vg_dataset_load_csv("/no/such/file.csv", nullptr, nullptr, nullptr, &ds, &error) ==
        VG_ERROR_DATA);
  REQUIRE(error != nullptr);
  CHECK(std::strstr(error, "file") != nullptr);
  vg_string_free(error);
  CHECK(ds == nullptr);
}

TEST_CASE("scenario datasets come from JSON specs") {
  vg_dataset* ds = nullptr;
  char* error = nullptr;
  REQUIRE(vg_dataset_from_scenario(R"({"name": "fig4_pls_null", "seed": 7})", &ds, &error) ==
          VG_OK);
  size_t rows = 0, x_cols = 0, y_cols = 0;
  vg_dataset_dims(ds, &rows, &x_cols, &y_cols);
  CHECK(rows == 20);
  CHECK(x_cols == 10);
  vg_dataset_free(ds);

  CHECK(vg_dataset_from_scenario(R"({"name": "bogus"})", &ds, &error) == VG_ERROR_CONFIG);
  vg_string_free(error);
}

TEST_CASE("config validation returns the normalized document or a config error") {
  char* normalized = nullptr;
  char* error = nullptr;
  const char* config = R"({"scenario": {"name": "fig4_pls_null"}, "pipelines": [{}]})";
  REQUIRE(vg_validate_config(config, &normalized, &error) == VG_OK);
  REQUIRE(normalized != nullptr);
  CHECK(std::strstr(normalized, "schema_version") != nullptr);
  vg_string_free(normalized);

  CHECK(vg_validate_config("{", nullptr, &error) == VG_ERROR_CONFIG);
  REQUIRE(error != nullptr);
  vg_string_free(error);
  error = nullptr;
  CHECK(vg_validate_config(R"({"pipelines": []})", nullptr, &error) == VG_ERROR_CONFIG);
  vg_string_free(error);
}

TEST_CASE("a full run through the C API writes the report artifacts") {
  const std::string out = temp_dir("capi_run");
  const char* config = R"({
    "scenario": {"name": "fig4_pls_null", "seed": 5},
    "pipelines": [{"name": "dense", "n_lv_grid": [0, 1, 2], "metric": "press",
                   "n_repetitions": 2}],
    "seed": 11,
    "permutation": {"enabled": true, "n_perm": 5}
  })";
  char* report = nullptr;
  char* error = nullptr;
  const vg_status status = vg_run(config, out.c_str(), R"({"threads": 2})", &report, &error);
  if (error) {
    INFO(error);
    vg_string_free(error);
  }
  REQUIRE(status == VG_OK);
  REQUIRE(report != nullptr);
  CHECK(std::strstr(report, "per_repetition") != nullptr);
  CHECK(std::strstr(report, "null_distribution") != nullptr);
  vg_string_free(report);
  CHECK(fs::exists(fs::path(out) / "report.json"));
  CHECK(fs::exists(fs::path(out) / "timings.json"));
  CHECK(fs::exists(fs::path(out) / "curves" / "dense_cv_curves.csv"));
  CHECK(fs::exists(fs::path(out) / "curves" / "dense_null.csv"));
}

TEST_CASE("degenerate computations surface as their own code") {
  const std::string out = temp_dir("capi_degenerate");
  // Constant response: the q2 baseline PRESS is zero.
  const auto path = write_temp("capi_const.csv", "x,y\n1,5\n2,5\n3,5\n4,5\n");
  const std::string config = std::string(R"({
    "data": {"path": ")") + path + R"(", "y_cols": "y"},
    "pipelines": [{"metric": "q2", "n_lv_grid": [0, 1]}]
  })";
  char* error = nullptr;
  CHECK(vg_run(config.c_str(), out.c_str(), nullptr, nullptr, &error) == VG_ERROR_DEGENERATE);
  REQUIRE(error != nullptr);
  vg_string_free(error);
}

TEST_CASE("figure reproduction emits a summary") {
  const std::string out = temp_dir("capi_fig2");
  char* summary = nullptr;
  char* error = nullptr;
  REQUIRE(vg_reproduce_figure(2, 3, out.c_str(), 2, &summary, &error) == VG_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::strstr(summary, "median_nmc_minority1") != nullptr);
  vg_string_free(summary);
  CHECK(fs::exists(fs::path(out) / "nmc.csv"));
  CHECK(fs::exists(fs::path(out) / "summary.json"));

  CHECK(vg_reproduce_figure(9, 1, out.c_str(), 1, nullptr, &error) == VG_ERROR_CONFIG);
  vg_string_free(error);
}
