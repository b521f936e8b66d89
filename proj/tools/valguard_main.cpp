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

// Command-line front end. Links against the C API (valguard.h) only.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "valguard.h"

namespace {

constexpr int kExitConfig = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int report_failure(vg_status status, char* error) {
  if (error) {
    std::cerr << "error: " << error << "\n";
    vg_string_free(error);
  } else {
    std::cerr << "error: unknown failure\n";
  }
  return static_cast<int>(status);
}

std::size_t threads_or_env(std::size_t cli_value) {
  if (cli_value > 0) return cli_value;
  if (const char* env = std::getenv("VALGUARD_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return 1;
}

std::string make_overrides(const std::optional<std::uint64_t>& seed, std::size_t threads,
                           bool leakage_flag) {
  std::ostringstream ss;
  ss << "{";
  bool first = true;
  auto sep = [&] {
    if (!first) ss << ",";
    first = false;
  };
  if (seed) {
    sep();
    ss << "\"seed\":" << *seed;
  }
  sep();
  ss << "\"threads\":" << threads;
  if (leakage_flag) {
    sep();
    ss << "\"demonstrate_leakage\":true";
  }
  ss << "}";
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::string& out_dir, std::size_t threads, bool leakage_flag) {
  const auto config = read_file(config_path);
  if (!config) {
    std::cerr << "error: cannot read config file: " << config_path << "\n";
    return kExitConfig;
  }
  const std::string overrides = make_overrides(seed, threads_or_env(threads), leakage_flag);
  char* report = nullptr;
  char* error = nullptr;
  const vg_status status = vg_run(config->c_str(), out_dir.c_str(), overrides.c_str(),
                                  &report, &error);
  if (status != VG_OK) return report_failure(status, error);
  vg_string_free(report);
  std::cout << "report written under " << out_dir << "\n";
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const auto config = read_file(config_path);
  if (!config) {
    std::cerr << "error: cannot read config file: " << config_path << "\n";
    return kExitConfig;
  }
  char* normalized = nullptr;
  char* error = nullptr;
  const vg_status status = vg_validate_config(config->c_str(), &normalized, &error);
  if (status != VG_OK) return report_failure(status, error);
  std::cout << normalized;
  vg_string_free(normalized);
  return 0;
}

int cmd_simgen(const std::string& scenario, std::uint64_t seed, const std::string& out_path,
               const std::vector<std::string>& params) {
  std::ostringstream ss;
  ss << "{\"name\":\"" << scenario << "\",\"seed\":" << seed;
  if (!params.empty()) {
    ss << ",\"params\":{";
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto eq = params[i].find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << params[i] << "'\n";
        return kExitConfig;
      }
      ss << (i ? "," : "") << "\"" << params[i].substr(0, eq) << "\":" << params[i].substr(eq + 1);
    }
    ss << "}";
  }
  ss << "}";

  vg_dataset* ds = nullptr;
  char* error = nullptr;
  vg_status status = vg_dataset_from_scenario(ss.str().c_str(), &ds, &error);
  if (status != VG_OK) return report_failure(status, error);
  status = vg_dataset_write_csv(ds, out_path.c_str(), &error);
  if (status != VG_OK) {
    vg_dataset_free(ds);
    return report_failure(status, error);
  }
  size_t rows = 0, x_cols = 0, y_cols = 0;
  vg_dataset_dims(ds, &rows, &x_cols, &y_cols);
  vg_dataset_free(ds);
  std::cout << "wrote " << out_path << " (" << rows << " rows, " << x_cols << " x columns, "
            << y_cols << " y columns)\n";
  return 0;
}

int cmd_figure(int id, std::uint64_t seed, const std::string& out_dir, std::size_t threads) {
  char* summary = nullptr;
  char* error = nullptr;
  const vg_status status = vg_reproduce_figure(
      id, seed, out_dir.c_str(), static_cast<int>(threads_or_env(threads)), &summary, &error);
  if (status != VG_OK) return report_failure(status, error);
  std::cout << summary;
  vg_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("valguard ") + vg_version() +
               " - leakage-safe model validation engine"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", out_csv;
  std::optional<std::uint64_t> seed_opt;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool leakage_flag = false;
  std::string scenario;
  int figure_id = 0;
  std::vector<std::string> params;

  auto* run = app.add_subcommand("run", "execute a pipeline config");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--seed", seed_opt, "override the run seed");
  run->add_option("--out", out_dir, "output directory (default .)");
  run->add_option("--threads", threads, "worker threads (default VALGUARD_THREADS or 1)");
  run->add_flag("--demonstrate-leakage", leakage_flag,
                "unlock the watermarked leakage demonstration (config must also set it)");

  auto* validate = app.add_subcommand("validate-config", "parse and print the normalized config");
  validate->add_option("--config", config_path, "config JSON path")->required();

  auto* simgen = app.add_subcommand("simgen", "generate a simulation scenario CSV");
  simgen->add_option("--scenario", scenario,
                     "fig1_roc | fig23_nmc_wmc | fig4_pls_null | fig5_highdim_null | "
                     "fig6_informative")
      ->required();
  simgen->add_option("--seed", seed, "generator seed");
  simgen->add_option("--out", out_csv, "output CSV path")->required();
  simgen->add_option("--set", params, "scenario parameter, e.g. --set minority_fraction=0.01");

  auto* figure = app.add_subcommand("figure", "reproduce a simulated experiment (1-6)");
  figure->add_option("--id", figure_id, "figure id, 1..6")->required();
  figure->add_option("--seed", seed, "seed");
  figure->add_option("--out", out_dir, "output directory")->required();
  figure->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (run->parsed()) return cmd_run(config_path, seed_opt, out_dir, threads, leakage_flag);
  if (validate->parsed()) return cmd_validate(config_path);
  if (simgen->parsed()) return cmd_simgen(scenario, seed, out_csv, params);
  if (figure->parsed()) return cmd_figure(figure_id, seed, out_dir, threads);
  return kExitConfig;
}
