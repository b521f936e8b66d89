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
#ifndef VALGUARD_CONFIG_HPP
#define VALGUARD_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "valguard/engine.hpp"
#include "valguard/simgen.hpp"

namespace valguard {

struct DataConfig {
  std::string path;
  std::string y_cols;  // selector text, e.g. "y" or "3,4"
  std::optional<std::string> group_col;
  std::optional<std::string> time_col;
};

struct PermutationConfig {
  bool enabled = false;
  std::size_t n_perm = 19;
  PermuteBlock block = PermuteBlock::y;
};

struct OutputConfig {
  std::string report_path = "report.json";
  std::string curves_dir = "curves";
};

/// Declarative experiment: one input (file or generated scenario), one or
/// more pipelines, optional permutation test. The leakage demonstration
/// needs this flag AND the CLI flag; neither alone unlocks it.
struct RunConfig {
  int schema_version = 1;
  std::optional<DataConfig> data;
  std::optional<ScenarioSpec> scenario;
  std::vector<PipelineSpec> pipelines;
  std::uint64_t seed = 0;
  PermutationConfig permutation;
  OutputConfig outputs;
  bool demonstrate_leakage = false;
  /// Every report carries an independence disclosure; configs may replace
  /// the default single-block-split wording with study-specific text.
  std::optional<std::string> independence_disclosure;
};

/// Parses and validates a config JSON document. Throws ConfigError naming
/// the offending field. The result is normalized: defaults filled in,
/// aliases resolved (sparse_pls -> pls + sparse selection), n_lv grids
/// sorted with the mandatory 0 point inserted, pipeline seeds resolved.
RunConfig parse_run_config(const std::string& json_text);

/// Canonical JSON serialization of a normalized config; parse followed by
/// serialize is a fixpoint.
std::string run_config_to_json(const RunConfig& cfg);

/// Individual piece used by the report writer.
std::string pipeline_spec_to_json(const PipelineSpec& spec);

}  // namespace valguard

#endif
