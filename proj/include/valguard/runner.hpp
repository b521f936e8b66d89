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
#ifndef VALGUARD_RUNNER_HPP
#define VALGUARD_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "valguard/config.hpp"

namespace valguard {

struct RunOverrides {
  std::optional<std::uint64_t> seed;  // replaces the run seed and all pipeline seeds
  std::size_t threads = 1;
  /// The CLI flag half of the leakage double gate: the demonstration runs
  /// only when this AND the config field are both set.
  bool demonstrate_leakage_flag = false;
};

/// Executes a configured experiment: double CV per pipeline, optional
/// permutation null, pairwise comparisons. Writes the report document,
/// the timing sidecar (timings.json, the one non-deterministic output) and
/// curve CSVs under out_dir. Returns the report document text.
std::string run_experiment(const RunConfig& cfg, const std::string& out_dir,
                           const RunOverrides& overrides);

/// Regenerates the data behind one of the six simulated experiments and
/// emits the plot CSVs plus a summary.json with the headline numbers.
/// Outputs are byte-identical under a fixed seed except timings.json.
std::string reproduce_figure(int figure_id, std::uint64_t seed, const std::string& out_dir,
                             std::size_t threads = 1);

// Pipeline definitions behind the figure reproductions, shared with the
// acceptance suite so both run the exact same settings.
PipelineSpec fig4_pipeline(std::uint64_t seed);
PipelineSpec fig5_pipeline(std::uint64_t seed);
std::vector<PipelineSpec> fig6_pipelines(std::uint64_t seed, std::size_t n_repetitions = 10);

}  // namespace valguard

#endif
