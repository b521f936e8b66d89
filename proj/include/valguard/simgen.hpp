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
#ifndef VALGUARD_SIMGEN_HPP
#define VALGUARD_SIMGEN_HPP

#include <string>
#include <vector>

#include "valguard/dataset.hpp"
#include "valguard/rng.hpp"

namespace valguard {

/// Discriminability whose theoretical AUROC Phi(d'/sqrt(2)) is 0.85, the
/// center of the band the imbalanced-ROC experiment is calibrated against.
inline constexpr double kDefaultDiscriminability = 1.466;

/// Noise level at which the informative-block generator's dense-PLS
/// double-CV Q2 lands near 0.7 (chosen by a calibration sweep over
/// {0.5, 1, 2, 4}; see docs/calibration.md).
inline constexpr double kDefaultInformativeNoiseSd = 1.0;

/// Latent structure of the informative-block generator: per-column
/// idiosyncratic fractions (the rest of the variance is shared factors) and
/// the number of factors behind the non-informative columns. Marginals stay
/// standard normal either way.
inline constexpr double kInformativeIdiosyncratic = 0.3;
inline constexpr double kNuisanceIdiosyncratic = 0.3;
inline constexpr std::size_t kNuisanceFactors = 5;

/// Labels (0 = majority/negative, 1 = minority/positive) plus classifier
/// scores. Scores are the label estimated with Gaussian noise of standard
/// deviation 1/discriminability, i.e. negatives score around 0 and positives
/// around 1, so decision thresholds live on the label scale. AUROC is a
/// monotone-invariant, so its theoretical value stays Phi(d'/sqrt(2)).
struct ClassifierSample {
  std::vector<double> labels;
  std::vector<double> scores;
};

ClassifierSample gen_classifier_scores(std::size_t n, double minority_fraction,
                                       double discriminability, RngStream rng);

/// X (n x p) and y (n x 1) drawn as independent standard normal blocks:
/// a null example where no validation scheme should find signal.
Dataset gen_null_dataset(std::size_t n, std::size_t p, RngStream rng);

/// 20 x 10 null block (the low-dimensional CV-curve experiment).
Dataset gen_fig4(RngStream rng);

/// 20 x 1000 null block (the high-dimensional leakage experiment).
Dataset gen_fig5(RngStream rng);

/// X (n x p) where only `n_informative` randomly placed columns carry signal:
/// Y = X_inf * B + noise with B, X_inf standard normal. Returns the ground
/// truth column set for selection-quality oracles.
struct InformativeSample {
  Dataset data;
  std::vector<std::size_t> informative;  // ascending column indices
};

InformativeSample gen_informative(std::size_t n, std::size_t p, std::size_t y_cols,
                                  std::size_t n_informative, double noise_sd, RngStream rng);

enum class NullMode { permute_y, synth_gaussian };

/// Null twin of a real dataset: permute_y shuffles Y rows (marginals intact,
/// X-Y link destroyed); synth_gaussian replaces X by normals matched to the
/// per-column mean and sd.
Dataset make_null_example(const Dataset& ds, NullMode mode, RngStream rng);

/// Named scenario used by the CLI and the figure reproductions.
struct ScenarioSpec {
  std::string name;  // fig1_roc | fig23_nmc_wmc | fig4_pls_null | fig5_highdim_null | fig6_informative
  std::uint64_t seed = 0;
  // fig1_roc / fig23_nmc_wmc
  std::size_t n = 1000;
  double minority_fraction = 0.01;
  double discriminability = kDefaultDiscriminability;
  // fig6_informative
  std::size_t n_informative = 10;
  double noise_sd = kDefaultInformativeNoiseSd;

  static ScenarioSpec defaults_for(const std::string& name);
};

/// Generates the scenario as a Dataset (classifier scenarios become a
/// score column X and a label column Y).
Dataset generate_scenario(const ScenarioSpec& spec);

std::string to_string(NullMode mode);
NullMode null_mode_from_string(const std::string& s);

}  // namespace valguard

#endif
