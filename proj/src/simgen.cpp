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
#include "valguard/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "valguard/errors.hpp"

namespace valguard {

ClassifierSample gen_classifier_scores(std::size_t n, double minority_fraction,
                                       double discriminability, RngStream rng) {
  if (n == 0) throw DataError("gen_classifier_scores: n must be positive");
  if (!(minority_fraction > 0.0 && minority_fraction < 0.5))
    throw ConfigError("gen_classifier_scores: minority_fraction must be in (0, 0.5)");
  if (static_cast<double>(n) * minority_fraction < 1.0)
    throw ConfigError("gen_classifier_scores: expected minority count below one row");
  if (discriminability < 0.0)
    throw ConfigError("gen_classifier_scores: discriminability must be non-negative");

  // Guard against a degenerate single-class draw (possible at small n) by
  // redrawing; the acceptance bands all use n = 1000 where this never fires.
  const double sd = discriminability > 0.0 ? 1.0 / discriminability : 1e6;
  for (int attempt = 0; attempt < 64; ++attempt) {
    ClassifierSample out;
    out.labels.resize(n);
    out.scores.resize(n);
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double label = rng.next_double() < minority_fraction ? 1.0 : 0.0;
      out.labels[i] = label;
      out.scores[i] = label + sd * rng.next_normal();
      n_pos += label == 1.0;
    }
    if (n_pos > 0 && n_pos < n) return out;
  }
  throw DegenerateError("gen_classifier_scores: could not draw both classes");
}

Dataset gen_null_dataset(std::size_t n, std::size_t p, RngStream rng) {
  auto x_rng = rng.derive({0});
  auto y_rng = rng.derive({1});
  Dataset ds;
  ds.X = standard_normal_matrix(x_rng, n, p);
  ds.Y = standard_normal_matrix(y_rng, n, 1);
  return ds;
}

Dataset gen_fig4(RngStream rng) { return gen_null_dataset(20, 10, rng); }

Dataset gen_fig5(RngStream rng) { return gen_null_dataset(20, 1000, rng); }

InformativeSample gen_informative(std::size_t n, std::size_t p, std::size_t y_cols,
                                  std::size_t n_informative, double noise_sd, RngStream rng) {
  if (n_informative > p) throw ConfigError("gen_informative: n_informative exceeds p");
  if (n == 0 || p == 0 || y_cols == 0) throw ConfigError("gen_informative: zero dimension");
  if (noise_sd < 0.0) throw ConfigError("gen_informative: negative noise_sd");

  auto pos_rng = rng.derive({0});
  auto x_rng = rng.derive({1});
  auto b_rng = rng.derive({2});
  auto e_rng = rng.derive({3});
  auto factor_rng = rng.derive({4});
  auto mix_rng = rng.derive({5});

  InformativeSample out;
  out.informative = pos_rng.permutation(p);
  out.informative.resize(n_informative);
  std::sort(out.informative.begin(), out.informative.end());
  std::vector<bool> is_informative(p, false);
  for (std::size_t j : out.informative) is_informative[j] = true;

  // Columns share latent factors, as multivariate instrument data does:
  // the informative block loads on its own factors (one per response) and
  // the remaining columns on a separate factor group, plus idiosyncratic
  // noise. Marginals stay standard normal.
  const std::size_t r_inf = y_cols;
  const std::size_t r_nuis = kNuisanceFactors;
  const Matrix f_inf = standard_normal_matrix(factor_rng, n, r_inf);
  const Matrix f_nuis = standard_normal_matrix(factor_rng, n, r_nuis);

  out.data.X = standard_normal_matrix(x_rng, n, p);
  for (std::size_t j = 0; j < p; ++j) {
    const Matrix& factors = is_informative[j] ? f_inf : f_nuis;
    const double idio =
        is_informative[j] ? kInformativeIdiosyncratic : kNuisanceIdiosyncratic;
    const double common = std::sqrt(1.0 - idio * idio);
    std::vector<double> mix(factors.cols());
    double norm = 0.0;
    for (double& m : mix) {
      m = mix_rng.next_normal();
      norm += m * m;
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) {
      double shared = 0.0;
      for (std::size_t c = 0; c < factors.cols(); ++c) shared += factors(i, c) * mix[c] / norm;
      out.data.X(i, j) = common * shared + idio * out.data.X(i, j);
    }
  }

  const Matrix coef = standard_normal_matrix(b_rng, n_informative, y_cols);
  Matrix y(n, y_cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < y_cols; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n_informative; ++k)
        s += out.data.X(i, out.informative[k]) * coef(k, c);
      y(i, c) = s + noise_sd * e_rng.next_normal();
    }
  out.data.Y = std::move(y);
  return out;
}

Dataset make_null_example(const Dataset& ds, NullMode mode, RngStream rng) {
  Dataset out = ds;
  switch (mode) {
    case NullMode::permute_y: {
      if (!ds.Y) throw DataError("make_null_example: permute_y needs a Y block");
      const auto perm = rng.permutation(ds.rows());
      out.Y = gather_rows(*ds.Y, perm);
      break;
    }
    case NullMode::synth_gaussian: {
      const auto means = column_means(ds.X);
      const auto sds = ds.X.rows() >= 2 ? column_sds(ds.X)
                                        : std::vector<double>(ds.X.cols(), 0.0);
      Matrix x(ds.X.rows(), ds.X.cols());
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
          x(i, j) = means[j] + sds[j] * rng.next_normal();
      out.X = std::move(x);
      break;
    }
  }
  return out;
}

ScenarioSpec ScenarioSpec::defaults_for(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  if (name == "fig1_roc") {
    s.n = 1000;
    s.minority_fraction = 0.30;
  } else if (name == "fig23_nmc_wmc") {
    s.n = 1000;
    s.minority_fraction = 0.01;
  } else if (name == "fig4_pls_null" || name == "fig5_highdim_null" ||
             name == "fig6_informative") {
    // dimensions are fixed by the scenario itself
  } else {
    throw ConfigError("unknown scenario: '" + name + "'");
  }
  return s;
}

Dataset generate_scenario(const ScenarioSpec& spec) {
  RngStream rng(spec.seed);
  if (spec.name == "fig1_roc" || spec.name == "fig23_nmc_wmc") {
    const auto sample =
        gen_classifier_scores(spec.n, spec.minority_fraction, spec.discriminability, rng);
    Dataset ds;
    ds.X = Matrix(sample.scores.size(), 1);
    ds.Y = Matrix(sample.labels.size(), 1);
    for (std::size_t i = 0; i < sample.scores.size(); ++i) {
      ds.X(i, 0) = sample.scores[i];
      (*ds.Y)(i, 0) = sample.labels[i];
    }
    ds.variable_names = std::vector<std::string>{"score"};
    ds.y_names = std::vector<std::string>{"label"};
    return ds;
  }
  if (spec.name == "fig4_pls_null") return gen_fig4(rng);
  if (spec.name == "fig5_highdim_null") return gen_fig5(rng);
  if (spec.name == "fig6_informative")
    return gen_informative(20, 100, 2, spec.n_informative, spec.noise_sd, rng).data;
  throw ConfigError("unknown scenario: '" + spec.name + "'");
}

std::string to_string(NullMode mode) {
  return mode == NullMode::permute_y ? "permute_y" : "synth_gaussian";
}

NullMode null_mode_from_string(const std::string& s) {
  if (s == "permute_y") return NullMode::permute_y;
  if (s == "synth_gaussian") return NullMode::synth_gaussian;
  throw ConfigError("unknown null mode: '" + s + "'");
}

}  // namespace valguard
