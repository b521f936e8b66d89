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
#ifndef VALGUARD_PLS_HPP
#define VALGUARD_PLS_HPP

#include <span>
#include <string>
#include <vector>

#include "valguard/matrix.hpp"
#include "valguard/preprocess.hpp"

namespace valguard {

/// NIPALS PLS model. With n_lv = 0 the model is the mean-only predictor:
/// B is zero and predictions fall back to the stored Y preprocessing means.
struct PlsModel {
  std::size_t n_lv = 0;
  Matrix W;  // weights, vars x A (unit columns)
  Matrix P;  // X loadings, vars x A
  Matrix Q;  // Y loadings, y_vars x A
  Matrix T;  // scores, build_rows x A (mutually orthogonal columns)
  Matrix B;  // regression coefficients, vars x y_vars

  // Attached by pipelines; PreprocKind::none when fitting preprocessed data
  // directly.
  FittedPreproc x_pre;
  FittedPreproc y_pre;

  bool is_classifier = false;
  std::vector<double> class_values;  // ascending; argmax ties pick the lower index
};

/// Fits NIPALS PLS on centered blocks. Per component: w ~ X'u (unit norm),
/// t = Xw, q = Y't/(t't), u = Yq/(q'q), iterated until the relative score
/// change drops below 1e-12 (single-column Y converges in one pass, max 500
/// iterations), then X and Y are deflated by t.
PlsModel fit_pls(const Matrix& xc, const Matrix& yc, std::size_t n_lv);

/// NIPALS with hard-thresholded weights: each time w is computed, only the
/// keep_k largest |w| entries are retained (ties to the lower index), the
/// rest zeroed, and w renormalized. keep_k >= vars reproduces fit_pls
/// bit for bit.
PlsModel fit_sparse_pls(const Matrix& xc, const Matrix& yc, std::size_t n_lv, std::size_t keep_k);

/// PLS-DA: labels are one-hot coded (centered) and fit as a PLS2 block.
PlsModel fit_plsda(const Matrix& xc, std::span<const double> labels, std::size_t n_lv);
PlsModel fit_sparse_plsda(const Matrix& xc, std::span<const double> labels, std::size_t n_lv,
                          std::size_t keep_k);

/// Applies the stored X preprocessing, computes Xc*B, and maps back through
/// the stored Y preprocessing. For classifiers the result is the dummy-block
/// estimate (usable as class scores).
Matrix predict(const PlsModel& m, const Matrix& x_raw);

/// Classifier prediction: argmax over predicted dummy columns, ties broken
/// to the lower class index.
std::vector<double> predict_labels(const PlsModel& m, const Matrix& x_raw);

/// VIP_j = sqrt(p * sum_a SSY_a (w_ja/|w_a|)^2 / sum_a SSY_a) with
/// SSY_a = (q_a'q_a)(t_a't_a). Mean of VIP^2 is exactly 1.
std::vector<double> vip_scores(const PlsModel& m);

/// Selectivity ratio via target projection: t = Xc b/|b|, p = Xc't/(t't),
/// SR_j = |t p_j|^2 / |x_j - t p_j|^2. A zero residual yields +infinity
/// (flagged downstream). Multi-response models average the per-column SR.
std::vector<double> sr_scores(const PlsModel& m, const Matrix& xc);

enum class SelectionMethod { none, vip, sr, sparse };

struct SelectionSpec {
  SelectionMethod method = SelectionMethod::none;
  double threshold = 1.0;   // vip / sr: keep score > threshold
  std::size_t keep_k = 0;   // sparse: nonzero weights per component
};

/// Variable subset chosen by the selection settings: score > threshold for
/// vip/sr, union of nonzero-weight rows for sparse, all indices for none.
/// An empty result signals the caller to fall back to all variables.
std::vector<std::size_t> apply_selection(const SelectionSpec& spec, const PlsModel& m,
                                         const Matrix& xc_build);

std::string to_string(SelectionMethod m);
SelectionMethod selection_method_from_string(const std::string& s);

}  // namespace valguard

#endif
