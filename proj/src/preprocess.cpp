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
#include "valguard/preprocess.hpp"

#include <cmath>

#include "valguard/errors.hpp"

namespace valguard {

namespace {

void check_cuts(const std::vector<std::size_t>& cuts, std::size_t p) {
  std::size_t prev = 0;
  for (std::size_t c : cuts) {
    if (c <= prev || c >= p)
      throw ConfigError("interval_center: cut points must be strictly increasing within (0, p)");
    prev = c;
  }
}

}  // namespace

FittedPreproc fit_preproc(const PreprocSpec& spec, const Matrix& x_build) {
  if (x_build.rows() == 0 || x_build.cols() == 0)
    throw DataError("fit_preproc: empty build matrix");
  FittedPreproc fp;
  fp.kind = spec.kind;
  fp.n_vars = x_build.cols();
  switch (spec.kind) {
    case PreprocKind::none:
    case PreprocKind::row_normalize:
      break;
    case PreprocKind::interval_center:
      check_cuts(spec.interval_cuts, x_build.cols());
      fp.interval_cuts = spec.interval_cuts;
      break;
    case PreprocKind::mean_center:
      fp.means = column_means(x_build);
      fp.scales.assign(x_build.cols(), 1.0);
      break;
    case PreprocKind::autoscale: {
      fp.means = column_means(x_build);
      fp.scales = column_sds(x_build);
      for (std::size_t j = 0; j < fp.scales.size(); ++j)
        if (fp.scales[j] == 0.0)
          throw DegenerateError("autoscale: zero-variance column " + std::to_string(j));
      break;
    }
  }
  return fp;
}

Matrix apply_preproc(const FittedPreproc& fp, const Matrix& x_any) {
  if (x_any.cols() != fp.n_vars && fp.kind != PreprocKind::none)
    throw DataError("apply_preproc: column count mismatch (model " + std::to_string(fp.n_vars) +
                    ", input " + std::to_string(x_any.cols()) + ")");
  Matrix out = x_any;
  switch (fp.kind) {
    case PreprocKind::none:
      break;
    case PreprocKind::mean_center:
    case PreprocKind::autoscale:
      for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        for (std::size_t j = 0; j < out.cols(); ++j) r[j] = (r[j] - fp.means[j]) / fp.scales[j];
      }
      break;
    case PreprocKind::row_normalize:
      for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        double norm = 0.0;
        for (double v : r) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw DegenerateError("row_normalize: zero-norm row");
        for (double& v : r) v /= norm;
      }
      break;
    case PreprocKind::interval_center: {
      std::vector<std::size_t> starts{0};
      for (std::size_t c : fp.interval_cuts) starts.push_back(c);
      starts.push_back(fp.n_vars);
      for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
          double mean = 0.0;
          for (std::size_t j = starts[k]; j < starts[k + 1]; ++j) mean += r[j];
          mean /= static_cast<double>(starts[k + 1] - starts[k]);
          for (std::size_t j = starts[k]; j < starts[k + 1]; ++j) r[j] -= mean;
        }
      }
      break;
    }
  }
  return out;
}

Matrix invert_preproc(const FittedPreproc& fp, const Matrix& x_pre) {
  if (fp.is_row_internal())
    throw ConfigError("invert_preproc: row-internal preprocessing is not invertible");
  if (fp.kind == PreprocKind::none) return x_pre;
  if (x_pre.cols() != fp.n_vars) throw DataError("invert_preproc: column count mismatch");
  Matrix out = x_pre;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < out.cols(); ++j) r[j] = r[j] * fp.scales[j] + fp.means[j];
  }
  return out;
}

FittedPreproc subset_preproc(const FittedPreproc& fp, std::span<const std::size_t> idx) {
  if (fp.is_row_internal())
    throw ConfigError("subset_preproc: row-internal preprocessing cannot be restricted");
  FittedPreproc out;
  out.kind = fp.kind;
  out.n_vars = idx.size();
  if (fp.kind != PreprocKind::none) {
    for (std::size_t j : idx) {
      out.means.push_back(fp.means[j]);
      out.scales.push_back(fp.scales[j]);
    }
  }
  return out;
}

std::string to_string(PreprocKind kind) {
  switch (kind) {
    case PreprocKind::none: return "none";
    case PreprocKind::mean_center: return "mean_center";
    case PreprocKind::autoscale: return "autoscale";
    case PreprocKind::row_normalize: return "row_normalize";
    case PreprocKind::interval_center: return "interval_center";
  }
  return "none";
}

PreprocKind preproc_kind_from_string(const std::string& s) {
  if (s == "none") return PreprocKind::none;
  if (s == "mean_center") return PreprocKind::mean_center;
  if (s == "autoscale") return PreprocKind::autoscale;
  if (s == "row_normalize") return PreprocKind::row_normalize;
  if (s == "interval_center") return PreprocKind::interval_center;
  throw ConfigError("unknown preprocessing kind: '" + s + "'");
}

}  // namespace valguard
