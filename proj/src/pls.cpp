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
#include "valguard/pls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "valguard/errors.hpp"

namespace valguard {

namespace {

constexpr double kConvergenceTol = 1e-12;
constexpr int kMaxIterations = 500;

void threshold_weights(std::vector<double>& w, std::size_t keep_k) {
  const std::size_t p = w.size();
  if (keep_k >= p) return;
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double fa = std::abs(w[a]), fb = std::abs(w[b]);
    return fa != fb ? fa > fb : a < b;
  });
  for (std::size_t r = keep_k; r < p; ++r) w[order[r]] = 0.0;
  double norm = 0.0;
  for (double v : w) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw DegenerateError("sparse pls: thresholding zeroed the weight vector");
  for (double& v : w) v /= norm;
}

// keep_k == SIZE_MAX means dense (no thresholding step at all, so the dense
// and keep_k >= p paths are bit-identical).
PlsModel fit_core(const Matrix& xc, const Matrix& yc, std::size_t n_lv, std::size_t keep_k) {
  const std::size_t n = xc.rows(), p = xc.cols(), m = yc.cols();
  if (n == 0 || p == 0) throw DataError("fit_pls: empty X");
  if (yc.rows() != n) throw DataError("fit_pls: X and Y row counts differ");
  if (m == 0) throw DataError("fit_pls: empty Y");
  if (n_lv > std::min(n > 0 ? n - 1 : 0, p))
    throw ConfigError("fit_pls: n_lv " + std::to_string(n_lv) + " exceeds min(rows-1, vars) = " +
                      std::to_string(std::min(n - 1, p)));
  if (frobenius_norm(xc) == 0.0 && n_lv > 0) throw DegenerateError("fit_pls: all-zero X");

  PlsModel model;
  model.n_lv = n_lv;
  model.W = Matrix(p, n_lv);
  model.P = Matrix(p, n_lv);
  model.Q = Matrix(m, n_lv);
  model.T = Matrix(n, n_lv);
  model.B = Matrix(p, m);
  if (n_lv == 0) return model;

  Matrix xd = xc, yd = yc;
  std::vector<double> u(n), w(p), t(n), t_prev(n), q(m), pl(p);

  for (std::size_t a = 0; a < n_lv; ++a) {
    // Start u from the Y column with the largest sum of squares.
    std::size_t u_col = 0;
    double best_ss = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += yd(i, j) * yd(i, j);
      if (ss > best_ss) {
        best_ss = ss;
        u_col = j;
      }
    }
    if (best_ss == 0.0) throw DegenerateError("fit_pls: response exhausted at component " +
                                              std::to_string(a));
    for (std::size_t i = 0; i < n; ++i) u[i] = yd(i, u_col);

    double tt = 0.0;
    bool have_prev = false;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      // w = X'u, normalized.
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double ui = u[i];
        auto xr = xd.row(i);
        for (std::size_t j = 0; j < p; ++j) w[j] += xr[j] * ui;
      }
      double wn = 0.0;
      for (double v : w) wn += v * v;
      wn = std::sqrt(wn);
      if (wn == 0.0)
        throw DegenerateError("fit_pls: rank exhausted at component " + std::to_string(a));
      for (double& v : w) v /= wn;
      if (keep_k != SIZE_MAX) threshold_weights(w, keep_k);

      // t = Xw.
      for (std::size_t i = 0; i < n; ++i) {
        auto xr = xd.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < p; ++j) s += xr[j] * w[j];
        t[i] = s;
      }
      tt = 0.0;
      for (double v : t) tt += v * v;
      if (tt == 0.0)
        throw DegenerateError("fit_pls: zero score vector at component " + std::to_string(a));

      // q = Y't / t't.
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += yd(i, j) * t[i];
        q[j] = s / tt;
      }
      if (m == 1) break;  // u is proportional to y throughout; one pass suffices

      if (have_prev) {
        double dn = 0.0, tn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = t[i] - t_prev[i];
          dn += d * d;
          tn += t[i] * t[i];
        }
        if (std::sqrt(dn) < kConvergenceTol * std::sqrt(tn)) break;
      }
      t_prev = t;
      have_prev = true;

      // u = Yq / q'q.
      double qq = 0.0;
      for (double v : q) qq += v * v;
      if (qq == 0.0)
        throw DegenerateError("fit_pls: response exhausted at component " + std::to_string(a));
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        auto yr = yd.row(i);
        for (std::size_t j = 0; j < m; ++j) s += yr[j] * q[j];
        u[i] = s / qq;
      }
    }

    // X loading and deflation of both blocks.
    std::fill(pl.begin(), pl.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = t[i];
      auto xr = xd.row(i);
      for (std::size_t j = 0; j < p; ++j) pl[j] += xr[j] * ti;
    }
    for (double& v : pl) v /= tt;
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = t[i];
      auto xr = xd.row(i);
      for (std::size_t j = 0; j < p; ++j) xr[j] -= ti * pl[j];
      auto yr = yd.row(i);
      for (std::size_t j = 0; j < m; ++j) yr[j] -= ti * q[j];
    }

    for (std::size_t j = 0; j < p; ++j) {
      model.W(j, a) = w[j];
      model.P(j, a) = pl[j];
    }
    for (std::size_t j = 0; j < m; ++j) model.Q(j, a) = q[j];
    for (std::size_t i = 0; i < n; ++i) model.T(i, a) = t[i];
  }

  // B = W (P'W)^-1 Q'.
  const Matrix ptw = multiply(transpose(model.P), model.W);
  const Matrix z = solve(ptw, transpose(model.Q));
  model.B = multiply(model.W, z);
  return model;
}

std::vector<double> sorted_distinct(std::span<const double> labels) {
  std::set<double> s(labels.begin(), labels.end());
  return {s.begin(), s.end()};
}

PlsModel fit_da(const Matrix& xc, std::span<const double> labels, std::size_t n_lv,
                std::size_t keep_k) {
  if (labels.size() != xc.rows()) throw DataError("fit_plsda: label count differs from rows");
  const auto classes = sorted_distinct(labels);
  if (classes.size() < 2) throw DegenerateError("fit_plsda: single-class input");

  // One-hot dummy block, centered; the column means are the class rates.
  Matrix dummy(xc.rows(), classes.size());
  for (std::size_t i = 0; i < xc.rows(); ++i) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), labels[i]);
    dummy(i, static_cast<std::size_t>(it - classes.begin())) = 1.0;
  }
  FittedPreproc y_pre;
  y_pre.kind = PreprocKind::mean_center;
  y_pre.n_vars = classes.size();
  y_pre.means = column_means(dummy);
  y_pre.scales.assign(classes.size(), 1.0);
  Matrix dummy_c = apply_preproc(y_pre, dummy);

  PlsModel model = fit_core(xc, dummy_c, n_lv, keep_k);
  model.y_pre = std::move(y_pre);
  model.is_classifier = true;
  model.class_values = classes;
  return model;
}

}  // namespace

PlsModel fit_pls(const Matrix& xc, const Matrix& yc, std::size_t n_lv) {
  return fit_core(xc, yc, n_lv, SIZE_MAX);
}

PlsModel fit_sparse_pls(const Matrix& xc, const Matrix& yc, std::size_t n_lv,
                        std::size_t keep_k) {
  if (keep_k < 1 || keep_k > xc.cols())
    throw ConfigError("fit_sparse_pls: keep_k " + std::to_string(keep_k) +
                      " out of range [1, " + std::to_string(xc.cols()) + "]");
  return fit_core(xc, yc, n_lv, keep_k >= xc.cols() ? SIZE_MAX : keep_k);
}

PlsModel fit_plsda(const Matrix& xc, std::span<const double> labels, std::size_t n_lv) {
  return fit_da(xc, labels, n_lv, SIZE_MAX);
}

PlsModel fit_sparse_plsda(const Matrix& xc, std::span<const double> labels, std::size_t n_lv,
                          std::size_t keep_k) {
  if (keep_k < 1 || keep_k > xc.cols())
    throw ConfigError("fit_sparse_plsda: keep_k out of range");
  return fit_da(xc, labels, n_lv, keep_k >= xc.cols() ? SIZE_MAX : keep_k);
}

Matrix predict(const PlsModel& m, const Matrix& x_raw) {
  const Matrix xc = apply_preproc(m.x_pre, x_raw);
  if (xc.cols() != m.B.rows())
    throw DataError("predict: input width " + std::to_string(xc.cols()) +
                    " differs from model width " + std::to_string(m.B.rows()));
  return invert_preproc(m.y_pre, multiply(xc, m.B));
}

std::vector<double> predict_labels(const PlsModel& m, const Matrix& x_raw) {
  if (!m.is_classifier) throw ConfigError("predict_labels: not a classifier model");
  const Matrix scores = predict(m, x_raw);
  std::vector<double> out(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.cols(); ++j)
      if (scores(i, j) > scores(i, best)) best = j;  // ties keep the lower index
    out[i] = m.class_values[best];
  }
  return out;
}

std::vector<double> vip_scores(const PlsModel& m) {
  const std::size_t p = m.W.rows(), a_count = m.n_lv;
  if (a_count == 0) throw DegenerateError("vip: model has no components");
  std::vector<double> ssy(a_count), wnorm2(a_count, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < a_count; ++a) {
    double qq = 0.0, tt = 0.0;
    for (std::size_t j = 0; j < m.Q.rows(); ++j) qq += m.Q(j, a) * m.Q(j, a);
    for (std::size_t i = 0; i < m.T.rows(); ++i) tt += m.T(i, a) * m.T(i, a);
    ssy[a] = qq * tt;
    total += ssy[a];
    for (std::size_t j = 0; j < p; ++j) wnorm2[a] += m.W(j, a) * m.W(j, a);
  }
  if (total == 0.0) throw DegenerateError("vip: zero explained response variance");
  std::vector<double> vip(p);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t a = 0; a < a_count; ++a)
      s += ssy[a] * (m.W(j, a) * m.W(j, a)) / wnorm2[a];
    vip[j] = std::sqrt(static_cast<double>(p) * s / total);
  }
  return vip;
}

std::vector<double> sr_scores(const PlsModel& m, const Matrix& xc) {
  const std::size_t n = xc.rows(), p = xc.cols();
  if (p != m.B.rows()) throw DataError("sr: X width differs from model");
  const std::size_t n_resp = m.B.cols();
  std::vector<double> acc(p, 0.0);
  std::vector<double> t(n), ptp(p);
  for (std::size_t c = 0; c < n_resp; ++c) {
    double bnorm = 0.0;
    for (std::size_t j = 0; j < p; ++j) bnorm += m.B(j, c) * m.B(j, c);
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) throw DegenerateError("sr: zero coefficient vector");
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      auto xr = xc.row(i);
      for (std::size_t j = 0; j < p; ++j) s += xr[j] * m.B(j, c);
      t[i] = s / bnorm;
    }
    double tt = 0.0;
    for (double v : t) tt += v * v;
    if (tt == 0.0) throw DegenerateError("sr: zero target-projection scores");
    std::fill(ptp.begin(), ptp.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = t[i];
      auto xr = xc.row(i);
      for (std::size_t j = 0; j < p; ++j) ptp[j] += xr[j] * ti;
    }
    for (double& v : ptp) v /= tt;
    for (std::size_t j = 0; j < p; ++j) {
      const double explained = ptp[j] * ptp[j] * tt;
      double resid = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = xc(i, j) - t[i] * ptp[j];
        resid += d * d;
      }
      // A residual at rounding level means the column lies on the target
      // projection: +inf sentinel, flagged downstream.
      acc[j] += resid <= explained * 1e-15
                    ? std::numeric_limits<double>::infinity()
                    : explained / resid;
    }
  }
  for (double& v : acc) v /= static_cast<double>(n_resp);
  return acc;
}

std::vector<std::size_t> apply_selection(const SelectionSpec& spec, const PlsModel& m,
                                         const Matrix& xc_build) {
  const std::size_t p = m.W.rows();
  std::vector<std::size_t> all(p);
  std::iota(all.begin(), all.end(), std::size_t{0});
  switch (spec.method) {
    case SelectionMethod::none:
      return all;
    case SelectionMethod::vip: {
      const auto v = vip_scores(m);
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < p; ++j)
        if (v[j] > spec.threshold) keep.push_back(j);
      return keep;
    }
    case SelectionMethod::sr: {
      const auto v = sr_scores(m, xc_build);
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < p; ++j)
        if (v[j] > spec.threshold) keep.push_back(j);
      return keep;
    }
    case SelectionMethod::sparse: {
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < p; ++j) {
        bool nonzero = false;
        for (std::size_t a = 0; a < m.n_lv && !nonzero; ++a) nonzero = m.W(j, a) != 0.0;
        if (nonzero) keep.push_back(j);
      }
      return keep;
    }
  }
  return all;
}

std::string to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::none: return "none";
    case SelectionMethod::vip: return "vip";
    case SelectionMethod::sr: return "sr";
    case SelectionMethod::sparse: return "sparse";
  }
  return "none";
}

SelectionMethod selection_method_from_string(const std::string& s) {
  if (s == "none") return SelectionMethod::none;
  if (s == "vip") return SelectionMethod::vip;
  if (s == "sr") return SelectionMethod::sr;
  if (s == "sparse") return SelectionMethod::sparse;
  throw ConfigError("unknown selection method: '" + s + "'");
}

}  // namespace valguard
