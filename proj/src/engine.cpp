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
#include "valguard/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "valguard/errors.hpp"

namespace valguard {

namespace {

// Substream tags: every (repetition, fold, permutation, ...) derives its own
// stream so scheduling order cannot change results.
constexpr std::uint64_t kTagOuterSplit = 1;
constexpr std::uint64_t kTagInnerSplit = 2;
constexpr std::uint64_t kTagPermutation = 3;
constexpr std::uint64_t kTagSingleCv = 4;

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::min(threads == 0 ? std::size_t{1} : threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

bool is_regression(const PipelineSpec& spec) { return spec.model == ModelKind::pls; }

void validate_spec(const Dataset& ds, const PipelineSpec& spec) {
  if (!ds.Y) throw DataError(spec.name + ": pipeline requires a Y block");
  if (spec.n_repetitions < 1) throw ConfigError(spec.name + ": n_repetitions must be >= 1");
  if (spec.n_lv_grid.empty() ||
      std::find(spec.n_lv_grid.begin(), spec.n_lv_grid.end(), 0u) == spec.n_lv_grid.end())
    throw ConfigError(spec.name + ": n_lv_grid must contain the 0-LV baseline point");
  if (spec.selection_grid.empty())
    throw ConfigError(spec.name + ": selection grid must not be empty");
  for (const auto& s : spec.selection_grid)
    if (s.method == SelectionMethod::sparse && s.keep_k < 1)
      throw ConfigError(spec.name + ": sparse selection needs keep_k >= 1");
  if (is_regression(spec)) {
    if (spec.metric.is_classification())
      throw ConfigError(spec.name + ": metric '" + to_string(spec.metric.name) +
                        "' does not apply to a regression model");
    if (spec.y_preproc.kind != PreprocKind::mean_center &&
        spec.y_preproc.kind != PreprocKind::autoscale)
      throw ConfigError(spec.name +
                        ": y_preproc must center the response (mean_center or autoscale) so the "
                        "0-LV model is the mean predictor");
  } else {
    if (!spec.metric.is_classification())
      throw ConfigError(spec.name + ": metric '" + to_string(spec.metric.name) +
                        "' does not apply to a classification model");
  }
}

std::vector<double> y_labels(const Matrix& y, std::span<const std::size_t> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t i : rows) out.push_back(y(i, 0));
  return out;
}

std::vector<double> all_labels(const Matrix& y) {
  std::vector<double> out(y.rows());
  for (std::size_t i = 0; i < y.rows(); ++i) out[i] = y(i, 0);
  return out;
}

double majority_label(std::span<const double> labels) {
  std::vector<double> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  double best = sorted.front(), cur = sorted.front();
  std::size_t best_n = 0, cur_n = 0;
  for (double v : sorted) {
    if (v == cur) {
      ++cur_n;
    } else {
      cur = v;
      cur_n = 1;
    }
    if (cur_n > best_n) {  // strict: ties keep the lower label
      best_n = cur_n;
      best = cur;
    }
  }
  return best;
}

std::size_t positive_column(const PlsModel& m, double positive) {
  for (std::size_t j = 0; j < m.class_values.size(); ++j)
    if (m.class_values[j] == positive) return j;
  throw DataError("positive class " + std::to_string(positive) +
                  " not among the model's classes");
}

std::vector<double> scores_to_labels(const PlsModel& m, const Matrix& scores) {
  std::vector<double> out(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.cols(); ++j)
      if (scores(i, j) > scores(i, best)) best = j;
    out[i] = m.class_values[best];
  }
  return out;
}

/// Pools per-fold predictions into one metric value. Regression metrics
/// accumulate squared/absolute errors (and the 0-LV baseline PRESS);
/// classification metrics pool labels and scores across folds.
class MetricAccumulator {
public:
  explicit MetricAccumulator(const MetricSpec& spec) : spec_(spec) {}

  void add_regression(const Matrix& y_true, const Matrix& y_pred,
                      std::span<const double> build_means) {
    if (y_true.rows() != y_pred.rows() || y_true.cols() != y_pred.cols())
      throw DataError("metric accumulation: shape mismatch");
    for (std::size_t i = 0; i < y_true.rows(); ++i) {
      auto t = y_true.row(i), e = y_pred.row(i);
      for (std::size_t j = 0; j < y_true.cols(); ++j) {
        const double d = t[j] - e[j];
        press_ += d * d;
        abs_ += std::abs(d);
        const double d0 = t[j] - build_means[j];
        press0_ += d0 * d0;
        ++cells_;
      }
    }
  }

  void add_classification(std::span<const double> y_true, std::span<const double> y_pred,
                          std::span<const double> scores) {
    truth_.insert(truth_.end(), y_true.begin(), y_true.end());
    pred_.insert(pred_.end(), y_pred.begin(), y_pred.end());
    if (!scores.empty()) scores_.insert(scores_.end(), scores.begin(), scores.end());
  }

  bool empty() const { return cells_ == 0 && truth_.empty(); }
  double baseline_press() const { return press0_; }
  bool degenerate_convention_used() const {
    if (!spec_.is_classification() || truth_.empty() || spec_.name == MetricName::auroc)
      return false;
    if (spec_.name == MetricName::nmc || spec_.name == MetricName::wmc) return false;
    return counts_metric_degenerate(spec_.name,
                                    classification_counts(truth_, pred_, spec_.positive_class));
  }

  double value() const {
    if (empty()) throw DegenerateError("metric: no predictions accumulated");
    switch (spec_.name) {
      case MetricName::press:
        return press_;
      case MetricName::mae:
        return abs_ / static_cast<double>(cells_);
      case MetricName::mse:
        return press_ / static_cast<double>(cells_);
      case MetricName::q2:
        if (press0_ == 0.0)
          throw DegenerateError("q2: constant response, baseline PRESS is zero");
        return 1.0 - press_ / press0_;
      case MetricName::nmc: {
        // Direct mismatch count; valid for any number of classes.
        std::size_t miss = 0;
        for (std::size_t i = 0; i < truth_.size(); ++i) miss += truth_[i] != pred_[i];
        return static_cast<double>(miss);
      }
      case MetricName::auroc: {
        std::vector<double> bin(truth_.size());
        for (std::size_t i = 0; i < truth_.size(); ++i)
          bin[i] = truth_[i] == spec_.positive_class ? 1.0 : 0.0;
        return roc_curve(scores_, bin, 1.0).auroc;
      }
      default:
        return classification_metric(
            spec_, classification_counts(truth_, pred_, spec_.positive_class));
    }
  }

  std::optional<double> try_value() const {
    try {
      return value();
    } catch (const DegenerateError&) {
      return std::nullopt;
    } catch (const DataError&) {
      return std::nullopt;
    }
  }

private:
  MetricSpec spec_;
  double press_ = 0.0, press0_ = 0.0, abs_ = 0.0;
  std::size_t cells_ = 0;
  std::vector<double> truth_, pred_, scores_;
};

bool better(const MetricSpec& spec, double candidate, double incumbent) {
  return spec.orientation() == Orientation::higher_better ? candidate > incumbent
                                                          : candidate < incumbent;
}

/// Model fitted on already-preprocessed blocks plus the column subset it
/// consumes. Shared by the inner loop and the outer refit so both run the
/// exact same construction.
struct CenteredFit {
  PlsModel model;
  std::vector<std::size_t> selected;
  bool fallback = false;
  std::size_t n_selected = 0;
};

std::size_t clamp_lv(std::size_t requested, std::size_t n_rows, std::size_t n_vars) {
  return std::min({requested, n_rows > 0 ? n_rows - 1 : 0, n_vars});
}

CenteredFit fit_on_centered(const Matrix& xc, const Matrix* yc, std::span<const double> labels,
                            ModelKind model, const GridPoint& gp) {
  const std::size_t p = xc.cols();
  CenteredFit out;
  out.selected.resize(p);
  std::iota(out.selected.begin(), out.selected.end(), std::size_t{0});

  const SelectionSpec& sel = gp.selection;
  const bool filter = (sel.method == SelectionMethod::vip || sel.method == SelectionMethod::sr);
  if (filter && gp.n_lv > 0) {
    const std::size_t sel_lv = clamp_lv(gp.n_lv, xc.rows(), p);
    if (sel_lv > 0) {
      const PlsModel sel_model =
          model == ModelKind::plsda ? fit_plsda(xc, labels, sel_lv) : fit_pls(xc, *yc, sel_lv);
      auto keep = apply_selection(sel, sel_model, xc);
      if (keep.empty())
        out.fallback = true;  // empty selection: fall back to all variables
      else
        out.selected = std::move(keep);
    }
  }

  const Matrix xs = out.selected.size() == p ? xc : select_cols(xc, out.selected);
  const std::size_t lv = clamp_lv(gp.n_lv, xs.rows(), xs.cols());
  if (sel.method == SelectionMethod::sparse && lv > 0) {
    const std::size_t k = std::min(sel.keep_k, xs.cols());
    out.model = model == ModelKind::plsda ? fit_sparse_plsda(xs, labels, lv, k)
                                          : fit_sparse_pls(xs, *yc, lv, k);
    std::size_t nz = 0;
    for (std::size_t j = 0; j < out.model.W.rows(); ++j) {
      for (std::size_t a = 0; a < out.model.n_lv; ++a)
        if (out.model.W(j, a) != 0.0) {
          ++nz;
          break;
        }
    }
    out.n_selected = nz;
  } else {
    out.model =
        model == ModelKind::plsda ? fit_plsda(xs, labels, lv) : fit_pls(xs, *yc, lv);
    out.n_selected = out.selected.size();
  }
  return out;
}

Matrix predict_centered(const CenteredFit& cf, const Matrix& xc_any) {
  if (cf.selected.size() == xc_any.cols()) return predict(cf.model, xc_any);
  return predict(cf.model, select_cols(xc_any, cf.selected));
}

/// Preprocessed view of one CV fold; preprocessing parameters come from the
/// training split only.
struct FoldBlocks {
  bool ok = false;
  FittedPreproc x_pre, y_pre;
  Matrix xc_tr, yc_tr, xc_va;
  Matrix y_va_raw;
  std::vector<double> labels_tr, labels_va;
  std::vector<double> build_means;
};

FoldBlocks prepare_fold(const Dataset& data, std::span<const std::size_t> tr,
                        std::span<const std::size_t> va, const PipelineSpec& spec) {
  FoldBlocks fb;
  if (tr.empty()) return fb;
  const Matrix x_tr = gather_rows(data.X, tr);
  fb.x_pre = fit_preproc(spec.x_preproc, x_tr);
  fb.xc_tr = apply_preproc(fb.x_pre, x_tr);
  fb.xc_va = apply_preproc(fb.x_pre, gather_rows(data.X, va));
  if (is_regression(spec)) {
    const Matrix y_tr = gather_rows(*data.Y, tr);
    fb.y_pre = fit_preproc(spec.y_preproc, y_tr);
    fb.yc_tr = apply_preproc(fb.y_pre, y_tr);
    fb.y_va_raw = gather_rows(*data.Y, va);
    fb.build_means = column_means(y_tr);
  } else {
    fb.labels_tr = y_labels(*data.Y, tr);
    fb.labels_va = y_labels(*data.Y, va);
  }
  fb.ok = true;
  return fb;
}

/// Fits the grid point on a fold's training blocks and adds the validation
/// predictions to the accumulator.
CenteredFit evaluate_fold(const FoldBlocks& fb, const PipelineSpec& spec, const GridPoint& gp,
                          MetricAccumulator& acc) {
  CenteredFit cf = fit_on_centered(fb.xc_tr, &fb.yc_tr, fb.labels_tr, spec.model, gp);
  if (is_regression(spec)) {
    const Matrix y_hat = invert_preproc(fb.y_pre, predict_centered(cf, fb.xc_va));
    acc.add_regression(fb.y_va_raw, y_hat, fb.build_means);
  } else {
    const Matrix scores = predict_centered(cf, fb.xc_va);
    const auto pred = scores_to_labels(cf.model, scores);
    std::vector<double> pos_scores;
    if (spec.metric.needs_scores()) {
      const std::size_t col = positive_column(cf.model, spec.metric.positive_class);
      pos_scores.resize(scores.rows());
      for (std::size_t i = 0; i < scores.rows(); ++i) pos_scores[i] = scores(i, col);
    }
    acc.add_classification(fb.labels_va, pred, pos_scores);
  }
  return cf;
}

struct GridEval {
  GridPoint gp;
  std::optional<double> metric;
  double mean_selected = 0.0;
  std::size_t fallbacks = 0;
  std::size_t failed_folds = 0;
};

std::vector<GridPoint> enumerate_grid(const PipelineSpec& spec) {
  std::vector<std::size_t> lvs = spec.n_lv_grid;
  std::sort(lvs.begin(), lvs.end());
  lvs.erase(std::unique(lvs.begin(), lvs.end()), lvs.end());
  std::vector<GridPoint> pts;
  for (std::size_t lv : lvs) {
    if (lv == 0) {
      pts.push_back({0, SelectionSpec{}});  // selection is moot without components
    } else {
      for (const auto& s : spec.selection_grid) pts.push_back({lv, s});
    }
  }
  return pts;
}

}  // namespace

std::vector<double> ValidationReport::per_rep_metrics() const {
  std::vector<double> v;
  v.reserve(per_repetition.size());
  for (const auto& r : per_repetition) v.push_back(r.pooled_metric);
  return v;
}

double ValidationReport::total_seconds() const {
  double s = 0.0;
  for (const auto& r : per_repetition) s += r.seconds;
  return s;
}

InnerSelection inner_cv_select(const Dataset& build, const PipelineSpec& spec, RngStream rng) {
  if (!build.Y) throw DataError("inner_cv_select: build data has no Y block");
  SplitPolicy pol = spec.inner_policy;
  pol.n_folds = resolve_n_folds(pol, build.rows(), true);
  const SplitPlan plan = make_split(pol, build, rng);

  InnerSelection result;
  std::vector<FoldBlocks> folds(plan.n_folds);
  for (std::size_t f = 0; f < plan.n_folds; ++f) {
    const auto tr = plan.complement_rows(f);
    const auto va = plan.fold_rows(f);
    try {
      folds[f] = prepare_fold(build, tr, va, spec);
    } catch (const DegenerateError&) {
      folds[f].ok = false;
    } catch (const DataError&) {  // e.g. autoscale on a one-row fold
      folds[f].ok = false;
    }
    if (!folds[f].ok) ++result.degenerate_folds;
  }

  const auto grid = enumerate_grid(spec);
  std::vector<GridEval> evals;
  evals.reserve(grid.size());
  for (const auto& gp : grid) {
    GridEval ev;
    ev.gp = gp;
    MetricAccumulator acc(spec.metric);
    std::size_t ok_folds = 0;
    double sel_sum = 0.0;
    for (const auto& fb : folds) {
      if (!fb.ok) continue;
      try {
        const CenteredFit cf = evaluate_fold(fb, spec, gp, acc);
        sel_sum += static_cast<double>(cf.n_selected);
        ev.fallbacks += cf.fallback;
        ++ok_folds;
      } catch (const DegenerateError&) {
        ++ev.failed_folds;
      }
    }
    if (ok_folds > 0) {
      ev.metric = acc.try_value();
      ev.mean_selected = sel_sum / static_cast<double>(ok_folds);
    }
    evals.push_back(std::move(ev));
  }

  const GridEval* best = nullptr;
  for (const auto& ev : evals) {
    if (!ev.metric) continue;
    if (!best) {
      best = &ev;
      continue;
    }
    if (better(spec.metric, *ev.metric, *best->metric)) {
      best = &ev;
    } else if (*ev.metric == *best->metric) {
      // Parsimony first: fewer LVs, then fewer selected variables.
      if (ev.gp.n_lv < best->gp.n_lv ||
          (ev.gp.n_lv == best->gp.n_lv && ev.mean_selected < best->mean_selected))
        best = &ev;
    }
  }
  if (!best) throw DegenerateError("inner_cv_select: no feasible grid point on this build data");

  result.chosen = best->gp;
  result.chosen_metric = *best->metric;
  result.chosen_n_selected = static_cast<std::size_t>(best->mean_selected + 0.5);
  result.fallbacks = best->fallbacks;
  result.degenerate_folds += best->failed_folds;

  // Curve: best metric per n_lv across selection settings.
  for (std::size_t lv : spec.n_lv_grid) {
    std::optional<double> lv_best;
    for (const auto& ev : evals) {
      if (ev.gp.n_lv != lv || !ev.metric) continue;
      if (!lv_best || better(spec.metric, *ev.metric, *lv_best)) lv_best = *ev.metric;
    }
    if (lv_best) result.curve.push_back({lv, *lv_best});
  }
  std::sort(result.curve.begin(), result.curve.end(),
            [](const CvCurvePoint& a, const CvCurvePoint& b) { return a.n_lv < b.n_lv; });
  result.curve.erase(std::unique(result.curve.begin(), result.curve.end(),
                                 [](const CvCurvePoint& a, const CvCurvePoint& b) {
                                   return a.n_lv == b.n_lv;
                                 }),
                     result.curve.end());
  return result;
}

namespace {

RepetitionResult run_repetition(const Dataset& ds, const PipelineSpec& spec, std::size_t rep,
                                const EngineHooks& hooks) {
  const auto t0 = std::chrono::steady_clock::now();
  SplitPolicy opol = spec.outer_policy;
  opol.n_folds = resolve_n_folds(opol, ds.rows(), false);
  const SplitPlan plan =
      make_split(opol, ds, RngStream(spec.seed).derive({kTagOuterSplit, rep}));

  RepetitionResult rr;
  MetricAccumulator acc(spec.metric);
  MetricAccumulator naive_acc(spec.metric);

  for (std::size_t f = 0; f < plan.n_folds; ++f) {
    const auto build_rows = plan.complement_rows(f);
    const auto test_rows = plan.fold_rows(f);
    if (hooks.on_gather)
      hooks.on_gather({GatherPhase::outer_build, rep, f, build_rows});
    const Dataset build = gather_dataset_rows(ds, build_rows);

    OuterFoldResult fr;
    fr.fold = f;
    FoldBlocks refit;
    CenteredFit cf;
    try {
      const InnerSelection inner =
          inner_cv_select(build, spec, RngStream(spec.seed).derive({kTagInnerSplit, rep, f}));
      fr.inner_curve = inner.curve;
      fr.chosen.n_lv = inner.chosen.n_lv;
      fr.chosen.selection = inner.chosen.selection;

      // Refit the chosen pipeline on the whole build portion, then (and only
      // then) touch the held-out rows.
      std::vector<std::size_t> all_build(build.rows());
      std::iota(all_build.begin(), all_build.end(), std::size_t{0});
      refit = prepare_fold(build, all_build, all_build, spec);
      if (!refit.ok) throw DegenerateError("outer refit: build portion too small");
      cf = fit_on_centered(refit.xc_tr, &refit.yc_tr, refit.labels_tr, spec.model,
                           inner.chosen);
      fr.chosen.n_selected = cf.n_selected;
      fr.chosen.fallback = cf.fallback;
    } catch (const DegenerateError&) {
      fr.metric = std::nullopt;
      fr.skipped = true;
      rr.folds.push_back(std::move(fr));
      continue;
    }

    if (hooks.on_gather) hooks.on_gather({GatherPhase::outer_test, rep, f, test_rows});
    const Dataset test = gather_dataset_rows(ds, test_rows);

    MetricAccumulator fold_acc(spec.metric);
    const Matrix xc_test = apply_preproc(refit.x_pre, test.X);
    if (is_regression(spec)) {
      const Matrix y_hat = invert_preproc(refit.y_pre, predict_centered(cf, xc_test));
      acc.add_regression(*test.Y, y_hat, refit.build_means);
      fold_acc.add_regression(*test.Y, y_hat, refit.build_means);
    } else {
      const Matrix scores = predict_centered(cf, xc_test);
      const auto pred = scores_to_labels(cf.model, scores);
      const auto truth = all_labels(*test.Y);
      std::vector<double> pos_scores;
      if (spec.metric.needs_scores()) {
        const std::size_t col = positive_column(cf.model, spec.metric.positive_class);
        pos_scores.resize(scores.rows());
        for (std::size_t i = 0; i < scores.rows(); ++i) pos_scores[i] = scores(i, col);
      }
      acc.add_classification(truth, pred, pos_scores);
      fold_acc.add_classification(truth, pred, pos_scores);
      // Naive baseline on the same folds.
      const double maj = majority_label(refit.labels_tr);
      const std::vector<double> naive_pred(truth.size(), maj);
      std::vector<double> naive_scores;
      if (spec.metric.needs_scores()) naive_scores.assign(truth.size(), 0.0);
      naive_acc.add_classification(truth, naive_pred, naive_scores);
    }
    fr.metric = fold_acc.try_value();
    rr.folds.push_back(std::move(fr));
  }

  rr.pooled_metric = acc.value();  // throws DegenerateError when every fold failed
  rr.metric_convention_flag = acc.degenerate_convention_used();
  if (is_regression(spec)) {
    rr.zero_lv_baseline = acc.baseline_press();
  } else {
    rr.naive_class_metric = naive_acc.try_value();
    rr.zero_lv_baseline = rr.naive_class_metric.value_or(0.0);
  }
  rr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rr;
}

/// The leakage demonstration: variable selection on the full dataset before
/// any splitting, then a normal double CV restricted to the chosen columns.
Dataset leaky_preselect(const Dataset& ds, PipelineSpec& spec, const EngineHooks& hooks) {
  const SelectionSpec* sel = nullptr;
  for (const auto& s : spec.selection_grid)
    if (s.method != SelectionMethod::none) {
      sel = &s;
      break;
    }
  if (!sel)
    throw ConfigError(spec.name +
                      ": leakage demonstration requires a variable-selection method");
  const std::size_t max_lv = *std::max_element(spec.n_lv_grid.begin(), spec.n_lv_grid.end());
  if (max_lv == 0)
    throw ConfigError(spec.name + ": leakage demonstration needs n_lv_grid beyond 0");

  std::vector<std::size_t> all_rows(ds.rows());
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  if (hooks.on_gather)
    hooks.on_gather({GatherPhase::leaky_selection, 0, SIZE_MAX, all_rows});

  const FittedPreproc x_pre = fit_preproc(spec.x_preproc, ds.X);
  const Matrix xc = apply_preproc(x_pre, ds.X);
  const std::size_t lv = clamp_lv(max_lv, xc.rows(), xc.cols());

  GridPoint gp{lv, *sel};
  CenteredFit cf;
  if (is_regression(spec)) {
    const FittedPreproc y_pre = fit_preproc(spec.y_preproc, *ds.Y);
    const Matrix yc = apply_preproc(y_pre, *ds.Y);
    cf = fit_on_centered(xc, &yc, {}, spec.model, gp);
  } else {
    const auto labels = all_labels(*ds.Y);
    cf = fit_on_centered(xc, nullptr, labels, spec.model, gp);
  }
  std::vector<std::size_t> keep = cf.selected;
  if (sel->method == SelectionMethod::sparse) keep = apply_selection(*sel, cf.model, xc);
  if (keep.empty()) {
    keep.resize(ds.X.cols());
    std::iota(keep.begin(), keep.end(), std::size_t{0});
  }

  Dataset out = ds;
  out.X = select_cols(ds.X, keep);
  if (ds.variable_names) {
    std::vector<std::string> names;
    for (std::size_t j : keep) names.push_back((*ds.variable_names)[j]);
    out.variable_names = std::move(names);
  }
  spec.selection_grid = {SelectionSpec{}};  // selection already (wrongly) done
  return out;
}

}  // namespace

ValidationReport double_cv(const Dataset& ds, const PipelineSpec& spec, const RunOptions& opts) {
  ds.validate();
  validate_spec(ds, spec);

  Dataset working = ds;
  PipelineSpec wspec = spec;
  if (opts.demonstrate_leakage) working = leaky_preselect(ds, wspec, opts.hooks);

  ValidationReport report;
  report.spec = spec;
  report.leakage_demonstration = opts.demonstrate_leakage;
  report.independence_disclosure = kDefaultDisclosure;
  report.per_repetition.resize(spec.n_repetitions);

  parallel_for(spec.n_repetitions, opts.threads, [&](std::size_t r) {
    report.per_repetition[r] = run_repetition(working, wspec, r, opts.hooks);
  });

  const auto metrics = report.per_rep_metrics();
  std::vector<double> sorted = metrics;
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= static_cast<double>(sorted.size());
  double var = 0.0;
  for (double v : sorted) var += (v - mean) * (v - mean);
  report.summary.mean = mean;
  report.summary.sd =
      sorted.size() > 1 ? std::sqrt(var / static_cast<double>(sorted.size() - 1)) : 0.0;
  report.summary.median = median_of(sorted);
  report.summary.iqr = iqr_of(sorted);

  double zero_lv = 0.0;
  bool have_naive = false;
  double naive = 0.0;
  std::size_t naive_n = 0;
  for (const auto& r : report.per_repetition) {
    zero_lv += r.zero_lv_baseline;
    if (r.naive_class_metric) {
      naive += *r.naive_class_metric;
      ++naive_n;
      have_naive = true;
    }
    report.metric_convention_flags += r.metric_convention_flag;
    for (const auto& f : r.folds) {
      report.selection_fallbacks += f.chosen.fallback;
      report.degenerate_folds += f.skipped;
    }
  }
  report.baseline_zero_lv = zero_lv / static_cast<double>(report.per_repetition.size());
  if (have_naive) report.baseline_naive_class = naive / static_cast<double>(naive_n);
  return report;
}

std::vector<double> permutation_null_draws(const Dataset& ds, const PipelineSpec& spec,
                                           std::size_t n_perm, PermuteBlock block,
                                           const RunOptions& opts) {
  if (n_perm < 1) throw ConfigError("permutation_null: n_perm must be >= 1");
  PipelineSpec one_rep = spec;
  one_rep.n_repetitions = 1;
  RunOptions inner_opts = opts;
  inner_opts.threads = 1;  // permutations are the parallel axis

  std::vector<double> nulls(n_perm);
  parallel_for(n_perm, opts.threads, [&](std::size_t i) {
    RngStream rng = RngStream(spec.seed).derive({kTagPermutation, i});
    const auto perm = rng.permutation(ds.rows());
    Dataset permuted = ds;
    if (block == PermuteBlock::y)
      permuted.Y = gather_rows(*ds.Y, perm);
    else
      permuted.X = gather_rows(ds.X, perm);
    nulls[i] = double_cv(permuted, one_rep, inner_opts).per_repetition[0].pooled_metric;
  });
  return nulls;
}

double permutation_p_value(const MetricSpec& metric, std::span<const double> null_metrics,
                           double observed) {
  std::size_t at_least = 0;
  for (double v : null_metrics) {
    if (metric.orientation() == Orientation::higher_better)
      at_least += v >= observed;
    else
      at_least += v <= observed;
  }
  return static_cast<double>(1 + at_least) / static_cast<double>(1 + null_metrics.size());
}

PermutationResult permutation_null(const Dataset& ds, const PipelineSpec& spec,
                                   std::size_t n_perm, PermuteBlock block,
                                   const RunOptions& opts) {
  const ValidationReport observed_report = double_cv(ds, spec, opts);
  PermutationResult result;
  result.observed = median_of(observed_report.per_rep_metrics());
  result.null_metrics = permutation_null_draws(ds, spec, n_perm, block, opts);
  result.p_value = permutation_p_value(spec.metric, result.null_metrics, result.observed);
  return result;
}

BootstrapSummary bootstrap_metric(std::span<const double> values, std::size_t n_boot,
                                  RngStream rng) {
  if (values.size() < 2) throw DataError("bootstrap_metric: needs at least 2 observations");
  if (n_boot < 1) throw ConfigError("bootstrap_metric: n_boot must be >= 1");
  const std::size_t n = values.size();
  std::vector<double> boot(n_boot);
  for (std::size_t b = 0; b < n_boot; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[rng.next_below(n)];
    boot[b] = s / static_cast<double>(n);
  }
  BootstrapSummary out;
  double mean = 0.0;
  for (double v : values) mean += v;
  out.mean = mean / static_cast<double>(n);
  double bmean = 0.0;
  for (double v : boot) bmean += v;
  bmean /= static_cast<double>(n_boot);
  double var = 0.0;
  for (double v : boot) var += (v - bmean) * (v - bmean);
  out.sd = n_boot > 1 ? std::sqrt(var / static_cast<double>(n_boot - 1)) : 0.0;
  std::sort(boot.begin(), boot.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(boot.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < boot.size() ? boot[lo] * (1.0 - frac) + boot[lo + 1] * frac : boot[lo];
  };
  out.lo95 = quantile(0.025);
  out.hi95 = quantile(0.975);
  return out;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw DataError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double iqr_of(std::vector<double> values) {
  if (values.empty()) throw DataError("iqr: empty input");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < values.size() ? values[lo] * (1.0 - frac) + values[lo + 1] * frac
                                  : values[lo];
  };
  return quantile(0.75) - quantile(0.25);
}

double wilcoxon_signed_rank_p(std::span<const double> diffs) {
  std::vector<double> mags;
  std::vector<int> signs;
  for (double d : diffs) {
    if (d == 0.0) continue;  // Wilcoxon convention: drop zero differences
    mags.push_back(std::abs(d));
    signs.push_back(d > 0.0 ? 1 : -1);
  }
  const std::size_t n = mags.size();
  if (n == 0) return 1.0;

  // Average ranks over tied magnitudes; ranks are then multiples of 0.5.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return mags[a] < mags[b]; });
  std::vector<double> rank(n);
  double tie_correction = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && mags[order[j]] == mags[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) rank[order[k]] = avg;
    const double t = static_cast<double>(j - i);
    tie_correction += t * t * t - t;
    i = j;
  }

  double w_plus = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (signs[k] > 0) w_plus += rank[k];

  if (n <= 20) {
    // Exact null: enumerate the distribution of 2*W+ over all sign choices.
    std::vector<long long> r2(n);
    long long total = 0;
    for (std::size_t k = 0; k < n; ++k) {
      r2[k] = static_cast<long long>(std::llround(2.0 * rank[k]));
      total += r2[k];
    }
    std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
    dist[0] = 1.0;
    long long reach = 0;
    for (std::size_t k = 0; k < n; ++k) {
      reach += r2[k];
      for (long long s = reach; s >= r2[k]; --s)
        dist[static_cast<std::size_t>(s)] += dist[static_cast<std::size_t>(s - r2[k])];
    }
    const double denom = std::pow(2.0, static_cast<double>(n));
    const long long w2 = static_cast<long long>(std::llround(2.0 * w_plus));
    double p_le = 0.0, p_ge = 0.0;
    for (long long s = 0; s <= total; ++s) {
      if (s <= w2) p_le += dist[static_cast<std::size_t>(s)];
      if (s >= w2) p_ge += dist[static_cast<std::size_t>(s)];
    }
    return std::min(1.0, 2.0 * std::min(p_le, p_ge) / denom);
  }

  // Normal approximation with tie correction and continuity correction.
  const double dn = static_cast<double>(n);
  const double mean = dn * (dn + 1.0) / 4.0;
  const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_correction / 48.0;
  if (var <= 0.0) return 1.0;
  const double z = (std::abs(w_plus - mean) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

ComparisonResult compare_models(const ValidationReport& a, const ValidationReport& b) {
  if (a.per_repetition.size() != b.per_repetition.size())
    throw ConfigError("compare_models: repetition counts differ (unpaired)");
  if (a.spec.metric.name != b.spec.metric.name ||
      a.spec.metric.w_fp != b.spec.metric.w_fp || a.spec.metric.w_fn != b.spec.metric.w_fn ||
      a.spec.metric.positive_class != b.spec.metric.positive_class)
    throw ConfigError("compare_models: metrics differ (unpaired)");
  if (a.spec.seed != b.spec.seed)
    throw ConfigError("compare_models: seeds differ, fold structure is not paired");
  if (a.spec.outer_policy.kind != b.spec.outer_policy.kind ||
      a.spec.outer_policy.n_folds != b.spec.outer_policy.n_folds)
    throw ConfigError("compare_models: outer split policies differ (unpaired)");

  ComparisonResult out;
  out.name_a = a.spec.name;
  out.name_b = b.spec.name;
  const auto ma = a.per_rep_metrics(), mb = b.per_rep_metrics();
  out.diffs.resize(ma.size());
  for (std::size_t i = 0; i < ma.size(); ++i) out.diffs[i] = ma[i] - mb[i];
  out.p_value = wilcoxon_signed_rank_p(out.diffs);
  out.median_a = median_of(ma);
  out.median_b = median_of(mb);
  out.iqr_a = iqr_of(ma);
  out.iqr_b = iqr_of(mb);
  out.seconds_a = a.total_seconds();
  out.seconds_b = b.total_seconds();
  return out;
}

double zero_lv_baseline(const Dataset& ds, const PipelineSpec& spec) {
  ds.validate();
  validate_spec(ds, spec);
  double total = 0.0;
  for (std::size_t rep = 0; rep < spec.n_repetitions; ++rep) {
    SplitPolicy opol = spec.outer_policy;
    opol.n_folds = resolve_n_folds(opol, ds.rows(), false);
    const SplitPlan plan =
        make_split(opol, ds, RngStream(spec.seed).derive({kTagOuterSplit, rep}));
    MetricAccumulator acc(spec.metric);
    double press0 = 0.0;
    for (std::size_t f = 0; f < plan.n_folds; ++f) {
      const auto build_rows = plan.complement_rows(f);
      const auto test_rows = plan.fold_rows(f);
      if (is_regression(spec)) {
        const Matrix y_build = gather_rows(*ds.Y, build_rows);
        const Matrix y_test = gather_rows(*ds.Y, test_rows);
        const auto means = column_means(y_build);
        for (std::size_t i = 0; i < y_test.rows(); ++i)
          for (std::size_t j = 0; j < y_test.cols(); ++j) {
            const double d = y_test(i, j) - means[j];
            press0 += d * d;
          }
      } else {
        const auto labels_build = y_labels(*ds.Y, build_rows);
        const auto labels_test = y_labels(*ds.Y, test_rows);
        const double maj = majority_label(labels_build);
        const std::vector<double> pred(labels_test.size(), maj);
        std::vector<double> scores;
        if (spec.metric.needs_scores()) scores.assign(labels_test.size(), 0.0);
        acc.add_classification(labels_test, pred, scores);
      }
    }
    if (is_regression(spec)) {
      if (press0 == 0.0)
        throw DegenerateError("zero_lv_baseline: constant response, baseline PRESS is zero");
      total += press0;
    } else {
      total += acc.value();
    }
  }
  return total / static_cast<double>(spec.n_repetitions);
}

InnerSelection single_cv_curve(const Dataset& ds, const PipelineSpec& spec) {
  ds.validate();
  validate_spec(ds, spec);
  return inner_cv_select(ds, spec, RngStream(spec.seed).derive({kTagSingleCv}));
}

std::string to_string(ModelKind kind) { return kind == ModelKind::pls ? "pls" : "plsda"; }

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "pls") return ModelKind::pls;
  if (s == "plsda") return ModelKind::plsda;
  throw ConfigError("unknown model kind: '" + s + "'");
}

std::string to_string(PermuteBlock block) { return block == PermuteBlock::y ? "y" : "x"; }

PermuteBlock permute_block_from_string(const std::string& s) {
  if (s == "y" || s == "Y") return PermuteBlock::y;
  if (s == "x" || s == "X") return PermuteBlock::x;
  throw ConfigError("unknown permutation block: '" + s + "'");
}

}  // namespace valguard
