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
#include "valguard/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "valguard/errors.hpp"

namespace valguard {

namespace {

[[noreturn]] void shape_error(const std::string& op, const Matrix& a, const Matrix& b) {
  throw DataError(op + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                  std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                  std::to_string(b.cols()) + ")");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != m.cols_) throw DataError("from_rows: ragged row");
    std::size_t j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_error("multiply", a, b);
  Matrix c(a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous for row-major storage.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix select_cols(const Matrix& a, std::span<const std::size_t> idx) {
  for (std::size_t j : idx)
    if (j >= a.cols()) throw DataError("select_cols: column index out of range");
  Matrix m(a.rows(), idx.size());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = a(i, idx[j]);
  return m;
}

Matrix gather_rows(const Matrix& a, std::span<const std::size_t> idx) {
  for (std::size_t i : idx)
    if (i >= a.rows()) throw DataError("gather_rows: row index out of range");
  Matrix m(idx.size(), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = a.row(idx[i]);
    auto dst = m.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) dst[j] = src[j];
  }
  return m;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.values()) s += x * x;
  return std::sqrt(s);
}

std::vector<double> column_means(const Matrix& a) {
  if (a.rows() == 0) throw DataError("column_means: empty matrix");
  std::vector<double> m(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) m[j] += r[j];
  }
  for (double& x : m) x /= static_cast<double>(a.rows());
  return m;
}

std::vector<double> column_sds(const Matrix& a) {
  if (a.rows() < 2) throw DataError("column_sds: needs at least 2 rows");
  const auto means = column_means(a);
  std::vector<double> s(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = r[j] - means[j];
      s[j] += d * d;
    }
  }
  for (double& x : s) x = std::sqrt(x / static_cast<double>(a.rows() - 1));
  return s;
}

Matrix solve(Matrix a, Matrix b) {
  if (a.rows() != a.cols()) throw DataError("solve: matrix not square");
  if (a.rows() != b.rows()) shape_error("solve", a, b);
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) throw DegenerateError("solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  Matrix x(n, b.cols());
  for (std::size_t jj = 0; jj < b.cols(); ++jj) {
    for (std::size_t ii = n; ii-- > 0;) {
      double s = b(ii, jj);
      for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x(j, jj);
      x(ii, jj) = s / a(ii, ii);
    }
  }
  return x;
}

}  // namespace valguard
