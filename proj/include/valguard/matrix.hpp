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
#ifndef VALGUARD_MATRIX_HPP
#define VALGUARD_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace valguard {

/// Dense row-major matrix of doubles. Problem sizes in this project stay
/// small (tens of rows, up to a few thousand columns), so storage is a single
/// contiguous buffer and all operations are plain loops.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Builds a matrix from nested brace lists; rows must have equal length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return v_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return v_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {v_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {v_.data() + i * cols_, cols_};
  }

  std::vector<double>& values() noexcept { return v_; }
  const std::vector<double>& values() const noexcept { return v_; }

  bool operator==(const Matrix& other) const noexcept = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix identity(std::size_t n);

/// Column subset in the requested order. Indices must be in range.
Matrix select_cols(const Matrix& a, std::span<const std::size_t> idx);

/// Row subset preserving the requested order. Indices must be in range.
Matrix gather_rows(const Matrix& a, std::span<const std::size_t> idx);

double frobenius_norm(const Matrix& a);
std::vector<double> column_means(const Matrix& a);

/// Sample standard deviations, n-1 denominator.
std::vector<double> column_sds(const Matrix& a);

/// Solves A X = B for square A by Gaussian elimination with partial
/// pivoting. Intended for the small systems inside PLS coefficient assembly.
Matrix solve(Matrix a, Matrix b);

}  // namespace valguard

#endif
