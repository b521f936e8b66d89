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
#include "valguard/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "valguard/errors.hpp"

namespace valguard {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end != begin + cell.size()) return false;
  return std::isfinite(out);
}

bool all_digits(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::size_t resolve_column(const std::string& token, const std::vector<std::string>& header,
                           bool has_header, const std::string& what, std::size_t n_cols) {
  if (all_digits(token)) {
    const std::size_t idx = static_cast<std::size_t>(std::stoull(token));
    if (idx >= n_cols)
      throw DataError(what + ": column index " + token + " out of range (file has " +
                      std::to_string(n_cols) + " columns)");
    return idx;
  }
  if (!has_header)
    throw DataError(what + ": column name '" + token + "' given but the file has no header row");
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == token) return j;
  throw DataError(what + ": column '" + token + "' not found in header");
}

}  // namespace

ColumnSelector ColumnSelector::parse(const std::string& text) {
  ColumnSelector sel;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    if (all_digits(tok))
      sel.indices.push_back(static_cast<std::size_t>(std::stoull(tok)));
    else
      sel.names.push_back(tok);
  }
  return sel;
}

Dataset load_dataset(const std::string& path, const ColumnSelector& y_cols,
                     const std::optional<std::string>& group_col,
                     const std::optional<std::string>& time_col) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() && in.peek() == EOF) break;
    rows.push_back(split_line(line));
  }
  if (rows.empty()) throw DataError("empty file: " + path);

  const std::size_t n_cols = rows[0].size();
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].size() != n_cols)
      throw DataError("ragged row " + std::to_string(i) + ": expected " + std::to_string(n_cols) +
                      " cells, got " + std::to_string(rows[i].size()));

  // Header iff any cell of the first row fails to parse as a number.
  bool has_header = false;
  for (const auto& cell : rows[0]) {
    double tmp;
    if (!parse_number(cell, tmp)) {
      has_header = true;
      break;
    }
  }
  std::vector<std::string> header;
  if (has_header) header = rows[0];

  const std::size_t first_data = has_header ? 1 : 0;
  const std::size_t n_rows = rows.size() - first_data;
  if (n_rows == 0) throw DataError("file has a header but no data rows: " + path);

  // Route columns.
  std::vector<std::size_t> y_idx;
  for (std::size_t i : y_cols.indices)
    y_idx.push_back(resolve_column(std::to_string(i), header, has_header, "y_cols", n_cols));
  for (const auto& nm : y_cols.names)
    y_idx.push_back(resolve_column(nm, header, has_header, "y_cols", n_cols));
  std::optional<std::size_t> g_idx, t_idx;
  if (group_col) g_idx = resolve_column(*group_col, header, has_header, "group_col", n_cols);
  if (time_col) t_idx = resolve_column(*time_col, header, has_header, "time_col", n_cols);

  std::set<std::size_t> taken(y_idx.begin(), y_idx.end());
  if (taken.size() != y_idx.size()) throw DataError("y_cols: duplicate column");
  if (g_idx && !taken.insert(*g_idx).second) throw DataError("group_col overlaps y_cols");
  if (t_idx && !taken.insert(*t_idx).second)
    throw DataError("time_col overlaps y_cols or group_col");

  std::vector<std::size_t> x_idx;
  for (std::size_t j = 0; j < n_cols; ++j)
    if (!taken.count(j)) x_idx.push_back(j);
  if (x_idx.empty()) throw DataError("no columns left for X after routing y/group/time");

  Dataset ds;
  ds.X = Matrix(n_rows, x_idx.size());
  if (!y_idx.empty()) ds.Y = Matrix(n_rows, y_idx.size());
  if (g_idx) ds.group_labels = std::vector<std::string>(n_rows);
  if (t_idx) ds.timestamps = std::vector<double>(n_rows);

  auto numeric_cell = [&](std::size_t r, std::size_t c) {
    double v;
    if (!parse_number(rows[first_data + r][c], v))
      throw DataError("non-numeric cell at (" + std::to_string(first_data + r) + "," +
                      std::to_string(c) + "): '" + rows[first_data + r][c] + "'");
    return v;
  };

  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t j = 0; j < x_idx.size(); ++j) ds.X(r, j) = numeric_cell(r, x_idx[j]);
    for (std::size_t j = 0; j < y_idx.size(); ++j) (*ds.Y)(r, j) = numeric_cell(r, y_idx[j]);
    if (g_idx) (*ds.group_labels)[r] = rows[first_data + r][*g_idx];
    if (t_idx) (*ds.timestamps)[r] = numeric_cell(r, *t_idx);
  }

  if (has_header) {
    std::vector<std::string> xn, yn;
    for (std::size_t j : x_idx) xn.push_back(header[j]);
    for (std::size_t j : y_idx) yn.push_back(header[j]);
    ds.variable_names = std::move(xn);
    if (ds.Y) ds.y_names = std::move(yn);
  }
  ds.validate();
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  std::vector<std::string> header;
  for (std::size_t j = 0; j < ds.X.cols(); ++j)
    header.push_back(ds.variable_names ? (*ds.variable_names)[j] : "x" + std::to_string(j + 1));
  if (ds.Y)
    for (std::size_t j = 0; j < ds.Y->cols(); ++j)
      header.push_back(ds.y_names ? (*ds.y_names)[j] : "y" + std::to_string(j + 1));
  if (ds.group_labels) header.push_back("group");
  if (ds.timestamps) header.push_back("time");
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << "\n";

  for (std::size_t i = 0; i < ds.rows(); ++i) {
    bool first = true;
    auto put = [&](const std::string& s) {
      if (!first) out << ",";
      out << s;
      first = false;
    };
    for (std::size_t j = 0; j < ds.X.cols(); ++j) put(fmt(ds.X(i, j)));
    if (ds.Y)
      for (std::size_t j = 0; j < ds.Y->cols(); ++j) put(fmt((*ds.Y)(i, j)));
    if (ds.group_labels) put((*ds.group_labels)[i]);
    if (ds.timestamps) put(fmt((*ds.timestamps)[i]));
    out << "\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace valguard
