// Copyright 2026 The Sketchlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sketchlab/errors.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

// One output record per sketch size k. predicted is absent when the gamma
// equation has no solution at this k; epsilon_hat and closed_form are
// populated only when the run computes them.
struct ResultRow {
  std::size_t k = 0;
  std::optional<double> predicted;
  double empirical_mean = 0.0;
  double empirical_std = 0.0;
  std::optional<double> epsilon_hat;
  std::optional<double> closed_form;
};

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

inline bool is_blank(std::string_view line) {
  for (char c : line)
    if (!is_space(c)) return false;
  return true;
}

inline double parse_double(std::string_view token, std::size_t line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError("invalid number '" + std::string(token) + "'", line);
  return value;
}

inline std::size_t parse_index(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0)
    throw ParseError("invalid feature index '" + std::string(token) + "'",
                     line);
  return static_cast<std::size_t>(value);
}

inline std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace detail

// Parses the libsvm text format: per line `label idx:val idx:val...` with
// 1-based strictly increasing indices. Labels are discarded; absent
// features are 0; the column count is the largest index seen. Blank lines
// are skipped. Line numbers in errors are 1-based; line 0 marks a
// whole-stream fault.
inline Matrix parse_libsvm(std::istream& in) {
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    const auto tokens = detail::split_whitespace(line);
    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(tokens.size() - 1);
    std::size_t prev_index = 0;
    // tokens[0] is the label.
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 ||
          colon + 1 == tok.size())
        throw ParseError("expected index:value pair, got '" +
                             std::string(tok) + "'",
                         line_no);
      const std::size_t index =
          detail::parse_index(tok.substr(0, colon), line_no);
      if (index <= prev_index)
        throw ParseError("feature indices must be strictly increasing",
                         line_no);
      const double value = detail::parse_double(tok.substr(colon + 1), line_no);
      row.emplace_back(index, value);
      prev_index = index;
      if (index > max_index) max_index = index;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty input", 0);
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(max_index));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [index, value] : rows[i])
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(index - 1)) =
          value;
  return a;
}

// Parses dense CSV: comma-separated reals, no header, one matrix row per
// line. All rows must have the same width.
inline Matrix parse_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const std::size_t comma = rest.find(',');
      std::string_view cell = rest.substr(0, comma);
      while (!cell.empty() && detail::is_space(cell.front()))
        cell.remove_prefix(1);
      while (!cell.empty() && detail::is_space(cell.back()))
        cell.remove_suffix(1);
      row.push_back(detail::parse_double(cell, line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("expected " + std::to_string(rows.front().size()) +
                           " columns, got " + std::to_string(row.size()),
                       line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty input", 0);
  Matrix a(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return a;
}

// Loads a matrix from disk, sniffing the format: a ':' in the first
// non-blank line means libsvm, otherwise dense CSV.
inline Matrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path, 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  bool libsvm = false;
  std::istringstream sniff(text);
  std::string line;
  while (std::getline(sniff, line)) {
    if (detail::is_blank(line)) continue;
    libsvm = line.find(':') != std::string::npos;
    break;
  }
  std::istringstream body(text);
  return libsvm ? parse_libsvm(body) : parse_csv_matrix(body);
}

namespace detail {

inline std::string format_significant(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

inline std::string format_cell(const std::optional<double>& value) {
  return value ? format_significant(*value) : std::string();
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "k,predicted,empirical_mean,empirical_std,epsilon_hat,closed_form";

// Renders rows to CSV text: fixed header, 12 significant digits, LF line
// endings, empty cells for absent optionals.
inline std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const ResultRow& row : rows) {
    out += std::to_string(row.k);
    out.push_back(',');
    out += detail::format_cell(row.predicted);
    out.push_back(',');
    out += detail::format_significant(row.empirical_mean);
    out.push_back(',');
    out += detail::format_significant(row.empirical_std);
    out.push_back(',');
    out += detail::format_cell(row.epsilon_hat);
    out.push_back(',');
    out += detail::format_cell(row.closed_form);
    out.push_back('\n');
  }
  return out;
}

inline void write_csv(const std::vector<ResultRow>& rows,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  const std::string text = format_csv(rows);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing output file: " + path);
}

}  // namespace sketchlab
