#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dccgarch/errors.hpp"
#include "dccgarch/types.hpp"

namespace dccgarch::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool is_blank(std::string_view s) { return trim(s).empty(); }

}  // namespace detail

/// Formats with 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

/// Loads selected columns of a comma-separated file as a returns matrix.
///
/// The first line is a header when any of its cells is non-numeric. Columns are
/// chosen by header name or by 1-based position; an empty selection keeps all.
/// Row numbers in errors are 1-based file lines. Values are not demeaned.
inline ReturnsMatrix load_returns(const std::filesystem::path& path, const std::vector<std::string>& columns = {}) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open returns file '" + path.string() + "'");

  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    rows.emplace_back(line_no, detail::split_csv_line(line));
  }
  if (rows.empty()) throw InvalidInput("returns file '" + path.string() + "' is empty");

  std::vector<std::string> header;
  {
    double tmp = 0.0;
    for (const auto& cell : rows.front().second) {
      if (!detail::parse_double(cell, tmp)) {
        header = rows.front().second;
        break;
      }
    }
  }
  const std::size_t width = rows.front().second.size();
  const std::size_t first_data = header.empty() ? 0 : 1;

  std::vector<std::size_t> selected;
  if (columns.empty()) {
    for (std::size_t c = 0; c < width; ++c) selected.push_back(c);
  } else {
    for (const auto& col : columns) {
      std::size_t found = width;
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == col) found = c;
      }
      if (found == width) {
        std::size_t idx = 0;
        const auto [ptr, ec] = std::from_chars(col.data(), col.data() + col.size(), idx);
        if (ec != std::errc() || ptr != col.data() + col.size() || idx < 1 || idx > width) {
          throw InvalidInput("unknown column '" + col + "' in '" + path.string() + "'");
        }
        found = idx - 1;
      }
      selected.push_back(found);
    }
  }

  const std::size_t T = rows.size() - first_data;
  if (T < 2) throw InvalidInput("returns file '" + path.string() + "' has fewer than 2 data rows");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(selected.size()));
  std::vector<std::size_t> bad_rows;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& [lineno, cells] = rows[r];
    bool ok = true;
    for (std::size_t j = 0; j < selected.size(); ++j) {
      double v = 0.0;
      if (selected[j] >= cells.size() || !detail::parse_double(cells[selected[j]], v)) {
        ok = false;
        break;
      }
      values(static_cast<Eigen::Index>(r - first_data), static_cast<Eigen::Index>(j)) = v;
    }
    if (!ok) bad_rows.push_back(lineno);
  }
  if (!bad_rows.empty()) {
    std::ostringstream msg;
    msg << "non-numeric or missing value in '" << path.string() << "' at row";
    if (bad_rows.size() > 1) msg << 's';
    for (std::size_t i = 0; i < bad_rows.size() && i < 20; ++i) msg << (i ? ", " : " ") << bad_rows[i];
    if (bad_rows.size() > 20) msg << ", ... (" << bad_rows.size() << " rows)";
    throw InvalidInput(msg.str());
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < selected.size(); ++j) {
    names.push_back(header.empty() || header[selected[j]].empty() ? "y_" + std::to_string(selected[j] + 1)
                                                                  : header[selected[j]]);
  }
  return ReturnsMatrix(std::move(values), std::move(names));
}

inline void write_returns(const std::filesystem::path& path, const ReturnsMatrix& data) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  const auto& names = data.series_names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (std::size_t t = 0; t < data.rows(); ++t) {
    for (std::size_t i = 0; i < data.dim(); ++i) out << (i ? "," : "") << format_double(data(t, i));
    out << '\n';
  }
  if (!out) throw InvalidInput("failed while writing '" + path.string() + "'");
}

/// Reads a headerless numeric CSV as a dense matrix (used for cholCov files).
inline Eigen::MatrixXd load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    std::vector<double> row;
    for (const auto& cell : detail::split_csv_line(line)) {
      double v = 0.0;
      if (!detail::parse_double(cell, v)) throw InvalidInput("non-numeric matrix entry at row " + std::to_string(line_no));
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw InvalidInput("ragged matrix at row " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("matrix file '" + path.string() + "' is empty");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

}  // namespace dccgarch::io
