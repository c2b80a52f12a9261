#include "dualk/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "dualk/error.hpp"

namespace dualk {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view cell, std::size_t row) {
  cell = trim(cell);
  // from_chars rejects a leading '+', strtod-style input allows it.
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
    throw ParseError(row, "non-numeric cell '" + std::string(cell) + "'");
  if (!std::isfinite(value)) throw ParseError(row, "non-finite cell '" + std::string(cell) + "'");
  return value;
}

struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
};

Table parse_table(std::string_view text) {
  Table t;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      row.push_back(parse_number(line.substr(start, comma == std::string_view::npos ? comma : comma - start), line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (t.rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) + " columns, found " + std::to_string(row.size()));
    }
    t.rows.push_back(std::move(row));
    t.line_numbers.push_back(line_no);
  }
  if (t.rows.empty()) throw ParseError(line_no, "no data rows");
  return t;
}

PointMatrix to_matrix(const Table& t, std::size_t cols) {
  PointMatrix m(static_cast<Index>(t.rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = t.rows[i][j];
  return m;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

DataMatrix parse_csv_points(std::string_view text) {
  const Table t = parse_table(text);
  return DataMatrix(to_matrix(t, t.rows.front().size()));
}

LabeledDataset parse_csv_labeled(std::string_view text) {
  const Table t = parse_table(text);
  const std::size_t cols = t.rows.front().size();
  if (cols < 2) throw ParseError(t.line_numbers.front(), "labeled rows need at least one coordinate and a label");
  std::vector<int> labels;
  labels.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double v = t.rows[i].back();
    if (v != std::floor(v) || v < 0.0 || v > std::numeric_limits<int>::max())
      throw ParseError(t.line_numbers[i], "label must be a non-negative integer");
    labels.push_back(static_cast<int>(v));
  }
  return {DataMatrix(to_matrix(t, cols - 1)), std::move(labels)};
}

DataMatrix read_csv_points(const std::filesystem::path& path) { return parse_csv_points(slurp(path)); }

LabeledDataset read_csv_labeled(const std::filesystem::path& path) { return parse_csv_labeled(slurp(path)); }

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_csv_points(std::ostream& out, const DataMatrix& points, const std::vector<int>* labels) {
  if (labels && static_cast<Index>(labels->size()) != points.size())
    throw InvalidArgument("label count does not match point count");
  for (Index i = 0; i < points.size(); ++i) {
    for (Index j = 0; j < points.dim(); ++j) {
      if (j > 0) out << ',';
      out << format_double(points.values()(i, j));
    }
    if (labels) out << ',' << (*labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

void write_csv_points(const std::filesystem::path& path, const DataMatrix& points, const std::vector<int>* labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_csv_points(out, points, labels);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace dualk
