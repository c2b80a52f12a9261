#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "dualk/classifier.hpp"
#include "dualk/types.hpp"

namespace dualk {

// Comma-separated rows; blank lines and lines starting with '#' are skipped.
// Parse errors report the 1-based line number.
DataMatrix parse_csv_points(std::string_view text);
LabeledDataset parse_csv_labeled(std::string_view text);

DataMatrix read_csv_points(const std::filesystem::path& path);
LabeledDataset read_csv_labeled(const std::filesystem::path& path);

// 17 significant digits; labels, when given, go in a final integer column.
void write_csv_points(std::ostream& out, const DataMatrix& points,
                      const std::vector<int>* labels = nullptr);
void write_csv_points(const std::filesystem::path& path, const DataMatrix& points,
                      const std::vector<int>* labels = nullptr);

std::string format_double(double value);

}  // namespace dualk
