#pragma once

#include <string>
#include <vector>

namespace r2o {

struct TableSpec {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Space-aligned table for terminals.
std::string render_aligned(const TableSpec& table);

// Comma-delimited form of the same table (header row first, no title).
std::string render_delimited(const TableSpec& table);

std::string format_double(double v, int precision = 4);

// Writes via a temp file plus rename so partially written artifacts never
// appear under the final name.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace r2o
