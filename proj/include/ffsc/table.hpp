#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace ffsc::cli {

inline constexpr int kSchemaVersion = 1;

/// Empty cell, integer, real or text.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Header row then one line per row. Reals use 17 significant digits; text is
/// quoted when it holds a comma, quote or line break; empty cells stay empty.
void write_csv(const Table& table, std::ostream& out);

/// One JSON object per row, keys in column order, led by "schema_version".
void write_json_lines(const Table& table, std::ostream& out);

enum class Format { Csv, Json };

void write_table(const Table& table, Format format, std::ostream& out);

}  // namespace ffsc::cli
