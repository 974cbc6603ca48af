#include "ffsc/table.hpp"

#include <stdexcept>

#include <fmt/format.h>
#include "json.hpp"

namespace ffsc::cli {
namespace {

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) {
    return text;
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return fmt::format("{:.17g}", v); }
  std::string operator()(const std::string& v) const { return csv_quote(v); }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
  nlohmann::ordered_json operator()(double v) const { return v; }
  nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row width does not match the header");
  }
  rows.push_back(std::move(row));
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_quote(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << std::visit(CsvCell{}, row[i]);
    }
    out << '\n';
  }
}

void write_json_lines(const Table& table, std::ostream& out) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    obj["schema_version"] = kSchemaVersion;
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[table.columns[i]] = std::visit(JsonCell{}, row[i]);
    }
    out << obj.dump() << '\n';
  }
}

void write_table(const Table& table, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    write_csv(table, out);
  } else {
    write_json_lines(table, out);
  }
}

}  // namespace ffsc::cli
