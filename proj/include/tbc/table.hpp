#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tbc {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Named columns, rows of cells and an ordered metadata block.
struct ResultTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Replaces an existing key in place or appends a new one.
  void set_meta(const std::string& key, const std::string& value);
  const std::string* meta(const std::string& key) const;
  /// Throws std::invalid_argument when the row length differs from the column count.
  void add_row(std::vector<Cell> row);
};

enum class OutputFormat { csv, json };

/// Shortest decimal string that reads back to the same double; "inf", "-inf", "nan" otherwise.
std::string format_double(double v);

/// '#'-prefixed "key: value" metadata lines, a header row, then one line per
/// row. Strings containing a comma, quote or newline are quoted.
void write_csv(const ResultTable& table, std::ostream& out);

/// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}. Non-finite
/// doubles are written as null.
void write_json(const ResultTable& table, std::ostream& out);

/// Inverse of write_json; null cells read back as NaN.
ResultTable read_json(std::istream& in);

/// Writes to `path`, or to standard output when path is empty or "-".
/// Throws std::runtime_error naming the path on I/O failure.
void write_output(const ResultTable& table, OutputFormat format, const std::string& path);

}  // namespace tbc
