#include "tbc/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "json.hpp"

namespace tbc {

namespace {

using ojson = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return csv_field(std::get<std::string>(c));
}

ojson cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? ojson(*d) : ojson(nullptr);
  return std::get<std::string>(c);
}

Cell json_cell(const ojson& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::invalid_argument("table cell must be a number, string or null");
}

void write_to(const ResultTable& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::csv) {
    write_csv(table, out);
  } else {
    write_json(table, out);
  }
}

}  // namespace

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

const std::string* ResultTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_json(const ResultTable& table, std::ostream& out) {
  ojson doc;
  doc["metadata"] = ojson::object();
  for (const auto& [k, v] : table.metadata) doc["metadata"][k] = v;
  doc["columns"] = table.columns;
  doc["rows"] = ojson::array();
  for (const auto& row : table.rows) {
    ojson r = ojson::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump() << '\n';
}

ResultTable read_json(std::istream& in) {
  const ojson doc = ojson::parse(in);
  ResultTable t;
  for (const auto& [k, v] : doc.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
  t.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& r : doc.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) row.push_back(json_cell(c));
    t.add_row(std::move(row));
  }
  return t;
}

void write_output(const ResultTable& table, OutputFormat format, const std::string& path) {
  if (path.empty() || path == "-") {
    write_to(table, format, std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed to write to standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  write_to(table, format, f);
  f.close();
  if (!f) throw std::runtime_error("failed to write output file '" + path + "'");
}

}  // namespace tbc
