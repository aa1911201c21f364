#include "cdmacap/table_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace cdmacap {
namespace {

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, const Summary* summary) {
  nlohmann::ordered_json root;
  auto& rows = root["rows"];
  rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (size_t i = 0; i < row.size(); ++i) {
      obj[table.columns[i]] = json_cell(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  if (summary != nullptr) {
    auto& s = root["summary"];
    for (const auto& [key, cell] : *summary) s[key] = json_cell(cell);
  }
  return root.dump(2) + "\n";
}

void emit_table(const Table& table, TableFormat format,
                const std::string& path, std::ostream& fallback,
                const Summary* summary) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("table row width does not match its header");
    }
  }
  const std::string text =
      format == TableFormat::csv ? to_csv(table) : to_json(table, summary);
  if (path == "-") {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  file << text;
  if (!file.good()) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

}  // namespace cdmacap
