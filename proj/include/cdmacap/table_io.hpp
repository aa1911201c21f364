#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cdmacap {

// One output cell.  Booleans print as 0/1 in CSV and true/false in JSON;
// strings pass through verbatim (used for 64-bit seeds, which JSON numbers
// cannot hold exactly).
using Cell = std::variant<int64_t, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Key/value block attached to simulate outputs (stdout one-liner for CSV,
// "summary" object in JSON).
using Summary = std::vector<std::pair<std::string, Cell>>;

enum class TableFormat { csv, json };

// Exactly 12 significant digits, shortest form ("%.12g").
std::string format_real(double value);

std::string to_csv(const Table& table);
std::string to_json(const Table& table, const Summary* summary = nullptr);

// Writes to the file at `path`, or to `fallback` when path is "-".
// Throws std::runtime_error when the file cannot be written.
void emit_table(const Table& table, TableFormat format,
                const std::string& path, std::ostream& fallback,
                const Summary* summary = nullptr);

}  // namespace cdmacap
