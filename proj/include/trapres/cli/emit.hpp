#pragma once

#include "json.hpp"

#include <string>
#include <variant>
#include <vector>

namespace trapres::cli {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Doubles as %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_cell(const Cell& c);
std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t);

/// Writes <dir>/<name>.csv (and .json when requested); creates dir as needed.
void write_table(const std::string& dir, const Table& t, bool json_mirror);
void write_text(const std::string& path, const std::string& text);

}  // namespace trapres::cli
