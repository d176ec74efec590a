#include "trapres/cli/emit.hpp"

#include "trapres/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace trapres::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw PreconditionError("Table::add: row width does not match " + name);
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const long* l = std::get_if<long>(&c)) return std::to_string(*l);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (const double* d = std::get_if<double>(&c))
        o[t.columns[i]] = std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(format_cell(c));
      else if (const long* l = std::get_if<long>(&c))
        o[t.columns[i]] = *l;
      else
        o[t.columns[i]] = std::get<std::string>(c);
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("io", "write failed for '" + path + "'");
}

void write_table(const std::string& dir, const Table& t, bool json_mirror) {
  write_text((std::filesystem::path(dir) / (t.name + ".csv")).string(), to_csv(t));
  if (json_mirror) write_text((std::filesystem::path(dir) / (t.name + ".json")).string(), to_json(t).dump(2) + "\n");
}

}  // namespace trapres::cli
