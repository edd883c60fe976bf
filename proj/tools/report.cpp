#include "report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ssm/errors.hpp"

#ifndef SSM_VERSION
#define SSM_VERSION "0.0.0"
#endif

namespace ssm::cli {

Table& RunReport::table(std::string name, std::vector<std::string> columns) {
  tables.push_back({std::move(name), std::move(columns), {}});
  return tables.back();
}

std::string version_string() { return std::string("ssm ") + SSM_VERSION; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
}

namespace {

json cell_json(const json& v) {
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return format_double(v.get<double>());
  return v;
}

Table summary_table(const RunReport& r) {
  Table t{"summary", {"key", "value"}, {}};
  for (const auto& [key, value] : r.summary.items()) t.add({key, value.is_string() ? value : json(csv_cell(value))});
  return t;
}

}  // namespace

json report_json(const RunReport& r) {
  json tables = json::object();
  for (const auto& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) o[t.columns[i]] = cell_json(row[i]);
      rows.push_back(std::move(o));
    }
    tables[t.name] = std::move(rows);
  }
  json summary = json::object();
  for (const auto& [key, value] : r.summary.items()) summary[key] = cell_json(value);
  return json{{"command", r.command},
              {"version", version_string()},
              {"backend", r.backend},
              {"config", r.config},
              {"summary", summary},
              {"tables", tables}};
}

void emit(const RunReport& r, const std::string& format, const std::string& dir, std::ostream& out) {
  if (format == "json") {
    std::string text = report_json(r).dump(2) + "\n";
    if (dir.empty()) {
      out << text;
      return;
    }
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / (r.command + ".json"), std::ios::binary);
    require(static_cast<bool>(f), ErrorCode::config, "cannot write to " + dir);
    f << text;
    return;
  }
  std::vector<Table> tables = r.tables;
  if (!r.summary.empty()) tables.push_back(summary_table(r));
  if (dir.empty()) {
    for (const auto& t : tables) {
      out << "# " << t.name << "\n";
      write_csv(out, t);
    }
    return;
  }
  std::filesystem::create_directories(dir);
  for (const auto& t : tables) {
    std::ofstream f(std::filesystem::path(dir) / (r.command + "_" + t.name + ".csv"), std::ios::binary);
    require(static_cast<bool>(f), ErrorCode::config, "cannot write to " + dir);
    write_csv(f, t);
  }
}

json error_json(const std::string& code, const std::string& message) {
  return json{{"error", json{{"code", code}, {"message", message}}}};
}

}  // namespace ssm::cli
