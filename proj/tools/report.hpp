#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ssm::cli {

using nlohmann::json;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row) { rows.push_back(std::move(row)); }
};

struct RunReport {
  std::string command;
  std::string backend;
  json config;
  json summary = json::object();
  std::vector<Table> tables;

  Table& table(std::string name, std::vector<std::string> columns);
};

std::string version_string();

// Shortest round-trip decimal; nan and inf spelled out.
std::string format_double(double x);
std::string csv_cell(const json& v);

void write_csv(std::ostream& out, const Table& t);
json report_json(const RunReport& r);

// Writes to out, or to files under dir when dir is non-empty (one CSV per
// table plus <command>_summary.csv, or <command>.json).
void emit(const RunReport& r, const std::string& format, const std::string& dir, std::ostream& out);

json error_json(const std::string& code, const std::string& message);

}  // namespace ssm::cli
