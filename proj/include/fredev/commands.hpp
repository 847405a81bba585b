#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fredev/config.hpp"

namespace fredev::commands {

using Cell = std::variant<cplx, double, long long, std::string>;

struct Column {
  enum class Kind { Complex, Real, Integer, Text };
  std::string name;
  Kind kind = Kind::Complex;
};

struct Table {
  std::string command;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  config::json summary = config::json::object();  // command-level results (winding, flags)
};

Table cmd_roots(const config::RunConfig& cfg);
Table cmd_det(const config::RunConfig& cfg);
Table cmd_evans(const config::RunConfig& cfg);
Table cmd_compare(const config::RunConfig& cfg);
Table cmd_locate(const config::RunConfig& cfg);
Table cmd_scan(const config::RunConfig& cfg);
Table cmd_converge(const config::RunConfig& cfg);

std::vector<std::string> command_names();
Table run(const std::string& command, const config::RunConfig& cfg);

std::string version();

/// Output document: header with version and resolved config, then the table.
std::string render_json(const Table& table, const config::RunConfig& cfg);
std::string render_csv(const Table& table, const config::RunConfig& cfg);
std::string render(const Table& table, const config::RunConfig& cfg);

/// Machine-readable error object.
std::string render_error(const std::string& kind, const std::string& message);

}  // namespace fredev::commands
