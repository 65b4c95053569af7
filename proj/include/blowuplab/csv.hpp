#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blowuplab::csv {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Schema {
  std::string id;
  std::vector<std::string> columns;
};

/// Registered schemas: linode_trace, linode_summary, amplitude, snapshot, sweep,
/// sweep_summary, diagnose, functionals, specfun, exponents, series_t, series_r.
const Schema& schema(std::string_view id);
const std::vector<Schema>& schemas();

using Row = std::vector<std::string>;

/// 12 significant digits.
std::string num(double v);
std::string num(long long v);

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

/// Writes header and rows; throws SchemaError (before touching the file) on a column-count mismatch.
void emit(const std::filesystem::path& path, const Schema& schema, const std::vector<Row>& rows);
std::string render(const Schema& schema, const std::vector<Row>& rows);

Table parse(std::string_view text);
Table read(const std::filesystem::path& path);

/// Table re-checked against a schema header.
Table read(const std::filesystem::path& path, const Schema& schema);

}  // namespace blowuplab::csv
