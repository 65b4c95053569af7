#include "blowuplab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace blowuplab::csv {

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> all{
      {"linode_trace", {"t", "F1", "F1p", "F2"}},
      {"linode_summary", {"mu", "nu", "delta", "sign_changes", "final_sign"}},
      {"amplitude", {"t", "max_abs_u"}},
      {"snapshot", {"r", "u", "ut"}},
      {"sweep", {"eps", "T_est", "converged", "grid_dr"}},
      {"sweep_summary", {"slope", "intercept", "r2", "theory_exponent", "verdict"}},
      {"diagnose", {"check", "window", "fitted_constant", "pass", "detail"}},
      {"functionals", {"t", "G1", "G2", "F1", "F2", "F", "G", "L", "NL_p", "NL_q"}},
      {"specfun", {"xi", "t", "K", "log_K", "dK_dt", "status"}},
      {"exponents", {"delta", "alpha", "sigma", "pG", "qS", "qF", "lambda", "region", "lifespan_exponent"}},
      {"series_t", {"t", "value"}},
      {"series_r", {"r", "value"}},
  };
  return all;
}

const Schema& schema(std::string_view id) {
  for (const Schema& s : schemas())
    if (s.id == id) return s;
  throw SchemaError("unknown CSV schema '" + std::string(id) + "'");
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(long long v) { return std::to_string(v); }

namespace {

std::string quote(const std::string& f) {
  if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote(cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string render(const Schema& s, const std::vector<Row>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != s.columns.size())
      throw SchemaError("schema '" + s.id + "': row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                        " columns, expected " + std::to_string(s.columns.size()));
  }
  std::string out;
  append_row(out, s.columns);
  for (const Row& r : rows) append_row(out, r);
  return out;
}

void emit(const std::filesystem::path& path, const Schema& s, const std::vector<Row>& rows) {
  const std::string text = render(s, rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Table parse(std::string_view text) {
  Table t;
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> cur;
  std::string field;
  bool in_quotes = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      cur.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      cur.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(cur));
      cur.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    cur.push_back(std::move(field));
    lines.push_back(std::move(cur));
  }
  if (lines.empty()) throw SchemaError("CSV has no header");
  t.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.header.size())
      throw SchemaError("CSV row " + std::to_string(i) + " has " + std::to_string(lines[i].size()) + " columns");
    t.rows.push_back(std::move(lines[i]));
  }
  return t;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Table read(const std::filesystem::path& path, const Schema& s) {
  Table t = read(path);
  if (t.header != s.columns) throw SchemaError(path.string() + ": header does not match schema '" + s.id + "'");
  return t;
}

}  // namespace blowuplab::csv
