#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blowuplab/exponents.hpp"

namespace blowuplab::cli {

/// Parse or validation failure; line is 0 when the error is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Flat key=value run configuration.
struct RunConfig {
  ModelParams params;
  std::vector<double> eps_list;  // eps may be a comma list for sweeps
  double dr = 0.005;
  std::vector<double> dr_ladder;  // empty: {2 dr, dr}
  double cfl = 0.45;
  double threshold = 1e8;
  double t_max = 200.0;
  double t_max_cap = 2000.0;
  double safety = 3.0;
  double snapshot_every = 0.0;
  unsigned long long seed = 42;
  std::string raw;  // bytes that were parsed
};

/// Keys accepted by the parser, in normalized output order.
const std::vector<std::string>& config_keys();

RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Every key with its effective value, one key=value per line.
std::string normalized(const RunConfig& cfg);

}  // namespace blowuplab::cli
