#include "blowuplab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace blowuplab::cli {

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what),
      line_(line) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"mu",  "nu",        "p",         "q",         "N",     "R",
                                             "a",   "b",         "eps",       "dr",        "ladder", "cfl",
                                             "threshold", "tmax", "tmax_cap", "safety", "snapshot_every", "seed"};
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, const std::string& src, int line, const std::string& key) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ConfigError(src, line, "value of '" + key + "' is not a finite number: '" + v + "'");
  return out;
}

long to_int(const std::string& v, const std::string& src, int line, const std::string& key) {
  long out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(src, line, "value of '" + key + "' is not an integer: '" + v + "'");
  return out;
}

std::vector<double> to_list(const std::string& v, const std::string& src, int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), src, line, key));
  if (out.empty()) throw ConfigError(src, line, "empty list for '" + key + "'");
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::string& src) {
  RunConfig cfg;
  cfg.raw = std::string(text);
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line = 0;
  const auto& keys = config_keys();
  while (std::getline(in, raw_line)) {
    ++line;
    std::string l = raw_line;
    if (auto h = l.find('#'); h != std::string::npos) l.resize(h);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ConfigError(src, line, "expected key=value, got '" + l + "'");
    const std::string key = trim(std::string_view(l).substr(0, eq));
    const std::string val = trim(std::string_view(l).substr(eq + 1));
    if (key.empty()) throw ConfigError(src, line, "missing key before '='");
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(src, line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(src, line, "duplicate key '" + key + "'");
    if (val.empty()) throw ConfigError(src, line, "missing value for '" + key + "'");

    ModelParams& p = cfg.params;
    if (key == "mu") p.mu = to_double(val, src, line, key);
    else if (key == "nu") p.nu = to_double(val, src, line, key);
    else if (key == "p") p.p = to_double(val, src, line, key);
    else if (key == "q") p.q = to_double(val, src, line, key);
    else if (key == "N") p.N = static_cast<int>(to_int(val, src, line, key));
    else if (key == "R") p.R = to_double(val, src, line, key);
    else if (key == "a") p.a = static_cast<int>(to_int(val, src, line, key));
    else if (key == "b") p.b = static_cast<int>(to_int(val, src, line, key));
    else if (key == "eps") cfg.eps_list = to_list(val, src, line, key);
    else if (key == "dr") cfg.dr = to_double(val, src, line, key);
    else if (key == "ladder") cfg.dr_ladder = to_list(val, src, line, key);
    else if (key == "cfl") cfg.cfl = to_double(val, src, line, key);
    else if (key == "threshold") cfg.threshold = to_double(val, src, line, key);
    else if (key == "tmax") cfg.t_max = to_double(val, src, line, key);
    else if (key == "tmax_cap") cfg.t_max_cap = to_double(val, src, line, key);
    else if (key == "safety") cfg.safety = to_double(val, src, line, key);
    else if (key == "snapshot_every") cfg.snapshot_every = to_double(val, src, line, key);
    else if (key == "seed") cfg.seed = static_cast<unsigned long long>(to_int(val, src, line, key));
  }

  if (cfg.eps_list.empty()) cfg.eps_list = {cfg.params.eps};
  cfg.params.eps = cfg.eps_list.front();
  try {
    for (double e : cfg.eps_list) {
      ModelParams probe = cfg.params;
      probe.eps = e;
      validate(probe);
    }
  } catch (const ParamError& e) {
    throw ConfigError(src, 0, e.what());
  }
  if (!(cfg.dr > 0.0)) throw ConfigError(src, 0, "dr > 0 required");
  for (double d : cfg.dr_ladder)
    if (!(d > 0.0)) throw ConfigError(src, 0, "ladder entries must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.9)) throw ConfigError(src, 0, "cfl must lie in (0, 0.9]");
  if (!(cfg.threshold > 0.0)) throw ConfigError(src, 0, "threshold > 0 required");
  if (!(cfg.t_max > 0.0)) throw ConfigError(src, 0, "tmax > 0 required");
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

std::string normalized(const RunConfig& c) {
  const ModelParams& p = c.params;
  std::ostringstream os;
  os << "mu=" << fmt(p.mu) << "\nnu=" << fmt(p.nu) << "\np=" << fmt(p.p) << "\nq=" << fmt(p.q) << "\nN=" << p.N
     << "\nR=" << fmt(p.R) << "\na=" << p.a << "\nb=" << p.b << "\neps=" << join(c.eps_list) << "\ndr=" << fmt(c.dr)
     << "\nladder=" << (c.dr_ladder.empty() ? join({2 * c.dr, c.dr}) : join(c.dr_ladder)) << "\ncfl=" << fmt(c.cfl)
     << "\nthreshold=" << fmt(c.threshold) << "\ntmax=" << fmt(c.t_max) << "\ntmax_cap=" << fmt(c.t_max_cap)
     << "\nsafety=" << fmt(c.safety) << "\nsnapshot_every=" << fmt(c.snapshot_every) << "\nseed=" << c.seed << "\n";
  return os.str();
}

}  // namespace blowuplab::cli
