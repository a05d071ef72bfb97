#include "cssr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cssr/errors.hpp"

namespace cssr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected a number, got '" + t + "'");
  }
  return v;
}

long long to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected an integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + t + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw ConfigError(key + ": expected a list like [0.4, 0.2]");
  }
  t = trim(t.substr(1, t.size() - 2));
  std::vector<double> out;
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  return out;
}

using Setter = std::function<void(SimulationConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.n_x", [](auto& c, auto& k, auto& v) { c.grid.n_x = static_cast<int>(to_int(k, v)); }},
      {"grid.l_x", [](auto& c, auto& k, auto& v) { c.grid.l_x = to_double(k, v); }},
      {"grid.m_y", [](auto& c, auto& k, auto& v) { c.grid.m_y = static_cast<int>(to_int(k, v)); }},
      {"physics.beta", [](auto& c, auto& k, auto& v) { c.beta = to_double(k, v); }},
      {"physics.epsilon", [](auto& c, auto& k, auto& v) { c.epsilon = to_double(k, v); }},
      {"flow.tau", [](auto& c, auto& k, auto& v) { c.flow.tau = to_double(k, v); }},
      {"flow.tol_energy", [](auto& c, auto& k, auto& v) { c.flow.tol_energy = to_double(k, v); }},
      {"flow.tol_residual", [](auto& c, auto& k, auto& v) { c.flow.tol_residual = to_double(k, v); }},
      {"flow.max_iters",
       [](auto& c, auto& k, auto& v) { c.flow.max_iters = static_cast<int>(to_int(k, v)); }},
      {"flow.seed_profile",
       [](auto& c, auto&, auto& v) { c.flow.seed_profile = parse_seed_profile(unquote(trim(v))); }},
      {"flow.seed_file", [](auto& c, auto&, auto& v) { c.flow.seed_file = unquote(trim(v)); }},
      {"flow.seed",
       [](auto& c, auto& k, auto& v) {
         const long long s = to_int(k, v);
         if (s < 0) throw ConfigError(k + ": must be nonnegative");
         c.flow.seed = static_cast<std::uint64_t>(s);
       }},
      {"time.dt", [](auto& c, auto& k, auto& v) { c.dt = to_double(k, v); }},
      {"time.t_final", [](auto& c, auto& k, auto& v) { c.t_final = to_double(k, v); }},
      {"time.snapshot_stride", [](auto& c, auto& k, auto& v) { c.snapshot_stride = to_double(k, v); }},
      {"sweep.epsilons", [](auto& c, auto& k, auto& v) { c.epsilons = to_list(k, v); }},
      {"sweep.threads",
       [](auto& c, auto& k, auto& v) {
         const long long n = to_int(k, v);
         if (n < 0) throw ConfigError(k + ": must be nonnegative");
         c.threads = static_cast<unsigned>(n);
       }},
      {"initial.center", [](auto& c, auto& k, auto& v) { c.initial_center = to_double(k, v); }},
      {"output.dir", [](auto& c, auto&, auto& v) { c.output_dir = unquote(trim(v)); }},
      {"output.write_fields", [](auto& c, auto& k, auto& v) { c.write_fields = to_bool(k, v); }},
  };
  return table;
}

}  // namespace

void SimulationConfig::validate() const {
  grid.validate();
  if (!std::isfinite(beta)) throw ConfigError("physics.beta: must be finite");
  if (!(epsilon > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  flow.validate();
  if (!(dt > 0.0)) throw ConfigError("time.dt: must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("time.t_final: must be nonnegative");
  if (!(snapshot_stride > 0.0)) throw ConfigError("time.snapshot_stride: must be positive");
  if (epsilons.empty()) throw ConfigError("sweep.epsilons: list is empty");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw ConfigError("sweep.epsilons: entries must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw ConfigError("sweep.epsilons: list must be strictly decreasing");
    }
  }
  if (!std::isfinite(initial_center)) throw ConfigError("initial.center: must be finite");
  if (output_dir.empty()) throw ConfigError("output.dir: must not be empty");
}

nlohmann::json SimulationConfig::to_json() const {
  return {
      {"grid.n_x", grid.n_x},
      {"grid.l_x", grid.l_x},
      {"grid.m_y", grid.m_y},
      {"physics.beta", beta},
      {"physics.epsilon", epsilon},
      {"flow.tau", flow.tau},
      {"flow.tol_energy", flow.tol_energy},
      {"flow.tol_residual", flow.tol_residual},
      {"flow.max_iters", flow.max_iters},
      {"flow.seed_profile", to_string(flow.seed_profile)},
      {"flow.seed_file", flow.seed_file},
      {"flow.seed", flow.seed},
      {"time.dt", dt},
      {"time.t_final", t_final},
      {"time.snapshot_stride", snapshot_stride},
      {"sweep.epsilons", epsilons},
      {"sweep.threads", threads},
      {"initial.center", initial_center},
      {"output.dir", output_dir},
      {"output.write_fields", write_fields},
  };
}

bool apply_setting(SimulationConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) return false;
  try {
    it->second(cfg, key, value);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(key, 0) == 0) throw;
    throw ConfigError(key + ": " + what);
  }
  return true;
}

ParsedConfig parse_config_text(const std::string& text, SimulationConfig base) {
  ParsedConfig out{std::move(base), {}};
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!apply_setting(out.config, key, value)) {
      out.warnings.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "' ignored");
    }
  }
  out.config.validate();
  return out;
}

ParsedConfig parse_config(const std::string& path, SimulationConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

}  // namespace cssr
