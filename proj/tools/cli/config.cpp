#include "cli/config.hpp"

#include "surfspline/text.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace surfspline::cli {

RunConfig::RunConfig(std::string command, std::vector<KeySpec> schema)
    : command_(std::move(command)), schema_(std::move(schema)) {
  for (const KeySpec& k : schema_) values_[k.name] = k.default_value;
}

const KeySpec& RunConfig::spec(const std::string& key) const {
  for (const KeySpec& k : schema_) {
    if (k.name == key) return k;
  }
  throw ConfigError("unknown key '" + key + "' for command " + command_);
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
  try {
    spec(key);
  } catch (const ConfigError&) {
    throw ConfigError(origin + ": unknown key '" + key + "' for command " + command_);
  }
  values_[key] = value;
  explicit_[key] = true;
}

bool RunConfig::is_default(const std::string& key) const {
  spec(key);
  return !explicit_.count(key);
}

std::string RunConfig::str(const std::string& key) const {
  spec(key);
  return values_.at(key);
}

double RunConfig::number(const std::string& key) const {
  try {
    return parse_double(str(key), key);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

int RunConfig::integer(const std::string& key) const {
  try {
    return static_cast<int>(parse_int(str(key), key));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::uint64_t RunConfig::seed() const {
  const std::string text = str("seed");
  try {
    const long long v = parse_int(text, "seed");
    if (v < 0) throw ConfigError("seed must be non-negative");
    return static_cast<std::uint64_t>(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

bool RunConfig::flag(const std::string& key) const {
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + v + "'");
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  try {
    for (const std::string& field : split(str(key), ',')) out.push_back(parse_double(field, key));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return out;
}

std::string RunConfig::resolved_text(bool with_out) const {
  std::ostringstream out;
  out << "# resolved " << command_ << " configuration\n";
  for (const KeySpec& k : schema_) {
    if (!with_out && k.name == "out") continue;
    out << k.name << " = " << values_.at(k.name) << '\n';
  }
  return out.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(resolved_text(false))));
  return buf;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(key, std::string(trim(body.substr(eq + 1))));
  }
  return out;
}

RunConfig resolve_config(const std::string& command, const std::vector<KeySpec>& schema,
                         const Overrides& overrides) {
  RunConfig cfg(command, schema);
  if (!overrides.config_path.empty()) {
    std::ifstream in(overrides.config_path);
    if (!in) throw ConfigError("cannot read config file '" + overrides.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::vector<std::pair<std::string, std::string>> entries;
    try {
      entries = parse_config_text(buf.str());
    } catch (const ConfigError& e) {
      throw ConfigError(overrides.config_path + ": " + e.what());
    }
    for (const auto& [k, v] : entries) cfg.set(k, v, overrides.config_path);
  }
  if (!overrides.out_flag) {
    if (const char* env = std::getenv("SURFSPLINE_OUT"); env && *env) cfg.set("out", env, "SURFSPLINE_OUT");
  }
  for (const auto& [k, v] : overrides.assignments) cfg.set(k, v, "command line");
  return cfg;
}

}  // namespace surfspline::cli
