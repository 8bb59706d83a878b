#pragma once

#include "surfspline/errors.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace surfspline::cli {

/// Bad configuration: unknown key, malformed value, missing file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct KeySpec {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Resolved key=value configuration for one command. Every key has a
/// schema entry; lookups of undeclared keys are programming errors.
class RunConfig {
 public:
  RunConfig(std::string command, std::vector<KeySpec> schema);

  const std::string& command() const { return command_; }
  const std::vector<KeySpec>& schema() const { return schema_; }

  /// Applies one assignment; throws ConfigError for keys not in the schema.
  void set(const std::string& key, const std::string& value, const std::string& origin);
  bool is_default(const std::string& key) const;

  std::string str(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t seed() const;
  bool flag(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  /// Every key in schema order as "key=value" lines; `with_out` controls
  /// whether the output directory is included.
  std::string resolved_text(bool with_out = true) const;
  /// FNV-1a over resolved_text(false), hex.
  std::string hash() const;

 private:
  const KeySpec& spec(const std::string& key) const;

  std::string command_;
  std::vector<KeySpec> schema_;
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> explicit_;
};

/// Parses "key = value" lines; '#' starts a comment. Line-numbered errors.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

std::uint64_t fnv1a(const std::string& text);

struct Overrides {
  std::string config_path;  // empty: defaults only
  std::vector<std::pair<std::string, std::string>> assignments;  // from flags / key=value args
  bool out_flag = false;
};

/// Precedence: flags > SURFSPLINE_OUT (only when --out is absent) > config
/// file > defaults.
RunConfig resolve_config(const std::string& command, const std::vector<KeySpec>& schema,
                         const Overrides& overrides);

}  // namespace surfspline::cli
