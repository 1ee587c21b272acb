#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rawls::cli {

/// Usage or configuration problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { uint, real, text, uint_list, text_list };

struct KeySpec {
  std::string name;
  ValueType type;
  std::string help;
};

/// Flat key/value configuration for one subcommand.
class RunConfig {
 public:
  explicit RunConfig(std::string subcommand = {}) : subcommand_(std::move(subcommand)) {}

  const std::string& subcommand() const { return subcommand_; }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string text(const std::string& key, const std::string& fallback) const;
  std::uint64_t uint(const std::string& key, std::uint64_t fallback) const;
  std::optional<std::uint64_t> optional_uint(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  std::optional<double> optional_real(const std::string& key) const;
  std::vector<std::uint64_t> uint_list(const std::string& key,
                                       std::vector<std::uint64_t> fallback) const;
  std::vector<std::string> text_list(const std::string& key,
                                     std::vector<std::string> fallback) const;

  /// Rejects keys missing from `schema` and values that do not parse as the
  /// declared type. The message names the offending key.
  void validate(const std::vector<KeySpec>& schema) const;

 private:
  std::string subcommand_;
  std::map<std::string, std::string> values_;
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Keys accepted by each subcommand ("recover", "curve", "bound", "lemma-check").
const std::vector<KeySpec>& schema_for(const std::string& subcommand);

}  // namespace rawls::cli
