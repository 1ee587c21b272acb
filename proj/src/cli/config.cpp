#include "rawls/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rawls::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<std::uint64_t> to_uint(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || *end != '\0') return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

std::optional<double> to_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || *end != '\0') return std::nullopt;
  return v;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw ConfigError("invalid value '" + value + "' for key '" + key + "': expected " + what);
}

const std::vector<KeySpec> kCommon{
    {"seed", ValueType::uint, "master seed (u64)"},
    {"workers", ValueType::uint, "worker threads"},
    {"out", ValueType::text, "output path (default stdout)"},
    {"svg", ValueType::text, "optional SVG plot path"},
};

std::vector<KeySpec> with_common(std::vector<KeySpec> keys) {
  keys.insert(keys.end(), kCommon.begin(), kCommon.end());
  return keys;
}

}  // namespace

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::uint64_t RunConfig::uint(const std::string& key, std::uint64_t fallback) const {
  return optional_uint(key).value_or(fallback);
}

std::optional<std::uint64_t> RunConfig::optional_uint(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  const auto v = to_uint(it->second);
  if (!v) bad_value(key, it->second, "a nonnegative integer");
  return v;
}

double RunConfig::real(const std::string& key, double fallback) const {
  return optional_real(key).value_or(fallback);
}

std::optional<double> RunConfig::optional_real(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  const auto v = to_real(it->second);
  if (!v) bad_value(key, it->second, "a real number");
  return v;
}

std::vector<std::uint64_t> RunConfig::uint_list(const std::string& key,
                                                std::vector<std::uint64_t> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(it->second)) {
    const auto v = to_uint(item);
    if (!v) bad_value(key, it->second, "a comma-separated list of nonnegative integers");
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> RunConfig::text_list(const std::string& key,
                                              std::vector<std::string> fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : split_list(it->second);
}

void RunConfig::validate(const std::vector<KeySpec>& schema) const {
  for (const auto& [key, value] : values_) {
    const auto spec = std::find_if(schema.begin(), schema.end(),
                                   [&](const KeySpec& s) { return s.name == key; });
    if (spec == schema.end()) {
      throw ConfigError("unknown key '" + key + "' for subcommand '" + subcommand_ + "'");
    }
    switch (spec->type) {
      case ValueType::uint:
        (void)optional_uint(key);
        break;
      case ValueType::real:
        (void)optional_real(key);
        break;
      case ValueType::uint_list:
        (void)uint_list(key, {});
        break;
      case ValueType::text:
      case ValueType::text_list:
        break;
    }
  }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

const std::vector<KeySpec>& schema_for(const std::string& subcommand) {
  static const std::vector<KeySpec> recover = with_common({
      {"input", ValueType::text, "instance file: 'N D', N rows of D reals, one row of N reals"},
      {"N", ValueType::uint, "measurements when generating an instance"},
      {"D", ValueType::uint, "dimension when generating an instance"},
      {"k", ValueType::uint, "sparsity"},
      {"sigma", ValueType::real, "noise level when generating an instance"},
      {"design", ValueType::text, "gaussian | bernoulli"},
      {"n", ValueType::uint, "subset size (default round(0.6 min(N, D)))"},
      {"m", ValueType::uint, "subset count"},
  });
  static const std::vector<KeySpec> curve = with_common({
      {"sweep", ValueType::text, "over_N | over_k | over_n"},
      {"values", ValueType::uint_list, "sweep grid"},
      {"D", ValueType::uint, "dimension"},
      {"N", ValueType::uint, "measurements (fixed unless sweeping N)"},
      {"k", ValueType::uint, "sparsity (fixed unless sweeping k)"},
      {"sigma", ValueType::real, "noise standard deviation"},
      {"design", ValueType::text, "gaussian | bernoulli"},
      {"trials", ValueType::uint, "trials per sweep point"},
      {"methods", ValueType::text_list, "rawls, omp, randomp, lasso, irl1"},
      {"rawls_n", ValueType::uint, "RAWLS subset size override"},
      {"rawls_m", ValueType::uint, "RAWLS subset count"},
      {"lasso_lambda", ValueType::real, "LASSO weight (default sigma sqrt(2 ln D))"},
      {"lasso_max_iters", ValueType::uint, "ISTA iteration cap"},
      {"lasso_rel_tol", ValueType::real, "ISTA relative step tolerance"},
      {"irl1_outer", ValueType::uint, "IRL1 reweighting rounds"},
      {"irl1_epsilon", ValueType::real, "IRL1 stabilizer"},
      {"randomp_runs", ValueType::uint, "RandOMP runs"},
      {"randomp_temperature", ValueType::real, "RandOMP selection weight c"},
  });
  static const std::vector<KeySpec> bound = with_common({
      {"D", ValueType::uint, "dimension"},
      {"N", ValueType::uint, "measurements"},
      {"n_list", ValueType::uint_list, "subset sizes"},
      {"n_start", ValueType::uint, "first subset size when n_list is absent"},
      {"n_stop", ValueType::uint, "last subset size (inclusive)"},
      {"n_step", ValueType::uint, "subset size step"},
      {"m", ValueType::uint, "subsets per estimate"},
      {"theta", ValueType::text, "gaussian | unit_gaussian"},
      {"trials", ValueType::uint, "instances per subset size"},
  });
  static const std::vector<KeySpec> lemma = with_common({
      {"D", ValueType::uint, "dimension (>= 3)"},
      {"N", ValueType::uint, "rows in the averaged moment check"},
      {"n", ValueType::uint, "rows in the decomposition check (< D)"},
      {"trials", ValueType::uint, "Monte Carlo trials for the moment checks"},
      {"lemma1_trials", ValueType::uint, "instances for the decomposition check"},
  });
  if (subcommand == "recover") return recover;
  if (subcommand == "curve") return curve;
  if (subcommand == "bound") return bound;
  if (subcommand == "lemma-check") return lemma;
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

}  // namespace rawls::cli
