#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2gec/error.hpp"
#include "l2gec/pipeline.hpp"

namespace l2gec::config {

class ConfigError : public ParseError {
 public:
  using ParseError::ParseError;
};

struct KeyInfo {
  std::string key;
  std::string default_value;
  std::string help;
};

// Every recognized key with its default.
const std::vector<KeyInfo>& known_keys();

// Flat key/value settings. Later sources override earlier ones:
// defaults < file < L2GEC_* environment < explicit set() calls.
class GlobalConfig {
 public:
  GlobalConfig();

  // "key = value" lines, '#' starts a comment. Throws ConfigError on unknown
  // keys or lines without '='.
  void load_file(const std::filesystem::path& path);
  void load_stream(std::istream& in);
  // spell.max_d is read from L2GEC_SPELL_MAX_D. The getter defaults to getenv.
  void load_env(const std::function<std::optional<std::string>(const std::string&)>& getenv = {});
  // Throws ConfigError for unknown keys or values of the wrong type.
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  static std::string env_name(std::string_view key);

  pipeline::PipelineConfig pipeline_config() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace l2gec::config
