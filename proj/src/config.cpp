#include "l2gec/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace l2gec::config {

namespace {

enum class Kind { integer, real, boolean, string, stages };

struct KeySpec {
  KeyInfo info;
  Kind kind;
};

std::string default_preps() {
  std::string s;
  for (const auto& p : masked::default_prepositions()) {
    if (!s.empty()) s += ',';
    s += p;
  }
  return s;
}

const std::vector<KeySpec>& specs() {
  static const std::vector<KeySpec> s = {
      {{"beam_width", "5", "candidates kept per sentence"}, Kind::integer},
      {{"stages", "spell,comma,o_ob,masked_prep,agreement", "stages to run, in order"}, Kind::stages},
      {{"max_iterations", "1", "passes over the stage list"}, Kind::integer},
      {{"workers", "1", "threads used by correct"}, Kind::integer},
      {{"spell.short_len", "4", "words up to this length use spell.short_d"}, Kind::integer},
      {{"spell.short_d", "1", "edit distance for short words"}, Kind::integer},
      {{"spell.max_d", "2", "edit distance for longer words"}, Kind::integer},
      {{"phonetic.code_d", "1", "edit distance between phonetic codes"}, Kind::integer},
      {{"masked.threshold", "1.0", "minimum log10 gain for a preposition swap"}, Kind::real},
      {{"masked.endpoint", "", "remote predictor URL; empty uses the language model"}, Kind::string},
      {{"masked.timeout_ms", "2000", "remote predictor timeout"}, Kind::integer},
      {{"masked.prepositions", default_preps(), "preposition candidates"}, Kind::string},
      {{"chains.min_gain", "0.1", "minimum log10 gain for an agreement fix"}, Kind::real},
      {{"eval.merge_window", "2", "primitive edits an extracted edit may span"}, Kind::integer},
      {{"eval.beta", "0.5", "F-measure beta"}, Kind::real},
      {{"lm.unk_logprob", "-7", "log10 probability of unknown words"}, Kind::real},
      {{"lexicon.min_count", "1", "drop dictionary words rarer than this"}, Kind::integer},
      {{"text.fold_yo", "false", "fold ё to е"}, Kind::boolean},
      {{"text.split_sentences", "true", "split input lines into sentences"}, Kind::boolean},
      {{"rules.comma", "true", "comma insertion rule"}, Kind::boolean},
      {{"rules.o_ob", "true", "о/об rule"}, Kind::boolean},
      {{"path.lm", "", "ARPA language model"}, Kind::string},
      {{"path.dict", "", "word frequency TSV"}, Kind::string},
      {{"path.morph", "", "morphology lexicon TSV"}, Kind::string},
      {{"path.tag_freq", "", "form/POS frequency TSV"}, Kind::string},
      {{"path.chains", "", "chain store TSV"}, Kind::string},
  };
  return s;
}

const KeySpec* find_spec(std::string_view key) {
  for (const auto& s : specs())
    if (s.info.key == key) return &s;
  return nullptr;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<long> to_long(std::string_view s) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

void validate(const KeySpec& spec, const std::string& value, std::size_t line) {
  bool ok = true;
  switch (spec.kind) {
    case Kind::integer: ok = to_long(value).has_value(); break;
    case Kind::real: ok = to_double(value).has_value(); break;
    case Kind::boolean: ok = to_bool(value).has_value(); break;
    case Kind::string: break;
    case Kind::stages:
      try {
        pipeline::parse_stages(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(spec.info.key + ": " + e.what(), line);
      }
      break;
  }
  if (!ok) throw ConfigError("bad value '" + value + "' for " + spec.info.key, line);
}

}  // namespace

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> out;
    for (const auto& s : specs()) out.push_back(s.info);
    return out;
  }();
  return keys;
}

GlobalConfig::GlobalConfig() {
  for (const auto& s : specs()) values_[s.info.key] = s.info.default_value;
}

void GlobalConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  load_stream(in);
}

void GlobalConfig::load_stream(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
    auto key = trim(std::string_view(t).substr(0, eq));
    auto value = trim(std::string_view(t).substr(eq + 1));
    const auto* spec = find_spec(key);
    if (!spec) throw ConfigError("unknown key '" + key + "'", lineno);
    validate(*spec, value, lineno);
    values_[key] = value;
  }
}

std::string GlobalConfig::env_name(std::string_view key) {
  std::string out = "L2GEC_";
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void GlobalConfig::load_env(const std::function<std::optional<std::string>(const std::string&)>& getenv) {
  for (const auto& s : specs()) {
    auto name = env_name(s.info.key);
    std::optional<std::string> v;
    if (getenv) {
      v = getenv(name);
    } else if (const char* raw = std::getenv(name.c_str())) {
      v = raw;
    }
    if (!v) continue;
    auto value = trim(*v);
    validate(s, value, 0);
    values_[s.info.key] = value;
  }
}

void GlobalConfig::set(const std::string& key, const std::string& value) {
  const auto* spec = find_spec(key);
  if (!spec) throw ConfigError("unknown key '" + key + "'", 0);
  validate(*spec, value, 0);
  values_[key] = value;
}

const std::string& GlobalConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'", 0);
  return it->second;
}

int GlobalConfig::get_int(const std::string& key) const { return static_cast<int>(*to_long(get(key))); }
double GlobalConfig::get_double(const std::string& key) const { return *to_double(get(key)); }
bool GlobalConfig::get_bool(const std::string& key) const { return *to_bool(get(key)); }

std::vector<std::string> GlobalConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

pipeline::PipelineConfig GlobalConfig::pipeline_config() const {
  pipeline::PipelineConfig c;
  int beam = get_int("beam_width");
  if (beam < 1) throw ConfigError("beam_width must be at least 1", 0);
  c.beam_width = static_cast<std::size_t>(beam);
  c.stages = pipeline::parse_stages(get("stages"));
  c.short_len = get_int("spell.short_len");
  c.short_d = get_int("spell.short_d");
  c.max_d = get_int("spell.max_d");
  if (c.short_d < 0 || c.max_d < 0 || c.max_d > 3 || c.short_d > 3)
    throw ConfigError("spell distances must lie in 0..3", 0);
  c.code_d = get_int("phonetic.code_d");
  c.masked_threshold = get_double("masked.threshold");
  c.prepositions.clear();
  for (auto& p : get_list("masked.prepositions")) c.prepositions.push_back(text::casefold(p));
  if (c.prepositions.empty()) throw ConfigError("masked.prepositions is empty", 0);
  c.min_gain = get_double("chains.min_gain");
  c.max_iterations = std::max(1, get_int("max_iterations"));
  c.split_sentences = get_bool("text.split_sentences");
  c.workers = static_cast<std::size_t>(std::max(1, get_int("workers")));
  c.rules.comma_rule_enabled = get_bool("rules.comma");
  c.rules.prep_rule_enabled = get_bool("rules.o_ob");
  c.tokenizer.fold_yo = get_bool("text.fold_yo");
  return c;
}

}  // namespace l2gec::config
