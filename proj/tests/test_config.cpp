#include <doctest.h>

#include <map>
#include <sstream>

#include "l2gec/config.hpp"

using namespace l2gec;
using namespace l2gec::config;

TEST_SUITE("config") {

TEST_CASE("defaults") {
  GlobalConfig c;
  CHECK(c.get_int("beam_width") == 5);
  CHECK(c.get_double("masked.threshold") == 1.0);
  CHECK(c.get_bool("text.split_sentences"));
  CHECK(c.get_list("masked.prepositions").size() == 25);
  auto p = c.pipeline_config();
  CHECK(p.beam_width == 5);
  CHECK(p.stages == pipeline::default_stages());
  CHECK(p.max_d == 2);
  CHECK(p.min_gain == doctest::Approx(0.1));
  for (const auto& k : known_keys()) CHECK_NOTHROW(c.get(k.key));
}

TEST_CASE("file, env and set layer in order") {
  GlobalConfig c;
  std::istringstream file(
      "# comment\n"
      "beam_width = 3\n"
      "spell.max_d = 1   # trailing comment\n"
      "\n"
      "stages = spell,comma\n");
  c.load_stream(file);
  CHECK(c.get_int("beam_width") == 3);
  CHECK(c.get_int("spell.max_d") == 1);

  std::map<std::string, std::string> env{{"L2GEC_SPELL_MAX_D", "2"}, {"L2GEC_RULES_COMMA", "false"}};
  c.load_env([&](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  });
  CHECK(c.get_int("spell.max_d") == 2);
  CHECK_FALSE(c.get_bool("rules.comma"));
  CHECK(c.get_int("beam_width") == 3);

  c.set("beam_width", "7");
  auto p = c.pipeline_config();
  CHECK(p.beam_width == 7);
  CHECK(p.stages == std::vector<pipeline::Stage>{pipeline::Stage::spell, pipeline::Stage::comma});
  CHECK_FALSE(p.rules.comma_rule_enabled);
}

TEST_CASE("env names") {
  CHECK(GlobalConfig::env_name("spell.max_d") == "L2GEC_SPELL_MAX_D");
  CHECK(GlobalConfig::env_name("beam_width") == "L2GEC_BEAM_WIDTH");
}

TEST_CASE("bad input is rejected") {
  GlobalConfig c;
  CHECK_THROWS_AS(c.set("no.such.key", "1"), ConfigError);
  CHECK_THROWS_AS(c.set("beam_width", "five"), ConfigError);
  CHECK_THROWS_AS(c.set("text.fold_yo", "maybe"), ConfigError);
  CHECK_THROWS_AS(c.set("stages", "spell,nope"), ConfigError);
  std::istringstream no_eq("beam_width 3\n");
  CHECK_THROWS_AS(c.load_stream(no_eq), ConfigError);
  std::istringstream unknown("\nfoo = 1\n");
  try {
    c.load_stream(unknown);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
}

}  // TEST_SUITE
