#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "l2gec/error.hpp"
#include "l2gec/m2.hpp"
#include "support/m2_oracle.hpp"

using namespace l2gec;
using namespace l2gec::m2;

namespace {

std::vector<AnnotatedSentence> parse(const std::string& s) {
  std::istringstream in(s);
  return parse_m2(in);
}

EditSpan span(std::size_t a, std::size_t b, std::string r) {
  EditSpan e;
  e.start = a;
  e.end = b;
  e.replacement = std::move(r);
  return e;
}

std::vector<std::string> random_tokens(std::mt19937& rng, int max_len) {
  static const std::vector<std::string> vocab{"а", "б", "в"};
  std::vector<std::string> out(rng() % (max_len + 1));
  for (auto& t : out) t = vocab[rng() % vocab.size()];
  return out;
}

std::vector<EditSpan> random_gold(std::mt19937& rng, std::size_t n) {
  std::vector<EditSpan> gold;
  std::size_t pos = 0;
  while (pos <= n) {
    if (rng() % 3 == 0) {
      std::size_t len = rng() % 3;
      if (pos + len > n) len = n - pos;
      auto r = random_tokens(rng, 2);
      std::string rep;
      for (const auto& t : r) rep += (rep.empty() ? "" : " ") + t;
      if (len == 0 && rep.empty()) {
        ++pos;
        continue;
      }
      gold.push_back(span(pos, pos + len, rep));
      pos += len + 1;
    } else {
      ++pos;
    }
  }
  return gold;
}

}  // namespace

TEST_SUITE("m2") {

TEST_CASE("metric arithmetic") {
  Counts c{1, 1, 3};
  CHECK(precision(c) == doctest::Approx(0.5));
  CHECK(recall(c) == doctest::Approx(0.25));
  CHECK(f_beta(precision(c), recall(c), 0.5) == doctest::Approx(0.4167).epsilon(1e-3));
  CHECK(precision(Counts{}) == 1.0);
  CHECK(recall(Counts{}) == 1.0);
  CHECK(f_beta(0.0, 0.0, 0.5) == 0.0);
  CHECK(std::abs(f_beta(0.6617, 0.1266, 0.5) - 0.3586) <= 0.0005);
  CHECK(std::abs(f_beta(0.6589, 0.1016, 0.5) - 0.3142) <= 0.0005);
}

TEST_CASE("f_beta properties") {
  for (double p : {0.1, 0.4, 0.9})
    for (double r : {0.2, 0.5, 0.8}) {
      CHECK(f_beta(p, r, 1.0) == doctest::Approx(2 * p * r / (p + r)));
      double f = f_beta(p, r, 0.5);
      CHECK(f >= std::min(p, r) - 1e-12);
      CHECK(f <= std::max(p, r) + 1e-12);
      if (p > r) CHECK(f > f_beta(p, r, 1.0));
    }
  CHECK(f_beta(0.7, 0.7, 0.5) == doctest::Approx(0.7));
}

TEST_CASE("parse M2 blocks") {
  auto s = parse(
      "S Я говорю о окне .\n"
      "A 2 3|||Prep|||об|||REQUIRED|||-NONE-|||0\n"
      "\n"
      "S Всё хорошо .\n"
      "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n"
      "\n"
      "S Он ушёл\n"
      "A 2 2|||Punct|||.|||REQUIRED|||-NONE-|||0\n"
      "A 1 2|||Del|||-NONE-|||REQUIRED|||-NONE-|||1\n"
      "\n"
      "S Без правок\n");
  REQUIRE(s.size() == 4);
  CHECK(s[0].source.size() == 5);
  REQUIRE(s[0].gold.at(0).size() == 1);
  CHECK(s[0].gold.at(0)[0].same_edit(span(2, 3, "об")));
  CHECK(s[0].gold.at(0)[0].type == "Prep");
  CHECK(s[1].gold.at(0).empty());
  CHECK(s[2].gold.size() == 2);
  CHECK(s[2].gold.at(1)[0].same_edit(span(1, 2, "")));
  CHECK(s[3].gold.at(0).empty());
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& s) -> std::size_t {
    try {
      parse(s);
    } catch (const M2ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("A 0 1|||x|||y|||REQUIRED|||-NONE-|||0\n") == 1);
  CHECK(line_of("S а б\nA 0 1|||x|||y\n") == 2);
  CHECK(line_of("S а б\nA 0 5|||x|||y|||REQUIRED|||-NONE-|||0\n") == 2);
  CHECK(line_of("S а б\nA 0 2|||x|||y|||REQUIRED|||-NONE-|||0\nA 1 2|||x|||z|||REQUIRED|||-NONE-|||0\n") == 3);
  CHECK(line_of("S а б\nQ что-то\n") == 2);
}

TEST_CASE("о/об correction scores perfectly") {
  auto gold = parse("S Я говорю о окне .\nA 2 3|||Prep|||об|||REQUIRED|||-NONE-|||0\n");
  auto hyp = split_tokens("Я говорю об окне .");
  auto edits = extract_edits(gold[0].source, hyp, gold[0].gold.at(0));
  REQUIRE(edits.size() == 1);
  CHECK(edits[0].same_edit(span(2, 3, "об")));
  auto r = score(gold, {hyp});
  CHECK(r.counts.tp == 1);
  CHECK(r.counts.fp == 0);
  CHECK(r.counts.fn == 0);
  CHECK(r.f == 1.0);
  auto untouched = score(gold, {gold[0].source});
  CHECK(untouched.counts.fn == 1);
  CHECK(untouched.precision == 1.0);
  CHECK(untouched.recall == 0.0);
  CHECK_THROWS_AS(score(gold, {}), LengthMismatch);
}

TEST_CASE("merge window follows the gold segmentation") {
  std::vector<std::string> src{"а", "б", "в"}, hyp{"х", "у", "в"};
  auto joined = extract_edits(src, hyp, {span(0, 2, "х у")});
  REQUIRE(joined.size() == 1);
  CHECK(joined[0].same_edit(span(0, 2, "х у")));
  auto apart = extract_edits(src, hyp, {span(0, 1, "х"), span(1, 2, "у")});
  CHECK(apart.size() == 2);
  auto none = extract_edits(src, hyp, {});
  CHECK(none.size() == 1);  // fewest edits when nothing matches
  CHECK(extract_edits(src, hyp, {span(0, 2, "х у")}, 1).size() == 2);
}

TEST_CASE("annotator chosen per sentence") {
  auto gold = parse(
      "S а б в\n"
      "A 0 1|||x|||г|||REQUIRED|||-NONE-|||0\n"
      "A 2 3|||x|||д|||REQUIRED|||-NONE-|||1\n");
  auto r = score(gold, {split_tokens("а б д")});
  CHECK(r.sentences[0].annotator == 1);
  CHECK(r.counts.tp == 1);
  std::ostringstream js;
  write_json(js, r);
  CHECK(js.str().find("\"annotator\": 1") != std::string::npos);
}

TEST_CASE("extraction agrees with exhaustive alignment search") {
  std::mt19937 rng(5);
  int cases = 0;
  while (cases < 300) {
    auto src = random_tokens(rng, 5);
    auto hyp = random_tokens(rng, 5);
    auto gold = random_gold(rng, src.size());
    auto got = extract_edits(src, hyp, gold);
    auto all = oracle::all_edit_sets(src, hyp, 2);
    std::size_t best_tp = 0;
    for (const auto& e : all) best_tp = std::max(best_tp, count_matches(e, gold));
    std::size_t min_edits = SIZE_MAX;
    for (const auto& e : all)
      if (count_matches(e, gold) == best_tp) min_edits = std::min(min_edits, count_distinct(e));
    CHECK(count_matches(got, gold) == best_tp);
    CHECK(count_distinct(got) == min_edits);
    bool found = std::any_of(all.begin(), all.end(), [&](const oracle::Edits& e) {
      if (e.size() != got.size()) return false;
      for (std::size_t k = 0; k < e.size(); ++k)
        if (!e[k].same_edit(got[k])) return false;
      return true;
    });
    if (!found) {
      std::string msg;
      for (auto& t : src) msg += t + " ";
      msg += "-> ";
      for (auto& t : hyp) msg += t + " ";
      msg += "| got ";
      for (auto& e : got) msg += "(" + std::to_string(e.start) + "," + std::to_string(e.end) + ",'" + e.replacement + "')";
      MESSAGE(msg);
    }
    CHECK(found);
    ++cases;
  }
}

TEST_CASE("identity and о учёбе") {
  auto src = split_tokens("о учёбе");
  CHECK(extract_edits(src, src, {span(0, 1, "об")}).empty());
  auto got = extract_edits(src, split_tokens("об учёбе"), {span(0, 1, "об")});
  REQUIRE(got.size() == 1);
  CHECK(got[0].same_edit(span(0, 1, "об")));
  CHECK(count_matches(got, {span(0, 1, "об")}) == 1);
}

}  // TEST_SUITE
