#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "l2gec/error.hpp"
#include "l2gec/morph.hpp"

using namespace l2gec;
using namespace l2gec::morph;

TEST_SUITE("morph") {

TEST_CASE("fixture loads with full paradigms") {
  const auto& lex = th::morph_fixture();
  CHECK(lex.size() > 300);
  CHECK(lex.paradigm("книга", Pos::NOUN).size() == 12);
  CHECK(lex.paradigm("учёба", Pos::NOUN).size() == 6);
  CHECK(lex.paradigm("новый", Pos::ADJ).size() == 26);
  CHECK(lex.paradigm("этот", Pos::DET).size() == 26);
  CHECK(lex.has_paradigm("читать", Pos::VERB));
  CHECK_FALSE(lex.has_paradigm("читать", Pos::NOUN));
}

TEST_CASE("analyze returns every reading") {
  const auto& lex = th::morph_fixture();
  auto a = lex.analyze("книги");
  std::set<std::string> tags;
  for (const auto& e : a) tags.insert(e.tag());
  CHECK(tags == std::set<std::string>{
                    "NOUN | Animacy=Inan | Case=Gen | Gender=Fem | Number=Sing",
                    "NOUN | Animacy=Inan | Case=Nom | Gender=Fem | Number=Plur",
                    "NOUN | Animacy=Inan | Case=Acc | Gender=Fem | Number=Plur",
                });
  CHECK(lex.analyze("Книги").size() == 0);  // expects lowercase
  CHECK(lex.analyze(text::make_token("Книги")).size() == 3);
  CHECK(lex.analyze("абракадабра").empty());
}

TEST_CASE("generate inflects by feature subset") {
  const auto& lex = th::morph_fixture();
  CHECK(lex.generate("книга", Pos::NOUN, {{"Case", "Loc"}, {"Number", "Sing"}}) == std::vector<std::string>{"книге"});
  CHECK(lex.generate("новый", Pos::ADJ, {{"Case", "Acc"}, {"Gender", "Fem"}}) == std::vector<std::string>{"новую"});
  CHECK(lex.generate("новый", Pos::ADJ, {{"Case", "Acc"}, {"Gender", "Masc"}, {"Animacy", "Anim"}}) ==
        std::vector<std::string>{"нового"});
  CHECK(lex.generate("учёба", Pos::NOUN, {{"Number", "Plur"}}).empty());
  CHECK_THROWS_AS(lex.generate("зебра", Pos::NOUN, {}), UnknownLemma);
  CHECK_THROWS_AS(lex.paradigm("книга", Pos::VERB), UnknownLemma);
}

TEST_CASE("malformed lexicon lines are rejected with line numbers") {
  auto line_of = [](const std::string& s) -> std::size_t {
    std::istringstream in(s);
    try {
      MorphLexicon::read_tsv(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("дом\tдом\tNOUN\tCase=Nom\n") == 0);
  CHECK(line_of("# comment\nдом\tдом\tNOUN\n") == 2);
  CHECK(line_of("дом\tдом\tNOUN\t_\nдом\tдом\tNOUNY\t_\n") == 2);
  CHECK(line_of("дом\tдом\tNOUN\tCase\n") == 1);
  CHECK(line_of("дом\tдом\tNOUN\tColour=Red\n") == 1);
}

TEST_CASE("tagger: priority, frequencies, unknowns") {
  const auto& lex = th::morph_fixture();
  LexiconTagger tagger(lex);
  auto s = text::tokenize("Что это, 5 кракозябр?");
  auto tags = tagger.tag(s);
  REQUIRE(tags.size() == 6);
  CHECK(tags[0].pos == Pos::SCONJ);  // SCONJ outranks PRON
  CHECK(tags[1].pos == Pos::PRON);   // PRON outranks DET
  CHECK(tags[2].pos == Pos::PUNCT);
  CHECK(tags[3].pos == Pos::NUM);
  CHECK(tags[4].pos == Pos::X);
  CHECK(tags[5].pos == Pos::PUNCT);

  MorphLexicon with_freq = lex;
  std::istringstream freq("что\tPRON\t10\nчто\tSCONJ\t3\n");
  with_freq.read_tag_frequencies(freq);
  CHECK(LexiconTagger(with_freq).tag(s)[0].pos == Pos::PRON);
  CHECK(with_freq.tag_frequency("что", Pos::PRON) == std::optional<std::uint64_t>(10));
}

TEST_CASE("tagger finds every preposition in the hand-tagged fixture") {
  const auto& lex = th::morph_fixture();
  LexiconTagger tagger(lex);
  auto lines = th::fixture_lines("adp_tagged.tsv");
  REQUIRE(lines.size() == 30);
  for (const auto& line : lines) {
    auto cols = th::split(line, '\t');
    std::set<std::size_t> expected;
    if (cols[1] != "-")
      for (const auto& i : th::split(cols[1], ',')) expected.insert(std::stoul(i));
    auto s = text::tokenize(cols[0]);
    auto tags = tagger.tag(s);
    std::set<std::size_t> got;
    for (std::size_t i = 0; i < tags.size(); ++i)
      if (tags[i].pos == Pos::ADP) got.insert(i);
    CHECK_MESSAGE(got == expected, cols[0]);
  }
}

TEST_CASE("worked-sentence forms") {
  const auto& lex = th::morph_fixture();
  auto a = lex.analyze("местах");
  REQUIRE(a.size() == 1);
  CHECK(a[0].pos == Pos::NOUN);
  CHECK(a[0].has("Case", "Loc"));
  CHECK(a[0].has("Number", "Plur"));
  CHECK(a[0].has("Gender", "Neut"));
  CHECK(lex.generate("место", Pos::NOUN, {{"Case", "Gen"}, {"Number", "Plur"}}) == std::vector<std::string>{"мест"});
  auto o = lex.analyze("о");
  REQUIRE(o.size() == 1);
  CHECK(o[0].pos == Pos::ADP);
  CHECK(lex.generate("место", Pos::NOUN, {{"Case", "Gen"}, {"Gender", "Fem"}}).empty());
  // analyze then generate returns the form itself
  for (const auto& e : lex.analyze("книгу"))
    CHECK(lex.generate(e.lemma, e.pos, e.feats) == std::vector<std::string>{"книгу"});
}

TEST_CASE("tagger edge cases") {
  LexiconTagger tagger(th::morph_fixture());
  CHECK(tagger.tag(text::tokenize("")).empty());
  for (const auto& t : tagger.tag(text::tokenize("бла кря фыр"))) CHECK(t.pos == Pos::X);
}

}  // TEST_SUITE
