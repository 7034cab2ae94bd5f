#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "l2gec/lexicon.hpp"

using namespace l2gec;
using namespace l2gec::lex;

namespace {

// Memoized recursion over the edit definition; only for short strings.
int osa_bruteforce(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == 0) return static_cast<int>(j);
    if (j == 0) return static_cast<int>(i);
    int& m = memo[i][j];
    if (m >= 0) return m;
    int best = std::min(go(i - 1, j) + 1, go(i, j - 1) + 1);
    best = std::min(best, go(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1));
    if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) best = std::min(best, go(i - 2, j - 2) + 1);
    return m = best;
  };
  return go(a.size(), b.size());
}

std::u32string random_word(std::mt19937& rng, const std::u32string& alphabet, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
  std::u32string w;
  int n = len(rng);
  for (int i = 0; i < n; ++i) w += alphabet[ch(rng)];
  return w;
}

}  // namespace

TEST_SUITE("lexicon") {

TEST_CASE("osa distance on hand examples") {
  CHECK(osa_distance("", "") == 0);
  CHECK(osa_distance("кот", "кот") == 0);
  CHECK(osa_distance("кот", "кит") == 1);
  CHECK(osa_distance("кот", "окт") == 1);      // transposition
  CHECK(osa_distance("кот", "ко") == 1);
  CHECK(osa_distance("ca", "abc") == 3);       // 2 under unrestricted Damerau
  CHECK(osa_distance("пирикрасут", "перекрасят") == 3);
  CHECK(osa_distance("", "абв") == 3);
}

TEST_CASE("osa distance properties on random strings") {
  std::mt19937 rng(7);
  const std::u32string alpha = U"абвг";
  for (int k = 0; k < 2000; ++k) {
    auto a = random_word(rng, alpha, 0, 6);
    auto b = random_word(rng, alpha, 0, 6);
    int d = osa_distance(a, b);
    CHECK(d == osa_distance(b, a));
    CHECK(d == osa_bruteforce(a, b));
    CHECK(d >= static_cast<int>(std::max(a.size(), b.size()) - std::min(a.size(), b.size())));
    CHECK(d <= static_cast<int>(std::max(a.size(), b.size())));
    CHECK((d == 0) == (a == b));
  }
}

TEST_CASE("deletion variants") {
  auto v = deletion_variants(U"абв", 1);
  std::set<std::u32string> got(v.begin(), v.end());
  CHECK(got == std::set<std::u32string>{U"абв", U"бв", U"ав", U"аб"});
  CHECK(deletion_variants(U"аа", 2).size() == 3);  // аа, а, empty
}

TEST_CASE("build dictionary matches a hand tally") {
  auto corpus = text::CorpusReader::from_lines({"Мама мыла раму.", "мама, мама!", "Рама 5 раз"});
  auto lex = build_lexicon(corpus);
  CHECK(lex.count("мама") == 3);
  CHECK(lex.count("мыла") == 1);
  CHECK(lex.count("раму") == 1);
  CHECK(lex.count("рама") == 1);
  CHECK(lex.count("раз") == 1);
  CHECK(lex.count("5") == 0);
  CHECK(lex.count(",") == 0);
  CHECK(lex.size() == 5);
  CHECK(lex.bigram_count("мама", "мыла") == 1);
  CHECK(lex.bigram_count("мама", "мама") == 0);  // comma in between
  CHECK(lex.bigram_count("рама", "раз") == 0);   // number in between
  std::ostringstream out;
  lex.write_tsv(out);
  CHECK(out.str() == "мама\t3\nмыла\t1\nраз\t1\nрама\t1\nраму\t1\n");
}

TEST_CASE("dictionary TSV round trip and pruning") {
  FrequencyLexicon lex;
  lex.add("б", 2);
  lex.add("а", 2);
  lex.add("в", 1);
  std::stringstream io;
  lex.write_tsv(io);
  auto back = FrequencyLexicon::read_tsv(io);
  CHECK(back.sorted_words() == lex.sorted_words());
  back.prune(2);
  CHECK(back.size() == 2);
  CHECK_FALSE(back.contains("в"));
  CHECK(back.contains(text::make_token(",")));
}

TEST_CASE("lookup order and distance bound") {
  FrequencyLexicon lex;
  lex.add("кот", 5);
  lex.add("кит", 9);
  lex.add("кота", 2);
  lex.add("код", 9);
  lex.add("слон", 1);
  LexiconIndex idx(lex, 2);
  auto r = idx.lookup("кот", 1);
  std::vector<std::string> words;
  for (const auto& s : r) words.push_back(s.word);
  CHECK(words == std::vector<std::string>{"кот", "кит", "код", "кота"});
  CHECK(r[0].distance == 0);
  CHECK(r[1].distance == 1);
  CHECK(idx.lookup("кот", 0).size() == 1);
  CHECK(idx.lookup("слоны", 1).front().word == "слон");
  CHECK_THROWS(idx.lookup("кот", 3));
}

TEST_CASE("index lookup equals brute-force filter") {
  std::mt19937 rng(11);
  const std::u32string alpha = U"абвгдеж";
  for (int dict = 0; dict < 5; ++dict) {
    FrequencyLexicon lex;
    for (int i = 0; i < 200; ++i) lex.add(text::to_utf8(random_word(rng, alpha, 1, 7)), 1 + rng() % 5);
    LexiconIndex idx(lex, 2);
    for (int q = 0; q < 100; ++q) {
      auto query = random_word(rng, alpha, 0, 8);
      for (int d = 0; d <= 2; ++d) {
        std::set<std::string> expect;
        for (const auto& [w, c] : lex.sorted_words())
          if (osa_bruteforce(text::to_u32(w), query) <= d) expect.insert(w);
        std::set<std::string> got;
        for (const auto& s : idx.lookup(text::to_utf8(query), d)) got.insert(s.word);
        CHECK(got == expect);
      }
    }
  }
}

TEST_CASE("small hand cases") {
  CHECK(osa_distance("кот", "кто") == 1);
  auto v = deletion_variants(U"аб", 1);
  CHECK(std::set<std::u32string>(v.begin(), v.end()) == std::set<std::u32string>{U"аб", U"а", U"б"});
  FrequencyLexicon lex;
  lex.add("перекрасят", 1);
  lex.add("аб", 1);
  LexiconIndex idx(lex, 2);
  CHECK(idx.lookup("пирикрасут", 2).empty());  // distance 3 is out of reach
  CHECK(idx.lookup("аб", 0) == std::vector<Suggestion>{{"аб", 0, 1}});
  CHECK(LexiconIndex(lex, 0).deletions().variant_count() == 2);
  CHECK(LexiconIndex(lex, 1).deletions().variant_count() > 2);
  CHECK(lex.contains(text::tokenize("42").tokens[0]));
  CHECK_FALSE(lex.contains(text::make_token("кракозябра")));
}

}  // TEST_SUITE
