#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "l2gec/text.hpp"

namespace l2gec::lex {

// Restricted Damerau-Levenshtein (optimal string alignment) distance over
// code points.
int osa_distance(std::u32string_view a, std::u32string_view b);
int osa_distance(std::string_view a, std::string_view b);

// All strings obtainable from `s` by deleting at most `max_deletes` code
// points, `s` itself included. Sorted and unique.
std::vector<std::u32string> deletion_variants(std::u32string_view s, int max_deletes);

// Unigram and bigram frequencies of lowercase word forms.
class FrequencyLexicon {
 public:
  void add(std::string_view word, std::uint64_t count = 1);
  void add_bigram(std::string_view w1, std::string_view w2, std::uint64_t count = 1);

  std::uint64_t count(std::string_view word) const;
  std::uint64_t bigram_count(std::string_view w1, std::string_view w2) const;
  bool contains(std::string_view word) const { return count(word) > 0; }
  // Tokens that are not words (punctuation, numbers) are always known.
  bool contains(const text::Token& token) const;

  std::size_t size() const { return words_.size(); }
  std::size_t bigram_size() const { return bigrams_.size(); }

  // Drops entries below min_count.
  void prune(std::uint64_t min_count);

  // (word, count) sorted by count desc, then word asc.
  std::vector<std::pair<std::string, std::uint64_t>> sorted_words() const;
  std::vector<std::pair<std::string, std::uint64_t>> sorted_bigrams() const;

  void write_tsv(std::ostream& out) const;          // word<TAB>count
  void write_bigrams_tsv(std::ostream& out) const;  // w1<SPACE>w2<TAB>count
  static FrequencyLexicon read_tsv(std::istream& in);
  void read_bigrams_tsv(std::istream& in);

 private:
  std::unordered_map<std::string, std::uint64_t> words_;
  std::unordered_map<std::string, std::uint64_t> bigrams_;
};

struct LexiconBuildOptions {
  std::uint64_t min_count = 1;
  text::TokenizerOptions tokenizer;
};

// Word tokens only; bigrams over directly adjacent word tokens.
FrequencyLexicon build_lexicon(const text::CorpusReader& corpus, const LexiconBuildOptions& opts = {});

// Maps each deletion variant (up to max_distance deletions) of every key to
// the keys it came from.
class DeletionIndex {
 public:
  DeletionIndex() = default;
  DeletionIndex(std::vector<std::u32string> keys, int max_distance);

  int max_distance() const { return max_distance_; }
  std::size_t size() const { return keys_.size(); }
  std::size_t variant_count() const { return postings_.size(); }
  const std::u32string& key(std::size_t i) const { return keys_[i]; }

  std::span<const std::uint32_t> postings(std::u32string_view variant) const;

  // (key index, distance) for every key within osa distance d of query,
  // ordered by key index. Requires d <= max_distance().
  std::vector<std::pair<std::uint32_t, int>> search(std::u32string_view query, int d) const;

 private:
  std::vector<std::u32string> keys_;
  std::unordered_map<std::u32string, std::vector<std::uint32_t>> postings_;
  int max_distance_ = 0;
};

struct Suggestion {
  std::string word;
  int distance = 0;
  std::uint64_t count = 0;

  bool operator==(const Suggestion&) const = default;
};

// Frequency lexicon with a deletion index over its words.
class LexiconIndex {
 public:
  LexiconIndex(FrequencyLexicon lexicon, int max_distance);

  const FrequencyLexicon& lexicon() const { return lexicon_; }
  const DeletionIndex& deletions() const { return index_; }
  int max_distance() const { return index_.max_distance(); }
  bool contains(const text::Token& token) const { return lexicon_.contains(token); }

  // Sorted by (distance asc, count desc, word asc).
  std::vector<Suggestion> lookup(std::string_view query, int d) const;

 private:
  FrequencyLexicon lexicon_;
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  DeletionIndex index_;
};

LexiconIndex build_index(const FrequencyLexicon& lexicon, int max_distance);
std::vector<Suggestion> lookup(const LexiconIndex& index, std::string_view query, int d);

}  // namespace l2gec::lex
