#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "l2gec/lexicon.hpp"

namespace l2gec::phon {

// Full-length Soundex-style code for a lowercase Russian word.
//
//   vowels а э и о у ы е ё ю я, and й  -> 0
//   б п -> 1    в ф -> 2    г к х -> 3    д т -> 4
//   ж ш щ ч -> 5    з с ц -> 6    л -> 7    м н -> 8    р -> 9
//
// ь and ъ and non-Cyrillic letters are dropped. A letter identical to the
// previous letter of the word adds no digit. No truncation.
// Throws EmptyCode when nothing in the word maps to a digit.
std::string encode(std::string_view word);
std::optional<std::string> try_encode(std::string_view word);

struct PhoneticCandidate {
  std::string word;
  int code_distance = 0;
  int osa_distance = 0;
  std::uint64_t count = 0;

  bool operator==(const PhoneticCandidate&) const = default;
};

// Code -> dictionary words, plus a deletion index over the codes themselves.
// Words without any encodable letter are not indexed.
class PhoneticIndex {
 public:
  static PhoneticIndex build(const lex::FrequencyLexicon& lexicon, int max_code_distance = 1);

  int max_code_distance() const { return codes_.max_distance(); }
  std::size_t code_count() const { return codes_.size(); }
  std::size_t word_count() const { return word_count_; }

  // Words filed under exactly this code, ascending.
  std::vector<std::string> words_for(std::string_view code) const;

  // Words whose code is within code_d of encode(word), reduced to those at
  // the minimal osa distance from `word`. Sorted by (osa, count desc, word).
  std::vector<PhoneticCandidate> candidates(std::string_view word, int code_d) const;

  // code<TAB>word1,word2,...
  void write_tsv(std::ostream& out) const;

 private:
  struct Posting {
    std::string word;
    std::u32string cps;
    std::uint64_t count;
  };
  std::vector<std::vector<Posting>> postings_;  // parallel to codes_ keys
  lex::DeletionIndex codes_;
  std::size_t word_count_ = 0;
};

std::vector<PhoneticCandidate> phonetic_candidates(const PhoneticIndex& index, std::string_view word,
                                                   int code_d = 1);

}  // namespace l2gec::phon
