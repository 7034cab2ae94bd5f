#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "l2gec/text.hpp"

namespace l2gec::lm {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";
inline constexpr int kMaxOrder = 3;

using WordId = std::uint32_t;
inline constexpr WordId kUnkId = 0;
inline constexpr WordId kBosId = 1;
inline constexpr WordId kEosId = 2;

class Vocabulary {
 public:
  Vocabulary();
  WordId add(std::string_view word);
  // kUnkId for unknown words.
  WordId find(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
};

template <std::size_t N>
using Gram = std::array<WordId, N>;

struct GramHash {
  template <std::size_t N>
  std::size_t operator()(const Gram<N>& g) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (WordId w : g) {
      h ^= w;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

template <std::size_t N, class V>
using GramMap = std::unordered_map<Gram<N>, V, GramHash>;

// Raw n-gram counts over BOS BOS w1 .. wk EOS padded sentences.
class NGramCounts {
 public:
  void add_sentence(std::span<const std::string> words);

  // n-gram given as space separated words, e.g. "а б" or "<s> а".
  std::uint64_t count(std::string_view ngram) const;
  std::uint64_t total_unigrams() const;
  std::size_t sentences() const { return sentences_; }
  std::size_t distinct(int order) const;

  const Vocabulary& vocab() const { return vocab_; }
  const GramMap<1, std::uint64_t>& unigrams() const { return uni_; }
  const GramMap<2, std::uint64_t>& bigrams() const { return bi_; }
  const GramMap<3, std::uint64_t>& trigrams() const { return tri_; }

  // "ngram<TAB>count" lines sorted by the n-gram string (byte order).
  void write_tsv(std::ostream& out) const;

 private:
  Vocabulary vocab_;
  GramMap<1, std::uint64_t> uni_;
  GramMap<2, std::uint64_t> bi_;
  GramMap<3, std::uint64_t> tri_;
  std::size_t sentences_ = 0;
};

// Counts every sentence of the corpus on lowercased tokens (punctuation included).
// Throws EmptyCorpus when the corpus yields no sentences.
NGramCounts count_ngrams(const text::CorpusReader& corpus, const text::TokenizerOptions& opts = {});

struct ArpaEntry {
  double logprob = 0.0;
  double backoff = 0.0;
  bool has_backoff = false;
};

struct KnOptions {
  double unk_logprob = -7.0;
};

class NGramModel {
 public:
  int order() const { return order_; }
  const Vocabulary& vocab() const { return vocab_; }
  double unk_logprob() const { return unk_logprob_; }
  // Absolute discounts D1..D3 (zero for imported models).
  const std::array<double, kMaxOrder>& discounts() const { return discounts_; }

  WordId id(std::string_view word) const { return vocab_.find(word); }

  // log10 p(w | context); context holds the preceding words, oldest first.
  double logprob(std::span<const WordId> context, WordId w) const;
  double logprob(std::span<const std::string> context, std::string_view w) const;

  // Sum of log10 p(w_i | w_{i-2} w_{i-1}) over the BOS-padded, EOS-terminated
  // sequence of lowercased words.
  double score(std::span<const std::string> lower_words) const;
  double score(const text::Sentence& sentence) const;

  std::size_t ngram_count(int n) const;

  void export_arpa(std::ostream& out) const;
  // Throws ArpaParseError (with line number) on malformed input.
  static NGramModel import_arpa(std::istream& in, const KnOptions& opts = {});

 private:
  friend NGramModel estimate_kn(const NGramCounts& counts, const KnOptions& opts);

  const ArpaEntry* find1(WordId w) const;
  const ArpaEntry* find2(WordId a, WordId b) const;

  int order_ = kMaxOrder;
  Vocabulary vocab_;
  double unk_logprob_ = -7.0;
  std::array<double, kMaxOrder> discounts_{};
  std::vector<ArpaEntry> uni_;
  std::vector<bool> has_uni_;
  GramMap<2, ArpaEntry> bi_;
  GramMap<3, ArpaEntry> tri_;
};

// Interpolated Kneser-Ney with one discount per order, D = n1 / (n1 + 2 n2)
// computed on the adjusted counts of that order. The highest order and
// n-grams starting with BOS use raw counts; other lower-order n-grams use
// continuation counts. The unigram level interpolates with a uniform
// distribution over the vocabulary and EOS; <unk> receives the fixed
// probability 10^unk_logprob and the rest is scaled by 1 - 10^unk_logprob.
// Throws DegenerateCounts when an order has no singleton n-grams.
NGramModel estimate_kn(const NGramCounts& counts, const KnOptions& opts = {});

}  // namespace l2gec::lm
