#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "l2gec/text.hpp"

namespace l2gec::morph {

// Universal POS tags.
enum class Pos { ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X };

std::string_view to_string(Pos pos);
std::optional<Pos> parse_pos(std::string_view s);

// Ordered by key so rendering is canonical.
using Features = std::map<std::string, std::string>;

bool is_known_feature(std::string_view key);

struct MorphEntry {
  std::string form;
  std::string lemma;
  Pos pos = Pos::X;
  Features feats;

  // "NOUN | Animacy=Inan | Case=Gen | Gender=Fem | Number=Plur"
  std::string tag() const;
  bool has(std::string_view key, std::string_view value) const;
  bool operator==(const MorphEntry&) const = default;
};

class MorphLexicon {
 public:
  // form<TAB>lemma<TAB>POS<TAB>Key=Val|Key=Val ('_' for none). Throws ParseError.
  static MorphLexicon read_tsv(std::istream& in);
  static MorphLexicon load(const std::filesystem::path& path);

  void add(MorphEntry entry);

  std::vector<MorphEntry> analyze(std::string_view form) const;
  std::vector<MorphEntry> analyze(const text::Token& token) const { return analyze(token.lower); }

  bool has_paradigm(std::string_view lemma, Pos pos) const;
  // Paradigm entries of (lemma, pos) in insertion order. Throws UnknownLemma.
  std::vector<MorphEntry> paradigm(std::string_view lemma, Pos pos) const;

  // Forms of (lemma, pos) whose features include every requested pair,
  // deduplicated in paradigm order. Throws UnknownLemma.
  std::vector<std::string> generate(std::string_view lemma, Pos pos, const Features& feats) const;

  // form<TAB>POS<TAB>count, used to break tagging ties.
  void read_tag_frequencies(std::istream& in);
  std::optional<std::uint64_t> tag_frequency(std::string_view form, Pos pos) const;
  bool has_tag_frequencies() const { return !tag_freq_.empty(); }

  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<MorphEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_form_;
  std::map<std::pair<std::string, Pos>, std::vector<std::size_t>> paradigms_;
  std::unordered_map<std::string, std::uint64_t> tag_freq_;  // "form\tPOS"
};

// Chooses one analysis per token.
class Tagger {
 public:
  virtual ~Tagger() = default;
  // One entry per token, aligned with sentence.tokens.
  virtual std::vector<MorphEntry> tag(const text::Sentence& sentence) const = 0;
};

// Dictionary tagger. Ambiguity is resolved by the tag-frequency table when
// loaded, otherwise by a fixed POS priority (closed classes first); ties keep
// lexicon order. Unknown words get X, punctuation PUNCT, numbers NUM.
class LexiconTagger : public Tagger {
 public:
  explicit LexiconTagger(const MorphLexicon& lexicon) : lexicon_(lexicon) {}
  std::vector<MorphEntry> tag(const text::Sentence& sentence) const override;
  MorphEntry tag_token(const text::Token& token) const;

 private:
  const MorphLexicon& lexicon_;
};

std::vector<MorphEntry> tag_sentence(const MorphLexicon& lexicon, const text::Sentence& sentence);

}  // namespace l2gec::morph
