#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "l2gec/beam.hpp"
#include "l2gec/morph.hpp"
#include "l2gec/ngram.hpp"
#include "l2gec/text.hpp"

namespace l2gec::chains {

enum class Relation { obl, nmod, amod, nummod, case_, advmod, unk };

std::string_view to_string(Relation rel);
Relation parse_relation(std::string_view s);  // unk for unrecognized labels

// A two- or three-word window with exactly one noun. The head word is kept as
// a lowercase surface form; the others are replaced by their tags.
struct Chain {
  std::string root;
  Relation rel = Relation::unk;
  std::vector<std::string> dep_tags;
  int arity = 0;

  // Token positions in the sentence the chain came from.
  std::size_t start = 0;
  std::size_t root_index = 0;
  std::size_t noun_index = 0;
  std::vector<std::size_t> dep_indices;

  // root<TAB>rel<TAB>tag1;tag2
  std::string key() const;
};

// Contiguous windows of 2 and 3 word tokens holding exactly one NOUN. If the
// window has a governor (ADP, VERB, ADV or NUM) the governor closest before
// the noun, else closest after it, is the head; otherwise the noun is.
// Relation comes from the POS of the head (or of the first non-noun word when
// the noun is the head): ADP case, ADJ/DET amod, NUM nummod, ADV obl.
std::vector<Chain> extract_chains(const text::Sentence& sentence, std::span<const morph::MorphEntry> tags);
std::vector<Chain> extract_chains(const morph::MorphLexicon& lexicon, const text::Sentence& sentence);

class ChainStore {
 public:
  void add(const std::string& key, std::uint64_t count = 1);
  void add(const Chain& chain) { add(chain.key()); }
  std::uint64_t count(const std::string& key) const;
  bool contains(const Chain& chain) const { return count(chain.key()) > 0; }
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  // root<TAB>rel<TAB>tag1;tag2<TAB>count, sorted by key.
  void write_tsv(std::ostream& out) const;
  static ChainStore read_tsv(std::istream& in);

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

ChainStore build_store(const text::CorpusReader& corpus, const morph::MorphLexicon& lexicon,
                       const text::TokenizerOptions& opts = {});

struct AgreementOptions {
  double min_gain = 0.1;
};

// Flags chains missing from the store and tries noun forms over case and
// number (and adjective/determiner forms in amod chains) whose chain is in
// the store. The best variant is substituted when its LM gain exceeds
// min_gain. At most one substitution per flagged chain.
beam::CandidateBeam correct_agreement(const ChainStore& store, const lm::NGramModel& model,
                                      const morph::MorphLexicon& lexicon, const beam::CandidateBeam& beam,
                                      const AgreementOptions& opts = {});

}  // namespace l2gec::chains
