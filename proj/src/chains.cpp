#include "l2gec/chains.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <set>

#include "l2gec/error.hpp"

namespace l2gec::chains {

using morph::Pos;

namespace {

bool is_governor(Pos p) { return p == Pos::ADP || p == Pos::VERB || p == Pos::ADV || p == Pos::NUM; }

Relation relation_for(Pos p) {
  switch (p) {
    case Pos::ADP: return Relation::case_;
    case Pos::ADJ:
    case Pos::DET: return Relation::amod;
    case Pos::NUM: return Relation::nummod;
    case Pos::ADV: return Relation::obl;
    default: return Relation::unk;
  }
}

std::optional<Chain> window_chain(std::span<const morph::MorphEntry> tags, std::size_t start, std::size_t len) {
  std::size_t nouns = 0, noun = 0;
  for (std::size_t i = start; i < start + len; ++i) {
    if (tags[i].pos == Pos::NOUN) {
      ++nouns;
      noun = i;
    }
  }
  if (nouns != 1) return std::nullopt;

  std::optional<std::size_t> gov;
  for (std::size_t i = noun; i-- > start;) {
    if (is_governor(tags[i].pos)) {
      gov = i;
      break;
    }
  }
  if (!gov) {
    for (std::size_t i = noun + 1; i < start + len; ++i) {
      if (is_governor(tags[i].pos)) {
        gov = i;
        break;
      }
    }
  }

  Chain c;
  c.start = start;
  c.arity = static_cast<int>(len);
  c.noun_index = noun;
  c.root_index = gov.value_or(noun);
  c.root = tags[c.root_index].form;
  if (gov) {
    c.rel = relation_for(tags[*gov].pos);
  } else {
    for (std::size_t i = start; i < start + len; ++i) {
      if (i != noun) {
        c.rel = relation_for(tags[i].pos);
        break;
      }
    }
  }
  for (std::size_t i = start; i < start + len; ++i) {
    if (i == c.root_index) continue;
    c.dep_indices.push_back(i);
    c.dep_tags.push_back(tags[i].tag());
  }
  return c;
}

}  // namespace

std::string_view to_string(Relation rel) {
  switch (rel) {
    case Relation::obl: return "obl";
    case Relation::nmod: return "nmod";
    case Relation::amod: return "amod";
    case Relation::nummod: return "nummod";
    case Relation::case_: return "case";
    case Relation::advmod: return "advmod";
    case Relation::unk: return "unk";
  }
  return "unk";
}

Relation parse_relation(std::string_view s) {
  for (Relation r : {Relation::obl, Relation::nmod, Relation::amod, Relation::nummod, Relation::case_,
                     Relation::advmod}) {
    if (to_string(r) == s) return r;
  }
  return Relation::unk;
}

std::string Chain::key() const {
  std::string k = root;
  k += '\t';
  k += to_string(rel);
  k += '\t';
  for (std::size_t i = 0; i < dep_tags.size(); ++i) {
    if (i) k += ';';
    k += dep_tags[i];
  }
  return k;
}

std::vector<Chain> extract_chains(const text::Sentence& sentence, std::span<const morph::MorphEntry> tags) {
  std::vector<Chain> out;
  const auto& toks = sentence.tokens;
  for (std::size_t start = 0; start < toks.size(); ++start) {
    for (std::size_t len : {2u, 3u}) {
      if (start + len > toks.size()) break;
      bool words = true;
      for (std::size_t i = start; i < start + len; ++i) words = words && toks[i].is_word();
      if (!words) break;
      if (auto c = window_chain(tags, start, len)) out.push_back(std::move(*c));
    }
  }
  return out;
}

std::vector<Chain> extract_chains(const morph::MorphLexicon& lexicon, const text::Sentence& sentence) {
  auto tags = morph::tag_sentence(lexicon, sentence);
  return extract_chains(sentence, tags);
}

// --- Store ---

void ChainStore::add(const std::string& key, std::uint64_t count) { counts_[key] += count; }

std::uint64_t ChainStore::count(const std::string& key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

void ChainStore::write_tsv(std::ostream& out) const {
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts_.begin(), counts_.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [k, c] : rows) out << k << '\t' << c << '\n';
}

ChainStore ChainStore::read_tsv(std::istream& in) {
  ChainStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tabs = static_cast<std::size_t>(std::count(line.begin(), line.end(), '\t'));
    if (tabs != 3) throw ParseError("expected root<TAB>rel<TAB>tags<TAB>count", lineno);
    auto last = line.rfind('\t');
    std::uint64_t c = 0;
    auto res = std::from_chars(line.data() + last + 1, line.data() + line.size(), c);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size() || c == 0)
      throw ParseError("bad count", lineno);
    store.add(line.substr(0, last), c);
  }
  return store;
}

ChainStore build_store(const text::CorpusReader& corpus, const morph::MorphLexicon& lexicon,
                       const text::TokenizerOptions& opts) {
  ChainStore store;
  morph::LexiconTagger tagger(lexicon);
  corpus.for_each([&](std::string_view line) {
    text::Sentence s = text::tokenize(line, opts);
    auto tags = tagger.tag(s);
    for (const auto& c : extract_chains(s, tags)) store.add(c);
  });
  return store;
}

// --- Correction ---

namespace {

struct Variant {
  std::size_t position;
  std::string form;
};

// Forms to try at `position`, each paired with the chain they would produce.
std::vector<Variant> store_variants(const ChainStore& store, const morph::MorphLexicon& lexicon,
                                    const Chain& chain, std::span<const morph::MorphEntry> tags) {
  std::vector<std::size_t> positions{chain.noun_index};
  if (chain.rel == Relation::amod) {
    for (std::size_t i : chain.dep_indices)
      if (tags[i].pos == Pos::ADJ || tags[i].pos == Pos::DET) positions.push_back(i);
    if (chain.root_index != chain.noun_index &&
        (tags[chain.root_index].pos == Pos::ADJ || tags[chain.root_index].pos == Pos::DET))
      positions.push_back(chain.root_index);
  }

  std::vector<Variant> out;
  for (std::size_t p : positions) {
    const auto& cur = tags[p];
    if (!lexicon.has_paradigm(cur.lemma, cur.pos)) continue;
    for (const auto& e : lexicon.paradigm(cur.lemma, cur.pos)) {
      if (e.form == cur.form) continue;
      Chain v = chain;
      if (p == chain.root_index) {
        v.root = e.form;
      } else {
        auto slot = std::find(chain.dep_indices.begin(), chain.dep_indices.end(), p) - chain.dep_indices.begin();
        v.dep_tags[static_cast<std::size_t>(slot)] = e.tag();
      }
      if (!store.contains(v)) continue;
      bool dup = std::any_of(out.begin(), out.end(), [&](const Variant& x) { return x.position == p && x.form == e.form; });
      if (!dup) out.push_back({p, e.form});
    }
  }
  return out;
}

}  // namespace

beam::CandidateBeam correct_agreement(const ChainStore& store, const lm::NGramModel& model,
                                      const morph::MorphLexicon& lexicon, const beam::CandidateBeam& beam,
                                      const AgreementOptions& opts) {
  morph::LexiconTagger tagger(lexicon);
  beam::CandidateBeam out(beam.width());
  for (const auto& cand : beam) {
    text::Sentence sentence = cand.sentence;
    double score = cand.score;
    auto changes = cand.changes;
    std::set<std::pair<std::size_t, int>> handled;

    while (true) {
      auto tags = tagger.tag(sentence);
      auto chains = extract_chains(sentence, tags);
      const Chain* flagged = nullptr;
      for (const auto& c : chains) {
        if (handled.count({c.start, c.arity}) || store.contains(c)) continue;
        flagged = &c;
        break;
      }
      if (!flagged) break;
      handled.insert({flagged->start, flagged->arity});

      std::optional<beam::Candidate> best;
      std::size_t best_pos = 0;
      for (const auto& v : store_variants(store, lexicon, *flagged, tags)) {
        text::Sentence s = sentence;
        text::replace_token(s, v.position, text::restore_case(sentence.tokens[v.position], v.form));
        auto c = beam::make_candidate(std::move(s), &model);
        if (!best || c.score > best->score || (c.score == best->score && c.text < best->text)) {
          best = std::move(c);
          best_pos = v.position;
        }
      }
      if (!best) continue;
      double gain = best->score - score;
      if (gain <= opts.min_gain) continue;
      changes.push_back({"agreement", best_pos, sentence.tokens[best_pos].surface,
                         best->sentence.tokens[best_pos].surface, gain});
      sentence = std::move(best->sentence);
      score = best->score;
    }
    out.push(beam::make_candidate(std::move(sentence), &model, std::move(changes)));
  }
  out.normalize();
  return out;
}

}  // namespace l2gec::chains
