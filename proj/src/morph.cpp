#include "l2gec/morph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>

#include "l2gec/error.hpp"

namespace l2gec::morph {

namespace {

constexpr std::array<std::pair<Pos, std::string_view>, 17> kPosNames{{
    {Pos::ADJ, "ADJ"},     {Pos::ADP, "ADP"},   {Pos::ADV, "ADV"},     {Pos::AUX, "AUX"},
    {Pos::CCONJ, "CCONJ"}, {Pos::DET, "DET"},   {Pos::INTJ, "INTJ"},   {Pos::NOUN, "NOUN"},
    {Pos::NUM, "NUM"},     {Pos::PART, "PART"}, {Pos::PRON, "PRON"},   {Pos::PROPN, "PROPN"},
    {Pos::PUNCT, "PUNCT"}, {Pos::SCONJ, "SCONJ"}, {Pos::SYM, "SYM"},   {Pos::VERB, "VERB"},
    {Pos::X, "X"},
}};

constexpr std::array<std::string_view, 22> kFeatureKeys{
    "Abbr",  "Animacy", "Aspect",  "Case",  "Degree", "Foreign", "Gender", "Mood",
    "NumType", "Number", "Person", "Polarity", "Poss", "PronType", "Reflex", "Tense",
    "Typo",  "Variant", "VerbForm", "Voice", "Number[psor]", "Gender[psor]",
};

// Lower rank wins when the tagger has to choose between parts of speech.
int priority(Pos p) {
  switch (p) {
    case Pos::ADP: return 0;
    case Pos::CCONJ: return 1;
    case Pos::SCONJ: return 2;
    case Pos::PART: return 3;
    case Pos::PRON: return 4;
    case Pos::DET: return 5;
    case Pos::NUM: return 6;
    case Pos::AUX: return 7;
    case Pos::VERB: return 8;
    case Pos::NOUN: return 9;
    case Pos::ADJ: return 10;
    case Pos::ADV: return 11;
    case Pos::PROPN: return 12;
    case Pos::INTJ: return 13;
    case Pos::SYM: return 14;
    case Pos::PUNCT: return 15;
    case Pos::X: return 16;
  }
  return 16;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string freq_key(std::string_view form, Pos pos) {
  std::string k(form);
  k += '\t';
  k += to_string(pos);
  return k;
}

}  // namespace

std::string_view to_string(Pos pos) {
  for (auto [p, name] : kPosNames)
    if (p == pos) return name;
  return "X";
}

std::optional<Pos> parse_pos(std::string_view s) {
  for (auto [p, name] : kPosNames)
    if (name == s) return p;
  return std::nullopt;
}

bool is_known_feature(std::string_view key) {
  return std::find(kFeatureKeys.begin(), kFeatureKeys.end(), key) != kFeatureKeys.end();
}

std::string MorphEntry::tag() const {
  std::string out(to_string(pos));
  for (const auto& [k, v] : feats) {
    out += " | ";
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

bool MorphEntry::has(std::string_view key, std::string_view value) const {
  auto it = feats.find(std::string(key));
  return it != feats.end() && it->second == value;
}

// --- MorphLexicon ---

MorphLexicon MorphLexicon::read_tsv(std::istream& in) {
  MorphLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 4) throw ParseError("expected 4 tab-separated columns", lineno);
    MorphEntry e;
    e.form = text::casefold(cols[0]);
    e.lemma = text::casefold(cols[1]);
    if (e.form.empty() || e.lemma.empty()) throw ParseError("empty form or lemma", lineno);
    auto pos = parse_pos(cols[2]);
    if (!pos) throw ParseError("unknown POS '" + std::string(cols[2]) + "'", lineno);
    e.pos = *pos;
    if (cols[3] != "_") {
      for (auto kv : split(cols[3], '|')) {
        auto eq = kv.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == kv.size())
          throw ParseError("bad feature '" + std::string(kv) + "'", lineno);
        auto key = kv.substr(0, eq);
        if (!is_known_feature(key)) throw ParseError("unknown feature '" + std::string(key) + "'", lineno);
        e.feats[std::string(key)] = std::string(kv.substr(eq + 1));
      }
    }
    lex.add(std::move(e));
  }
  return lex;
}

MorphLexicon MorphLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open morphology lexicon " + path.string());
  return read_tsv(in);
}

void MorphLexicon::add(MorphEntry entry) {
  std::size_t idx = entries_.size();
  by_form_[entry.form].push_back(idx);
  paradigms_[{entry.lemma, entry.pos}].push_back(idx);
  entries_.push_back(std::move(entry));
}

std::vector<MorphEntry> MorphLexicon::analyze(std::string_view form) const {
  std::vector<MorphEntry> out;
  auto it = by_form_.find(std::string(form));
  if (it == by_form_.end()) return out;
  for (std::size_t i : it->second) out.push_back(entries_[i]);
  return out;
}

bool MorphLexicon::has_paradigm(std::string_view lemma, Pos pos) const {
  return paradigms_.count({std::string(lemma), pos}) != 0;
}

std::vector<MorphEntry> MorphLexicon::paradigm(std::string_view lemma, Pos pos) const {
  auto it = paradigms_.find({std::string(lemma), pos});
  if (it == paradigms_.end())
    throw UnknownLemma("no paradigm for " + std::string(lemma) + " " + std::string(to_string(pos)));
  std::vector<MorphEntry> out;
  for (std::size_t i : it->second) out.push_back(entries_[i]);
  return out;
}

std::vector<std::string> MorphLexicon::generate(std::string_view lemma, Pos pos,
                                                const Features& feats) const {
  std::vector<std::string> out;
  for (const auto& e : paradigm(lemma, pos)) {
    bool ok = std::all_of(feats.begin(), feats.end(), [&](const auto& kv) { return e.has(kv.first, kv.second); });
    if (ok && std::find(out.begin(), out.end(), e.form) == out.end()) out.push_back(e.form);
  }
  return out;
}

void MorphLexicon::read_tag_frequencies(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3) throw ParseError("expected form<TAB>POS<TAB>count", lineno);
    auto pos = parse_pos(cols[1]);
    if (!pos) throw ParseError("unknown POS '" + std::string(cols[1]) + "'", lineno);
    std::uint64_t c = 0;
    auto res = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), c);
    if (res.ec != std::errc() || res.ptr != cols[2].data() + cols[2].size())
      throw ParseError("bad count", lineno);
    tag_freq_[freq_key(text::casefold(cols[0]), *pos)] = c;
  }
}

std::optional<std::uint64_t> MorphLexicon::tag_frequency(std::string_view form, Pos pos) const {
  auto it = tag_freq_.find(freq_key(form, pos));
  if (it == tag_freq_.end()) return std::nullopt;
  return it->second;
}

// --- Tagging ---

MorphEntry LexiconTagger::tag_token(const text::Token& token) const {
  MorphEntry fallback{token.lower, token.lower, Pos::X, {}};
  if (token.kind == text::TokenKind::punctuation) {
    fallback.pos = Pos::PUNCT;
    return fallback;
  }
  if (token.kind == text::TokenKind::number) {
    fallback.pos = Pos::NUM;
    return fallback;
  }
  auto entries = lexicon_.analyze(token.lower);
  if (entries.empty()) return fallback;
  if (entries.size() == 1) return entries.front();

  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto& a = entries[i];
    const auto& b = entries[best];
    if (lexicon_.has_tag_frequencies()) {
      auto fa = lexicon_.tag_frequency(a.form, a.pos).value_or(0);
      auto fb = lexicon_.tag_frequency(b.form, b.pos).value_or(0);
      if (fa != fb) {
        if (fa > fb) best = i;
        continue;
      }
    }
    if (priority(a.pos) < priority(b.pos)) best = i;
  }
  return entries[best];
}

std::vector<MorphEntry> LexiconTagger::tag(const text::Sentence& sentence) const {
  std::vector<MorphEntry> out;
  out.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) out.push_back(tag_token(t));
  return out;
}

std::vector<MorphEntry> tag_sentence(const MorphLexicon& lexicon, const text::Sentence& sentence) {
  return LexiconTagger(lexicon).tag(sentence);
}

}  // namespace l2gec::morph
