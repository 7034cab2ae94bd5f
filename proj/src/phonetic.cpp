#include "l2gec/phonetic.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "l2gec/error.hpp"

namespace l2gec::phon {

namespace {

// Digit for a Cyrillic lowercase letter; 0 when the letter is dropped.
char digit_of(char32_t c) {
  switch (c) {
    case U'а': case U'э': case U'и': case U'о': case U'у':
    case U'ы': case U'е': case U'ё': case U'ю': case U'я':
    case U'й':
      return '0';
    case U'б': case U'п': return '1';
    case U'в': case U'ф': return '2';
    case U'г': case U'к': case U'х': return '3';
    case U'д': case U'т': return '4';
    case U'ж': case U'ш': case U'щ': case U'ч': return '5';
    case U'з': case U'с': case U'ц': return '6';
    case U'л': return '7';
    case U'м': case U'н': return '8';
    case U'р': return '9';
    default: return 0;
  }
}

}  // namespace

std::optional<std::string> try_encode(std::string_view word) {
  std::string code;
  char32_t prev = 0;
  for (char32_t c : text::to_u32(word)) {
    char d = digit_of(c);
    if (d != 0 && c != prev) code.push_back(d);
    prev = c;
  }
  if (code.empty()) return std::nullopt;
  return code;
}

std::string encode(std::string_view word) {
  auto code = try_encode(word);
  if (!code) throw EmptyCode("no encodable letters in '" + std::string(word) + "'");
  return *code;
}

PhoneticIndex PhoneticIndex::build(const lex::FrequencyLexicon& lexicon, int max_code_distance) {
  std::map<std::string, std::vector<Posting>> by_code;
  std::size_t words = 0;
  for (auto& [w, c] : lexicon.sorted_words()) {
    auto code = try_encode(w);
    if (!code) continue;
    by_code[*code].push_back({w, text::to_u32(w), c});
    ++words;
  }
  PhoneticIndex idx;
  std::vector<std::u32string> keys;
  keys.reserve(by_code.size());
  for (auto& [code, posts] : by_code) {
    std::sort(posts.begin(), posts.end(), [](const Posting& a, const Posting& b) { return a.word < b.word; });
    keys.push_back(text::to_u32(code));
    idx.postings_.push_back(std::move(posts));
  }
  idx.codes_ = lex::DeletionIndex(std::move(keys), max_code_distance);
  idx.word_count_ = words;
  return idx;
}

std::vector<std::string> PhoneticIndex::words_for(std::string_view code) const {
  std::vector<std::string> out;
  for (auto [k, dist] : codes_.search(text::to_u32(code), 0))
    for (const auto& p : postings_[k]) out.push_back(p.word);
  return out;
}

std::vector<PhoneticCandidate> PhoneticIndex::candidates(std::string_view word, int code_d) const {
  auto code = try_encode(word);
  if (!code) return {};
  const std::u32string query = text::to_u32(word);
  std::vector<PhoneticCandidate> out;
  int best = -1;
  for (auto [k, cd] : codes_.search(text::to_u32(*code), code_d)) {
    for (const auto& p : postings_[k]) {
      int osa = lex::osa_distance(query, p.cps);
      if (best >= 0 && osa > best) continue;
      if (best < 0 || osa < best) {
        best = osa;
        out.clear();
      }
      out.push_back({p.word, cd, osa, p.count});
    }
  }
  std::sort(out.begin(), out.end(), [](const PhoneticCandidate& a, const PhoneticCandidate& b) {
    if (a.osa_distance != b.osa_distance) return a.osa_distance < b.osa_distance;
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
  return out;
}

void PhoneticIndex::write_tsv(std::ostream& out) const {
  for (std::size_t k = 0; k < postings_.size(); ++k) {
    out << text::to_utf8(codes_.key(k)) << '\t';
    for (std::size_t i = 0; i < postings_[k].size(); ++i) {
      if (i) out << ',';
      out << postings_[k][i].word;
    }
    out << '\n';
  }
}

std::vector<PhoneticCandidate> phonetic_candidates(const PhoneticIndex& index, std::string_view word,
                                                   int code_d) {
  return index.candidates(word, code_d);
}

}  // namespace l2gec::phon
