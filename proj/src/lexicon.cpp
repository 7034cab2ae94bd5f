#include "l2gec/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "l2gec/error.hpp"

namespace l2gec::lex {

int osa_distance(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);
  // Three rolling rows: i-2, i-1, i.
  std::vector<int> prev2(m + 1), prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      int v = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
        v = std::min(v, prev2[j - 2] + 1);
      cur[j] = v;
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[m];
}

int osa_distance(std::string_view a, std::string_view b) {
  return osa_distance(text::to_u32(a), text::to_u32(b));
}

std::vector<std::u32string> deletion_variants(std::u32string_view s, int max_deletes) {
  std::unordered_set<std::u32string> seen{std::u32string(s)};
  std::vector<std::u32string> frontier{std::u32string(s)};
  for (int d = 0; d < max_deletes; ++d) {
    std::vector<std::u32string> next;
    for (const auto& v : frontier) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::u32string del = v.substr(0, i) + v.substr(i + 1);
        if (seen.insert(del).second) next.push_back(std::move(del));
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::u32string> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// --- FrequencyLexicon ---

void FrequencyLexicon::add(std::string_view word, std::uint64_t count) {
  words_[std::string(word)] += count;
}

void FrequencyLexicon::add_bigram(std::string_view w1, std::string_view w2, std::uint64_t count) {
  std::string key;
  key.reserve(w1.size() + w2.size() + 1);
  key.append(w1).append(" ").append(w2);
  bigrams_[key] += count;
}

std::uint64_t FrequencyLexicon::count(std::string_view word) const {
  auto it = words_.find(std::string(word));
  return it == words_.end() ? 0 : it->second;
}

std::uint64_t FrequencyLexicon::bigram_count(std::string_view w1, std::string_view w2) const {
  std::string key(w1);
  key.append(" ").append(w2);
  auto it = bigrams_.find(key);
  return it == bigrams_.end() ? 0 : it->second;
}

bool FrequencyLexicon::contains(const text::Token& token) const {
  if (!token.is_word()) return true;
  return contains(token.lower);
}

void FrequencyLexicon::prune(std::uint64_t min_count) {
  std::erase_if(words_, [&](const auto& kv) { return kv.second < min_count; });
  std::erase_if(bigrams_, [&](const auto& kv) { return kv.second < min_count; });
}

namespace {

std::vector<std::pair<std::string, std::uint64_t>> by_count(
    const std::unordered_map<std::string, std::uint64_t>& m) {
  std::vector<std::pair<std::string, std::uint64_t>> out(m.begin(), m.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::pair<std::string_view, std::uint64_t> parse_count_line(std::string_view line, std::size_t lineno) {
  auto tab = line.rfind('\t');
  if (tab == std::string_view::npos || tab == 0) throw ParseError("expected '<key><TAB><count>'", lineno);
  std::uint64_t c = 0;
  auto num = line.substr(tab + 1);
  auto res = std::from_chars(num.data(), num.data() + num.size(), c);
  if (res.ec != std::errc() || res.ptr != num.data() + num.size() || c == 0)
    throw ParseError("bad count '" + std::string(num) + "'", lineno);
  return {line.substr(0, tab), c};
}

}  // namespace

std::vector<std::pair<std::string, std::uint64_t>> FrequencyLexicon::sorted_words() const {
  return by_count(words_);
}

std::vector<std::pair<std::string, std::uint64_t>> FrequencyLexicon::sorted_bigrams() const {
  return by_count(bigrams_);
}

void FrequencyLexicon::write_tsv(std::ostream& out) const {
  for (const auto& [w, c] : sorted_words()) out << w << '\t' << c << '\n';
}

void FrequencyLexicon::write_bigrams_tsv(std::ostream& out) const {
  for (const auto& [w, c] : sorted_bigrams()) out << w << '\t' << c << '\n';
}

FrequencyLexicon FrequencyLexicon::read_tsv(std::istream& in) {
  FrequencyLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto [word, c] = parse_count_line(line, lineno);
    lex.add(text::casefold(word), c);
  }
  return lex;
}

void FrequencyLexicon::read_bigrams_tsv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto [pair, c] = parse_count_line(line, lineno);
    auto sp = pair.find(' ');
    if (sp == std::string_view::npos || pair.find(' ', sp + 1) != std::string_view::npos)
      throw ParseError("expected '<w1> <w2><TAB><count>'", lineno);
    add_bigram(text::casefold(pair.substr(0, sp)), text::casefold(pair.substr(sp + 1)), c);
  }
}

FrequencyLexicon build_lexicon(const text::CorpusReader& corpus, const LexiconBuildOptions& opts) {
  FrequencyLexicon lex;
  std::size_t sentences = 0;
  corpus.for_each([&](std::string_view line) {
    text::Sentence s = text::tokenize(line, opts.tokenizer);
    if (s.empty()) return;
    ++sentences;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const auto& t = s.tokens[i];
      if (!t.is_word()) continue;
      lex.add(t.lower);
      if (i > 0 && s.tokens[i - 1].is_word()) lex.add_bigram(s.tokens[i - 1].lower, t.lower);
    }
  });
  if (sentences == 0) throw EmptyCorpus();
  if (opts.min_count > 1) lex.prune(opts.min_count);
  return lex;
}

// --- DeletionIndex ---

DeletionIndex::DeletionIndex(std::vector<std::u32string> keys, int max_distance)
    : keys_(std::move(keys)), max_distance_(max_distance) {
  if (max_distance < 0) throw std::invalid_argument("max_distance must be non-negative");
  for (std::uint32_t i = 0; i < keys_.size(); ++i) {
    for (auto& v : deletion_variants(keys_[i], max_distance)) postings_[std::move(v)].push_back(i);
  }
}

std::span<const std::uint32_t> DeletionIndex::postings(std::u32string_view variant) const {
  auto it = postings_.find(std::u32string(variant));
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<std::pair<std::uint32_t, int>> DeletionIndex::search(std::u32string_view query, int d) const {
  if (d > max_distance_)
    throw std::invalid_argument("lookup distance " + std::to_string(d) + " exceeds index bound " +
                                std::to_string(max_distance_));
  std::vector<std::uint32_t> candidates;
  for (const auto& v : deletion_variants(query, d)) {
    auto p = postings(v);
    candidates.insert(candidates.end(), p.begin(), p.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<std::pair<std::uint32_t, int>> out;
  for (std::uint32_t k : candidates) {
    const auto& key = keys_[k];
    auto diff = key.size() > query.size() ? key.size() - query.size() : query.size() - key.size();
    if (diff > static_cast<std::size_t>(d)) continue;
    int dist = osa_distance(query, key);
    if (dist <= d) out.emplace_back(k, dist);
  }
  return out;
}

// --- LexiconIndex ---

LexiconIndex::LexiconIndex(FrequencyLexicon lexicon, int max_distance) : lexicon_(std::move(lexicon)) {
  if (max_distance < 0 || max_distance > 3)
    throw std::invalid_argument("max_distance must be in 0..3");
  std::vector<std::u32string> keys;
  for (auto& [w, c] : lexicon_.sorted_words()) {
    keys.push_back(text::to_u32(w));
    words_.push_back(w);
    counts_.push_back(c);
  }
  index_ = DeletionIndex(std::move(keys), max_distance);
}

std::vector<Suggestion> LexiconIndex::lookup(std::string_view query, int d) const {
  std::vector<Suggestion> out;
  for (auto [k, dist] : index_.search(text::to_u32(query), d))
    out.push_back({words_[k], dist, counts_[k]});
  std::sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
  return out;
}

LexiconIndex build_index(const FrequencyLexicon& lexicon, int max_distance) {
  return LexiconIndex(lexicon, max_distance);
}

std::vector<Suggestion> lookup(const LexiconIndex& index, std::string_view query, int d) {
  return index.lookup(query, d);
}

}  // namespace l2gec::lex
