#include "l2gec/ngram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "l2gec/error.hpp"

namespace l2gec::lm {

namespace {

constexpr double kBosLogprob = -99.0;

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <class Map>
std::array<std::uint64_t, 2> singletons_and_doubletons(const Map& m) {
  std::array<std::uint64_t, 2> n{0, 0};
  for (const auto& [k, c] : m) {
    if (c == 1) ++n[0];
    if (c == 2) ++n[1];
  }
  return n;
}

double discount_for(const std::array<std::uint64_t, 2>& n, int order) {
  if (n[0] == 0) {
    throw DegenerateCounts("order " + std::to_string(order) +
                           ": no n-grams with adjusted count 1, discount would be zero");
  }
  return static_cast<double>(n[0]) / static_cast<double>(n[0] + 2 * n[1]);
}

}  // namespace

// --- Vocabulary ---

Vocabulary::Vocabulary() {
  add(kUnk);
  add(kBos);
  add(kEos);
}

WordId Vocabulary::add(std::string_view word) {
  auto it = ids_.find(std::string(word));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

WordId Vocabulary::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return ids_.count(std::string(word)) != 0;
}

// --- Counting ---

void NGramCounts::add_sentence(std::span<const std::string> words) {
  std::vector<WordId> ids;
  ids.reserve(words.size() + 3);
  ids.push_back(kBosId);
  ids.push_back(kBosId);
  for (const auto& w : words) ids.push_back(vocab_.add(w));
  ids.push_back(kEosId);
  for (std::size_t i = 2; i < ids.size(); ++i) {
    ++uni_[{ids[i]}];
    ++bi_[{ids[i - 1], ids[i]}];
    ++tri_[{ids[i - 2], ids[i - 1], ids[i]}];
  }
  ++sentences_;
}

std::uint64_t NGramCounts::count(std::string_view ngram) const {
  auto parts = split_ws(ngram);
  std::vector<WordId> ids;
  for (auto p : parts) {
    if (!vocab_.contains(p)) return 0;
    ids.push_back(vocab_.find(p));
  }
  auto get = [](const auto& m, const auto& key) -> std::uint64_t {
    auto it = m.find(key);
    return it == m.end() ? 0 : it->second;
  };
  switch (ids.size()) {
    case 1: return get(uni_, Gram<1>{ids[0]});
    case 2: return get(bi_, Gram<2>{ids[0], ids[1]});
    case 3: return get(tri_, Gram<3>{ids[0], ids[1], ids[2]});
    default: return 0;
  }
}

std::uint64_t NGramCounts::total_unigrams() const {
  std::uint64_t t = 0;
  for (const auto& [k, c] : uni_) t += c;
  return t;
}

std::size_t NGramCounts::distinct(int order) const {
  switch (order) {
    case 1: return uni_.size();
    case 2: return bi_.size();
    case 3: return tri_.size();
    default: return 0;
  }
}

void NGramCounts::write_tsv(std::ostream& out) const {
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  rows.reserve(uni_.size() + bi_.size() + tri_.size());
  auto render = [&](const auto& gram) {
    std::string s;
    for (WordId w : gram) {
      if (!s.empty()) s += ' ';
      s += vocab_.word(w);
    }
    return s;
  };
  for (const auto& [g, c] : uni_) rows.emplace_back(render(g), c);
  for (const auto& [g, c] : bi_) rows.emplace_back(render(g), c);
  for (const auto& [g, c] : tri_) rows.emplace_back(render(g), c);
  std::sort(rows.begin(), rows.end());
  for (const auto& [s, c] : rows) out << s << '\t' << c << '\n';
}

NGramCounts count_ngrams(const text::CorpusReader& corpus, const text::TokenizerOptions& opts) {
  NGramCounts counts;
  corpus.for_each([&](std::string_view line) {
    text::Sentence s = text::tokenize(line, opts);
    if (s.empty()) return;
    auto words = text::lower_words(s);
    counts.add_sentence(words);
  });
  if (counts.sentences() == 0) throw EmptyCorpus();
  return counts;
}

// --- Estimation ---

NGramModel estimate_kn(const NGramCounts& counts, const KnOptions& opts) {
  if (counts.sentences() == 0) throw EmptyCorpus();

  // Adjusted counts for the lower orders.
  GramMap<2, std::uint64_t> adj2;
  for (const auto& [g, c] : counts.trigrams()) {
    if (g[1] != kBosId) ++adj2[{g[1], g[2]}];
  }
  for (const auto& [g, c] : counts.bigrams()) {
    if (g[0] == kBosId) adj2[g] = c;
  }
  GramMap<1, std::uint64_t> adj1;
  for (const auto& [g, c] : adj2) ++adj1[{g[1]}];

  NGramModel m;
  m.vocab_ = counts.vocab();
  m.order_ = kMaxOrder;
  m.unk_logprob_ = opts.unk_logprob;
  m.discounts_[0] = discount_for(singletons_and_doubletons(adj1), 1);
  m.discounts_[1] = discount_for(singletons_and_doubletons(adj2), 2);
  m.discounts_[2] = discount_for(singletons_and_doubletons(counts.trigrams()), 3);
  const double d2 = m.discounts_[1];
  const double d3 = m.discounts_[2];

  // Unigrams: continuation distribution; the uniform interpolation over the
  // same support cancels the discount exactly.
  const double unk_p = std::pow(10.0, opts.unk_logprob);
  std::uint64_t total1 = 0;
  for (const auto& [g, c] : adj1) total1 += c;
  std::vector<double> p1(m.vocab_.size(), 0.0);
  for (const auto& [g, c] : adj1) {
    p1[g[0]] = (1.0 - unk_p) * static_cast<double>(c) / static_cast<double>(total1);
  }
  p1[kUnkId] = unk_p;

  // Bigram contexts.
  std::vector<std::uint64_t> total2(m.vocab_.size(), 0), types2(m.vocab_.size(), 0);
  for (const auto& [g, c] : adj2) {
    total2[g[0]] += c;
    ++types2[g[0]];
  }
  std::vector<double> bo2(m.vocab_.size(), 1.0);
  for (WordId v = 0; v < m.vocab_.size(); ++v) {
    if (total2[v] > 0) bo2[v] = d2 * static_cast<double>(types2[v]) / static_cast<double>(total2[v]);
  }
  GramMap<2, double> p2;
  p2.reserve(adj2.size());
  for (const auto& [g, c] : adj2) {
    p2[g] = (static_cast<double>(c) - d2) / static_cast<double>(total2[g[0]]) + bo2[g[0]] * p1[g[1]];
  }
  auto p2_of = [&](WordId v, WordId w) {
    auto it = p2.find({v, w});
    return it != p2.end() ? it->second : bo2[v] * p1[w];
  };

  // Trigram contexts.
  GramMap<2, std::array<std::uint64_t, 2>> ctx3;  // total, types
  for (const auto& [g, c] : counts.trigrams()) {
    auto& e = ctx3[{g[0], g[1]}];
    e[0] += c;
    ++e[1];
  }

  m.uni_.assign(m.vocab_.size(), ArpaEntry{});
  m.has_uni_.assign(m.vocab_.size(), false);
  for (WordId w = 0; w < m.vocab_.size(); ++w) {
    if (w == kBosId) {
      m.uni_[w].logprob = kBosLogprob;
    } else if (p1[w] > 0.0) {
      m.uni_[w].logprob = std::log10(p1[w]);
    } else {
      continue;
    }
    m.has_uni_[w] = true;
    if (total2[w] > 0) {
      m.uni_[w].backoff = std::log10(bo2[w]);
      m.uni_[w].has_backoff = true;
    }
  }
  m.uni_[kUnkId].logprob = opts.unk_logprob;

  m.bi_.reserve(adj2.size() + 1);
  for (const auto& [g, p] : p2) m.bi_[g].logprob = std::log10(p);
  for (const auto& [g, tt] : ctx3) {
    auto [it, inserted] = m.bi_.try_emplace(g);
    if (inserted) it->second.logprob = kBosLogprob;  // only <s> <s>
    it->second.backoff =
        std::log10(d3 * static_cast<double>(tt[1]) / static_cast<double>(tt[0]));
    it->second.has_backoff = true;
  }

  m.tri_.reserve(counts.trigrams().size());
  for (const auto& [g, c] : counts.trigrams()) {
    const auto& tt = ctx3.at({g[0], g[1]});
    double bo3 = d3 * static_cast<double>(tt[1]) / static_cast<double>(tt[0]);
    double p = (static_cast<double>(c) - d3) / static_cast<double>(tt[0]) + bo3 * p2_of(g[1], g[2]);
    m.tri_[g].logprob = std::log10(p);
  }
  return m;
}

// --- Querying ---

const ArpaEntry* NGramModel::find1(WordId w) const {
  return w < has_uni_.size() && has_uni_[w] ? &uni_[w] : nullptr;
}

const ArpaEntry* NGramModel::find2(WordId a, WordId b) const {
  auto it = bi_.find({a, b});
  return it == bi_.end() ? nullptr : &it->second;
}

double NGramModel::logprob(std::span<const WordId> context, WordId w) const {
  if (context.size() > static_cast<std::size_t>(order_ - 1))
    context = context.subspan(context.size() - static_cast<std::size_t>(order_ - 1));
  double acc = 0.0;
  if (context.size() == 2) {
    auto it = tri_.find({context[0], context[1], w});
    if (it != tri_.end()) return it->second.logprob;
    if (const ArpaEntry* e = find2(context[0], context[1]); e && e->has_backoff) acc += e->backoff;
  }
  if (!context.empty()) {
    if (const ArpaEntry* e = find2(context.back(), w)) return acc + e->logprob;
    if (const ArpaEntry* e = find1(context.back()); e && e->has_backoff) acc += e->backoff;
  }
  if (w != kUnkId) {
    if (const ArpaEntry* e = find1(w)) return acc + e->logprob;
  }
  return acc + unk_logprob_;
}

double NGramModel::logprob(std::span<const std::string> context, std::string_view w) const {
  std::vector<WordId> ids;
  ids.reserve(context.size());
  for (const auto& c : context) ids.push_back(c == kBos ? kBosId : vocab_.find(c));
  return logprob(ids, w == kEos ? kEosId : vocab_.find(w));
}

double NGramModel::score(std::span<const std::string> lower_words) const {
  std::array<WordId, 2> ctx{kBosId, kBosId};
  double total = 0.0;
  for (const auto& word : lower_words) {
    WordId w = vocab_.find(word);
    total += logprob(ctx, w);
    ctx = {ctx[1], w};
  }
  total += logprob(ctx, kEosId);
  return total;
}

double NGramModel::score(const text::Sentence& sentence) const {
  return score(text::lower_words(sentence));
}

std::size_t NGramModel::ngram_count(int n) const {
  switch (n) {
    case 1: return static_cast<std::size_t>(std::count(has_uni_.begin(), has_uni_.end(), true));
    case 2: return bi_.size();
    case 3: return tri_.size();
    default: return 0;
  }
}

// --- ARPA ---

void NGramModel::export_arpa(std::ostream& out) const {
  auto line = [&](const std::vector<WordId>& words, const ArpaEntry& e, bool with_backoff) {
    out << format_double(e.logprob) << '\t';
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out << ' ';
      out << vocab_.word(words[i]);
    }
    if (with_backoff && e.has_backoff) out << '\t' << format_double(e.backoff);
    out << '\n';
  };
  auto sorted = [&](auto&& keys) {
    std::vector<std::pair<std::vector<std::string>, std::vector<WordId>>> rows;
    for (const auto& k : keys) {
      std::vector<std::string> names;
      for (WordId w : k) names.push_back(vocab_.word(w));
      rows.emplace_back(std::move(names), std::vector<WordId>(k.begin(), k.end()));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };

  std::vector<Gram<1>> k1;
  for (WordId w = 0; w < has_uni_.size(); ++w)
    if (has_uni_[w]) k1.push_back({w});
  std::vector<Gram<2>> k2;
  for (const auto& [g, e] : bi_) k2.push_back(g);
  std::vector<Gram<3>> k3;
  for (const auto& [g, e] : tri_) k3.push_back(g);

  out << "\\data\\\n";
  out << "ngram 1=" << k1.size() << '\n';
  if (order_ >= 2) out << "ngram 2=" << k2.size() << '\n';
  if (order_ >= 3) out << "ngram 3=" << k3.size() << '\n';

  out << "\n\\1-grams:\n";
  for (const auto& [names, ids] : sorted(k1)) line(ids, uni_[ids[0]], order_ > 1);
  if (order_ >= 2) {
    out << "\n\\2-grams:\n";
    for (const auto& [names, ids] : sorted(k2)) line(ids, bi_.at({ids[0], ids[1]}), order_ > 2);
  }
  if (order_ >= 3) {
    out << "\n\\3-grams:\n";
    for (const auto& [names, ids] : sorted(k3)) line(ids, tri_.at({ids[0], ids[1], ids[2]}), false);
  }
  out << "\n\\end\\\n";
}

NGramModel NGramModel::import_arpa(std::istream& in, const KnOptions& opts) {
  NGramModel m;
  m.unk_logprob_ = opts.unk_logprob;
  std::string raw;
  std::size_t lineno = 0;

  auto next_line = [&](std::string& out) -> bool {
    if (!std::getline(in, out)) return false;
    ++lineno;
    while (!out.empty() && (out.back() == '\r' || out.back() == ' ' || out.back() == '\t'))
      out.pop_back();
    return true;
  };
  auto parse_double = [&](std::string_view s, const char* what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ArpaParseError(std::string("bad ") + what + " '" + std::string(s) + "'", lineno);
    return v;
  };

  // Header.
  bool found_data = false;
  while (next_line(raw)) {
    if (raw == "\\data\\") {
      found_data = true;
      break;
    }
  }
  if (!found_data) throw ArpaParseError("missing \\data\\ header", lineno + 1);

  std::map<int, std::size_t> declared;
  while (next_line(raw)) {
    if (raw.empty()) {
      if (!declared.empty()) break;
      continue;
    }
    if (!raw.starts_with("ngram ")) {
      if (raw.starts_with("\\") && !declared.empty()) break;
      throw ArpaParseError("expected 'ngram N=count'", lineno);
    }
    auto eq = raw.find('=');
    if (eq == std::string::npos) throw ArpaParseError("expected 'ngram N=count'", lineno);
    int n = 0;
    std::size_t c = 0;
    auto r1 = std::from_chars(raw.data() + 6, raw.data() + eq, n);
    auto r2 = std::from_chars(raw.data() + eq + 1, raw.data() + raw.size(), c);
    if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != raw.data() + eq ||
        r2.ptr != raw.data() + raw.size() || n < 1)
      throw ArpaParseError("expected 'ngram N=count'", lineno);
    if (n > kMaxOrder) throw ArpaParseError("unsupported n-gram order " + std::to_string(n), lineno);
    if (declared.count(n)) throw ArpaParseError("duplicate count for order " + std::to_string(n), lineno);
    declared[n] = c;
  }
  if (declared.empty()) throw ArpaParseError("no n-gram counts declared", lineno);
  m.order_ = declared.rbegin()->first;
  for (int n = 1; n <= m.order_; ++n)
    if (!declared.count(n)) throw ArpaParseError("missing count for order " + std::to_string(n), lineno);

  // Sections. `raw` may already hold a section header.
  bool ended = false;
  int section = 0;
  std::size_t seen = 0;
  auto close_section = [&]() {
    if (section > 0 && seen != declared[section])
      throw ArpaParseError("section " + std::to_string(section) + "-grams has " +
                               std::to_string(seen) + " entries, header declares " +
                               std::to_string(declared[section]),
                           lineno);
  };
  struct Row {
    int order;
    std::vector<std::string> words;
    ArpaEntry entry;
    std::size_t line;
  };
  std::vector<Row> rows;
  bool have_line = raw.starts_with("\\");
  while (have_line || next_line(raw)) {
    have_line = false;
    if (raw.empty()) continue;
    if (raw == "\\end\\") {
      close_section();
      ended = true;
      break;
    }
    if (raw.starts_with("\\")) {
      int n = 0;
      auto r = std::from_chars(raw.data() + 1, raw.data() + raw.size(), n);
      if (r.ec != std::errc() || std::string_view(r.ptr, raw.data() + raw.size() - r.ptr) != "-grams:")
        throw ArpaParseError("unexpected section header '" + raw + "'", lineno);
      if (n != section + 1 || n > m.order_)
        throw ArpaParseError("unexpected section " + std::to_string(n) + "-grams", lineno);
      close_section();
      section = n;
      seen = 0;
      continue;
    }
    if (section == 0) throw ArpaParseError("entry outside of an n-gram section", lineno);
    auto fields = split_ws(raw);
    const auto n = static_cast<std::size_t>(section);
    if (fields.size() != n + 1 && fields.size() != n + 2)
      throw ArpaParseError("expected " + std::to_string(n) + " words with logprob and optional backoff",
                           lineno);
    Row row;
    row.order = section;
    row.line = lineno;
    row.entry.logprob = parse_double(fields[0], "logprob");
    for (std::size_t i = 1; i <= n; ++i) row.words.emplace_back(fields[i]);
    if (fields.size() == n + 2) {
      row.entry.backoff = parse_double(fields[n + 1], "backoff");
      row.entry.has_backoff = true;
    }
    rows.push_back(std::move(row));
    ++seen;
  }
  if (!ended) throw ArpaParseError("missing \\end\\ marker", lineno + 1);
  if (section != m.order_) throw ArpaParseError("missing sections before \\end\\", lineno);

  for (const auto& r : rows)
    if (r.order == 1) m.vocab_.add(r.words[0]);
  m.uni_.assign(m.vocab_.size(), ArpaEntry{});
  m.has_uni_.assign(m.vocab_.size(), false);
  auto id_of = [&](const std::string& w, std::size_t line) {
    if (!m.vocab_.contains(w)) throw ArpaParseError("n-gram word '" + w + "' missing from unigrams", line);
    return m.vocab_.find(w);
  };
  for (const auto& r : rows) {
    switch (r.order) {
      case 1: {
        WordId w = id_of(r.words[0], r.line);
        m.uni_[w] = r.entry;
        m.has_uni_[w] = true;
        break;
      }
      case 2: m.bi_[{id_of(r.words[0], r.line), id_of(r.words[1], r.line)}] = r.entry; break;
      case 3:
        m.tri_[{id_of(r.words[0], r.line), id_of(r.words[1], r.line), id_of(r.words[2], r.line)}] = r.entry;
        break;
    }
  }
  if (m.has_uni_[kUnkId]) {
    m.unk_logprob_ = m.uni_[kUnkId].logprob;
  } else {
    m.uni_[kUnkId].logprob = m.unk_logprob_;
    m.has_uni_[kUnkId] = true;
  }
  return m;
}

}  // namespace l2gec::lm
