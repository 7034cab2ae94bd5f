#include "l2gec/m2.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "l2gec/error.hpp"

namespace l2gec::m2 {

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

namespace {

std::string join(const std::vector<std::string>& toks, std::size_t b, std::size_t e) {
  std::string s;
  for (std::size_t k = b; k < e; ++k) {
    if (k > b) s += ' ';
    s += toks[k];
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto p = s.find("|||", pos);
    if (p == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, p - pos));
    pos = p + 3;
  }
}

bool parse_int(std::string_view s, long& v) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

struct PendingEdit {
  EditSpan edit;
  std::size_t line;
};

void finish(std::vector<AnnotatedSentence>& out, AnnotatedSentence& cur,
            std::map<int, std::vector<PendingEdit>>& pending) {
  for (auto& [ann, edits] : pending) {
    std::sort(edits.begin(), edits.end(), [](const PendingEdit& a, const PendingEdit& b) {
      return std::tie(a.edit.start, a.edit.end, a.edit.replacement) <
             std::tie(b.edit.start, b.edit.end, b.edit.replacement);
    });
    auto& gold = cur.gold[ann];
    for (std::size_t k = 0; k < edits.size(); ++k) {
      if (k > 0) {
        const auto& a = edits[k - 1].edit;
        const auto& b = edits[k].edit;
        bool point_clash = a.start == a.end && b.start == b.end && a.start == b.start;
        if (b.start < a.end || point_clash)
          throw M2ParseError("overlapping edits for annotator " + std::to_string(ann),
                             std::max(edits[k - 1].line, edits[k].line));
      }
      gold.push_back(edits[k].edit);
    }
  }
  if (cur.gold.empty()) cur.gold[0];
  out.push_back(std::move(cur));
  cur = {};
  pending.clear();
}

}  // namespace

std::vector<AnnotatedSentence> parse_m2(std::istream& in) {
  std::vector<AnnotatedSentence> out;
  AnnotatedSentence cur;
  std::map<int, std::vector<PendingEdit>> pending;
  bool open = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) {
      if (open) finish(out, cur, pending);
      open = false;
      continue;
    }
    if (line.rfind("S ", 0) == 0 || line == "S") {
      if (open) throw M2ParseError("'S' line inside a sentence block (missing blank line)", lineno);
      cur.source = split_tokens(std::string_view(line).substr(1));
      open = true;
      continue;
    }
    if (line.rfind("A ", 0) != 0) throw M2ParseError("expected an 'S' or 'A' line", lineno);
    if (!open) throw M2ParseError("'A' line before any 'S' line", lineno);

    auto fields = split_fields(std::string_view(line).substr(2));
    if (fields.size() != 6) throw M2ParseError("expected 6 '|||'-separated fields", lineno);
    auto span = split_tokens(fields[0]);
    long s = 0, e = 0, ann = 0;
    if (span.size() != 2 || !parse_int(span[0], s) || !parse_int(span[1], e))
      throw M2ParseError("bad edit span", lineno);
    if (!parse_int(fields[5], ann)) throw M2ParseError("bad annotator id", lineno);
    std::string type(fields[1]);
    if (type == "noop" || (s == -1 && e == -1)) {
      pending[static_cast<int>(ann)];
      continue;
    }
    if (s < 0 || e < s || static_cast<std::size_t>(e) > cur.source.size())
      throw M2ParseError("edit span out of range", lineno);
    std::string rep(fields[2]);
    if (rep == "-NONE-") rep.clear();
    EditSpan edit{static_cast<std::size_t>(s), static_cast<std::size_t>(e), join(split_tokens(rep), 0, split_tokens(rep).size()),
                  type, static_cast<int>(ann)};
    pending[static_cast<int>(ann)].push_back({std::move(edit), lineno});
  }
  if (in.bad()) throw IoError("read error on M2 input");
  if (open) finish(out, cur, pending);
  return out;
}

std::vector<AnnotatedSentence> parse_m2_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return parse_m2(in);
}

// --- Edit extraction ---

namespace {

using EditKey = std::tuple<std::size_t, std::size_t, std::size_t, std::string>;

struct Best {
  long tp = 0;
  long edits = 0;
  std::vector<EditKey> seq;
  std::vector<EditSpan> spans;
};

bool better(const Best& a, const Best& b) {
  if (a.tp != b.tp) return a.tp > b.tp;
  if (a.edits != b.edits) return a.edits < b.edits;
  return a.seq < b.seq;
}

class Extractor {
 public:
  Extractor(const std::vector<std::string>& src, const std::vector<std::string>& hyp, const std::vector<EditSpan>& gold,
            int window)
      : src_(src), hyp_(hyp), gold_(gold), window_(std::max(1, window)), n_(src.size()), m_(hyp.size()) {
    fwd_.assign((n_ + 1) * (m_ + 1), 0);
    bwd_.assign((n_ + 1) * (m_ + 1), 0);
    for (std::size_t i = 0; i <= n_; ++i) {
      for (std::size_t j = 0; j <= m_; ++j) {
        if (i == 0 || j == 0) {
          F(i, j) = i + j;
          continue;
        }
        F(i, j) = std::min({F(i - 1, j) + 1, F(i, j - 1) + 1, F(i - 1, j - 1) + (src_[i - 1] == hyp_[j - 1] ? 0 : 1)});
      }
    }
    for (std::size_t i = n_ + 1; i-- > 0;) {
      for (std::size_t j = m_ + 1; j-- > 0;) {
        if (i == n_ || j == m_) {
          B(i, j) = (n_ - i) + (m_ - j);
          continue;
        }
        B(i, j) = std::min({B(i + 1, j) + 1, B(i, j + 1) + 1, B(i + 1, j + 1) + (src_[i] == hyp_[j] ? 0 : 1)});
      }
    }
    total_ = F(n_, m_);
  }

  std::vector<EditSpan> run() {
    Best b = solve(0, 0, {});
    return b.spans;
  }

 private:
  std::size_t& F(std::size_t i, std::size_t j) { return fwd_[i * (m_ + 1) + j]; }
  std::size_t& B(std::size_t i, std::size_t j) { return bwd_[i * (m_ + 1) + j]; }

  bool on_path(std::size_t i, std::size_t j, std::size_t cost, std::size_t i2, std::size_t j2) {
    return F(i, j) + cost + B(i2, j2) == total_;
  }

  bool is_gold(const EditSpan& e) const {
    return std::any_of(gold_.begin(), gold_.end(), [&](const EditSpan& g) { return g.same_edit(e); });
  }

  // Non-match moves out of (i, j) that stay on an optimal path.
  std::vector<std::pair<std::size_t, std::size_t>> moves(std::size_t i, std::size_t j) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (i < n_ && j < m_ && src_[i] != hyp_[j] && on_path(i, j, 1, i + 1, j + 1)) out.push_back({i + 1, j + 1});
    if (i < n_ && on_path(i, j, 1, i + 1, j)) out.push_back({i + 1, j});
    if (j < m_ && on_path(i, j, 1, i, j + 1)) out.push_back({i, j + 1});
    return out;
  }

  // Group ends reachable from (i, j) in 1..window non-match moves.
  void group_ends(std::size_t i, std::size_t j, int depth, std::set<std::pair<std::size_t, std::size_t>>& ends) {
    if (depth == window_) return;
    for (auto [i2, j2] : moves(i, j)) {
      ends.insert({i2, j2});
      group_ends(i2, j2, depth + 1, ends);
    }
  }

  // `inserted` holds replacements of pure insertions already made at source
  // position i, so a repeated one is not counted twice.
  Best solve(std::size_t i, std::size_t j, const std::set<std::string>& inserted) {
    if (i == n_ && j == m_) return {};
    std::string key = std::to_string(i) + ',' + std::to_string(j);
    for (const auto& s : inserted) key += '\x1f' + s;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::optional<Best> best;
    auto consider = [&](Best cand) {
      if (!best || better(cand, *best)) best = std::move(cand);
    };

    if (i < n_ && j < m_ && src_[i] == hyp_[j] && on_path(i, j, 0, i + 1, j + 1)) consider(solve(i + 1, j + 1, {}));

    std::set<std::pair<std::size_t, std::size_t>> ends;
    group_ends(i, j, 0, ends);
    for (auto [i2, j2] : ends) {
      EditSpan e{i, i2, join(hyp_, j, j2), {}, 0};
      bool pure_insert = i2 == i;
      bool repeat = pure_insert && inserted.count(e.replacement);
      Best rest;
      if (pure_insert) {
        auto next = inserted;
        next.insert(e.replacement);
        rest = solve(i, j2, next);
      } else {
        rest = solve(i2, j2, {});
      }
      if (!repeat) {
        rest.tp += is_gold(e) ? 1 : 0;
        rest.edits += 1;
        rest.seq.insert(rest.seq.begin(), EditKey{e.start, e.end, j2 - j, e.replacement});
        rest.spans.insert(rest.spans.begin(), std::move(e));
      }
      consider(std::move(rest));
    }
    // Every on-path node has a continuation, so best is always set here.
    memo_.emplace(key, *best);
    return *best;
  }

  const std::vector<std::string>& src_;
  const std::vector<std::string>& hyp_;
  const std::vector<EditSpan>& gold_;
  int window_;
  std::size_t n_, m_, total_ = 0;
  std::vector<std::size_t> fwd_, bwd_;
  std::unordered_map<std::string, Best> memo_;
};

}  // namespace

std::vector<EditSpan> extract_edits(const std::vector<std::string>& source, const std::vector<std::string>& hypothesis,
                                    const std::vector<EditSpan>& gold, int merge_window) {
  if (source == hypothesis) return {};
  return Extractor(source, hypothesis, gold, merge_window).run();
}

std::size_t count_distinct(const std::vector<EditSpan>& edits) {
  std::set<std::tuple<std::size_t, std::size_t, std::string>> seen;
  for (const auto& e : edits) seen.insert({e.start, e.end, e.replacement});
  return seen.size();
}

std::size_t count_matches(const std::vector<EditSpan>& system, const std::vector<EditSpan>& gold) {
  std::set<std::tuple<std::size_t, std::size_t, std::string>> g, hit;
  for (const auto& e : gold) g.insert({e.start, e.end, e.replacement});
  for (const auto& e : system) {
    std::tuple<std::size_t, std::size_t, std::string> k{e.start, e.end, e.replacement};
    if (g.count(k)) hit.insert(k);
  }
  return hit.size();
}

double precision(const Counts& c) {
  return c.tp + c.fp == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const Counts& c) {
  return c.tp + c.fn == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f_beta(double p, double r, double beta) {
  double b2 = beta * beta;
  double den = b2 * p + r;
  return den == 0.0 ? 0.0 : (1.0 + b2) * p * r / den;
}

EvalReport score(const std::vector<AnnotatedSentence>& annotated,
                 const std::vector<std::vector<std::string>>& hypotheses, double beta, int merge_window) {
  if (annotated.size() != hypotheses.size())
    throw LengthMismatch("gold has " + std::to_string(annotated.size()) + " sentences, hypothesis has " +
                         std::to_string(hypotheses.size()));
  EvalReport rep;
  rep.beta = beta;
  for (std::size_t k = 0; k < annotated.size(); ++k) {
    const auto& sent = annotated[k];
    std::optional<SentenceResult> best;
    double best_f = 0.0;
    for (const auto& [ann, gold] : sent.gold) {
      SentenceResult r;
      r.annotator = ann;
      r.edits = extract_edits(sent.source, hypotheses[k], gold, merge_window);
      r.counts.tp = count_matches(r.edits, gold);
      r.counts.fp = count_distinct(r.edits) - r.counts.tp;
      r.counts.fn = count_distinct(gold) - r.counts.tp;
      double f = f_beta(precision(r.counts), recall(r.counts), beta);
      bool take = !best;
      if (!take) {
        const auto& b = best->counts;
        const auto& c = r.counts;
        take = std::make_tuple(-f, -static_cast<long>(c.tp), c.fp, c.fn) <
               std::make_tuple(-best_f, -static_cast<long>(b.tp), b.fp, b.fn);
      }
      if (take) {
        best = std::move(r);
        best_f = f;
      }
    }
    rep.counts.tp += best->counts.tp;
    rep.counts.fp += best->counts.fp;
    rep.counts.fn += best->counts.fn;
    rep.sentences.push_back(std::move(*best));
  }
  rep.precision = precision(rep.counts);
  rep.recall = recall(rep.counts);
  rep.f = f_beta(rep.precision, rep.recall, beta);
  return rep;
}

void write_json(std::ostream& out, const EvalReport& r) {
  nlohmann::ordered_json j;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["beta"] = r.beta;
  j["f"] = r.f;
  auto& sents = j["sentences"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.sentences.size(); ++k) {
    const auto& s = r.sentences[k];
    nlohmann::ordered_json js;
    js["index"] = k;
    js["annotator"] = s.annotator;
    js["tp"] = s.counts.tp;
    js["fp"] = s.counts.fp;
    js["fn"] = s.counts.fn;
    auto& edits = js["edits"] = nlohmann::ordered_json::array();
    for (const auto& e : s.edits) edits.push_back({{"start", e.start}, {"end", e.end}, {"replacement", e.replacement}});
    sents.push_back(std::move(js));
  }
  out << j.dump(2) << '\n';
}

void write_table(std::ostream& out, const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %8s %8s %8s %10s %10s %10s\n", "", "TP", "FP", "FN", "Precision", "Recall",
                ("F" + [&] {
                  char b[32];
                  std::snprintf(b, sizeof b, "%g", r.beta);
                  return std::string(b);
                }()).c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "%-10s %8zu %8zu %8zu %10.4f %10.4f %10.4f\n", "total", r.counts.tp, r.counts.fp,
                r.counts.fn, r.precision, r.recall, r.f);
  out << buf;
}

}  // namespace l2gec::m2
