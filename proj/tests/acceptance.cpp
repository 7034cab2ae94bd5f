// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "l2gec/chains.hpp"
#include "l2gec/lexicon.hpp"
#include "l2gec/m2.hpp"
#include "l2gec/ngram.hpp"
#include "l2gec/phonetic.hpp"
#include "l2gec/pipeline.hpp"
#include "l2gec/rules.hpp"
#include "support/m2_oracle.hpp"
#include "synth.hpp"

using namespace l2gec;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Plain Wagner-Fischer with adjacent transpositions, kept separate from the library.
int osa_ref(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
    }
  return d[a.size()][b.size()];
}

Outcome metric_arithmetic() {
  double f1 = m2::f_beta(0.6617, 0.1266, 0.5);
  double f2 = m2::f_beta(0.6589, 0.1016, 0.5);
  return {std::abs(f1 - 0.3586) <= 0.0005 && std::abs(f2 - 0.3142) <= 0.0005, fmt("F0.5 = %.4f, %.4f", f1, f2)};
}

Outcome phonetic_example() {
  auto a = phon::encode("пирикрасут");
  auto b = phon::encode("перекрасят");
  int d = lex::osa_distance("пирикрасут", "перекрасят");
  return {a == "1090390604" && b == "1090390604" && d == 3, "codes " + a + " " + b + ", osa " + std::to_string(d)};
}

Outcome edit_index() {
  auto t0 = Clock::now();
  std::mt19937 rng(2024);
  const std::u32string alpha = U"абвгдеёжзиклмно";
  auto word = [&](int lo, int hi) {
    std::u32string w;
    int n = lo + static_cast<int>(rng() % (hi - lo + 1));
    for (int i = 0; i < n; ++i) w += alpha[rng() % alpha.size()];
    return w;
  };
  std::size_t checks = 0, mismatches = 0;
  for (int dict = 0; dict < 20; ++dict) {
    lex::FrequencyLexicon lexicon;
    for (int i = 0; i < 500; ++i) lexicon.add(text::to_utf8(word(2, 9)), 1 + rng() % 10);
    lex::LexiconIndex idx(lexicon, 2);
    auto words = lexicon.sorted_words();
    for (int q = 0; q < 200; ++q) {
      // half the queries are perturbed dictionary words
      std::u32string query = q % 2 ? word(1, 10) : text::to_u32(words[rng() % words.size()].first);
      if (q % 2 == 0 && !query.empty()) query[rng() % query.size()] = alpha[rng() % alpha.size()];
      for (int d = 0; d <= 2; ++d) {
        std::set<std::string> expect, got;
        for (const auto& [w, c] : words)
          if (osa_ref(text::to_u32(w), query) <= d) expect.insert(w);
        for (const auto& s : idx.lookup(text::to_utf8(query), d)) got.insert(s.word);
        ++checks;
        if (expect != got) ++mismatches;
      }
    }
  }
  double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 30.0,
          fmt("%.0f lookups, %.0f mismatches, %.1f s", static_cast<double>(checks), static_cast<double>(mismatches), secs)};
}

Outcome lm_checks() {
  const std::vector<std::string> toy{"а б", "а б", "а б", "а а"};
  auto m = th::train(toy);
  const double q = 1.0 - 1e-7;
  double ab = std::log10(0.9375 + 0.025 * q) + std::log10(0.5 + 0.1 * q) + std::log10(2.0 / 3.0 + 0.4 * q / 3.0);
  double ba = std::log10(0.0125 * q) + std::log10(0.4 * q) + std::log10(0.4 * q);
  std::vector<std::string> sab{"а", "б"}, sba{"б", "а"};
  double e_ab = std::abs(m.score(sab) - ab), e_ba = std::abs(m.score(sba) - ba);

  // normalization on the toy corpus and a synthetic one
  double worst = 0.0;
  auto check_norm = [&](const lm::NGramModel& model) {
    std::vector<lm::WordId> words;
    for (lm::WordId w = 0; w < model.vocab().size(); ++w)
      if (w != lm::kBosId) words.push_back(w);
    std::vector<std::array<lm::WordId, 2>> ctx{{lm::kBosId, lm::kBosId}};
    for (auto a : words) {
      ctx.push_back({lm::kBosId, a});
      for (auto b : words) ctx.push_back({a, b});
    }
    for (const auto& c : ctx) {
      double s = 0.0;
      for (auto w : words) s += std::pow(10.0, model.logprob(c, w));
      worst = std::max(worst, std::abs(s - 1.0));
    }
  };
  check_norm(m);
  auto synth_lm = th::train(synth::generate_corpus(th::morph_fixture(), 200, 3));
  check_norm(synth_lm);

  // ARPA round trip
  std::stringstream arpa;
  synth_lm.export_arpa(arpa);
  auto back = lm::NGramModel::import_arpa(arpa);
  double drift = 0.0;
  for (const auto& s : synth::generate_corpus(th::morph_fixture(), 100, 4)) {
    auto w = text::lower_words(text::tokenize(s));
    drift = std::max(drift, std::abs(back.score(w) - synth_lm.score(w)));
  }
  bool ok = worst < 1e-6 && e_ab < 1e-9 && e_ba < 1e-9 && drift < 1e-9;
  return {ok, fmt("norm err %.2e, oracle err %.2e/%.2e, arpa drift %.2e", worst, e_ab, e_ba, drift)};
}

Outcome maxmatch() {
  auto t0 = Clock::now();
  std::mt19937 rng(99);
  const std::vector<std::string> vocab{"а", "б", "в", "г"};
  auto tokens = [&](std::size_t n) {
    std::vector<std::string> t(n);
    for (auto& x : t) x = vocab[rng() % vocab.size()];
    return t;
  };
  int cases = 0, bad = 0;
  while (cases < 600) {
    auto src = tokens(rng() % 7);
    // hypothesis: at most two random edits applied to the source
    auto hyp = src;
    int nedits = static_cast<int>(rng() % 3);
    for (int e = 0; e < nedits; ++e) {
      int op = static_cast<int>(rng() % 3);
      if (op == 0 || hyp.empty()) hyp.insert(hyp.begin() + rng() % (hyp.size() + 1), vocab[rng() % vocab.size()]);
      else if (op == 1) hyp.erase(hyp.begin() + rng() % hyp.size());
      else hyp[rng() % hyp.size()] = vocab[rng() % vocab.size()];
    }
    if (hyp.size() > 6) continue;
    // gold: up to two random non-overlapping spans
    std::vector<m2::EditSpan> gold;
    std::size_t pos = 0;
    for (int g = 0; g < 2 && pos <= src.size(); ++g) {
      if (rng() % 3 == 0) continue;
      m2::EditSpan e;
      e.start = pos + rng() % (src.size() - pos + 1);
      e.end = std::min(src.size(), e.start + rng() % 3);
      auto rep = tokens(rng() % 3);
      for (const auto& t : rep) e.replacement += (e.replacement.empty() ? "" : " ") + t;
      if (e.start == e.end && e.replacement.empty()) continue;
      gold.push_back(e);
      pos = e.end + 1;
    }
    auto got = m2::extract_edits(src, hyp, gold);
    auto all = oracle::all_edit_sets(src, hyp, 2);
    std::size_t best_tp = 0;
    for (const auto& e : all) best_tp = std::max(best_tp, m2::count_matches(e, gold));
    std::size_t min_edits = SIZE_MAX;
    for (const auto& e : all)
      if (m2::count_matches(e, gold) == best_tp) min_edits = std::min(min_edits, m2::count_distinct(e));
    if (m2::count_matches(got, gold) != best_tp || m2::count_distinct(got) != min_edits) ++bad;
    ++cases;
  }
  double secs = seconds_since(t0);
  return {bad == 0 && secs < 60.0, fmt("%.0f cases, %.0f disagreements, %.1f s", cases, bad, secs)};
}

Outcome rules_fixture() {
  auto apply = [](const std::string& s) {
    return text::detokenize(rules::apply_o_ob_rule(rules::apply_comma_rule(text::tokenize(s))));
  };
  auto lines = th::fixture_lines("rules.tsv");
  int wrong = 0, unstable = 0;
  std::string all;
  for (const auto& l : lines) {
    auto cols = th::split(l, '\t');
    auto once = apply(cols[0]);
    if (once != cols[1]) ++wrong;
    if (apply(once) != once) ++unstable;
    all += text::casefold(cols[0]) + "\n";
  }
  int covered = 0;
  for (auto k : {" не а", "потому что", "ни что", "о еде", "об ёлке", "о юге", "об языке"})
    covered += all.find(k) != std::string::npos;
  bool ok = lines.size() == 30 && wrong == 0 && unstable == 0 && covered == 7;
  return {ok, fmt("%.0f sentences, %.0f wrong, %.0f not idempotent, %.0f/7 blockers+vowels covered",
                  static_cast<double>(lines.size()), wrong, unstable, covered)};
}

struct World {
  std::vector<std::string> corpus;
  lm::NGramModel model;
  lex::LexiconIndex lexicon;
  phon::PhoneticIndex phonetic;
  chains::ChainStore chains;
};

const World& world() {
  static const World w = [] {
    auto corpus = synth::generate_corpus(th::morph_fixture(), 50000, 17);
    auto reader = text::CorpusReader::from_lines(corpus);
    auto model = lm::estimate_kn(lm::count_ngrams(reader));
    auto freq = lex::build_lexicon(reader);
    auto phonetic = phon::PhoneticIndex::build(freq, 1);
    lex::LexiconIndex idx(std::move(freq), 2);
    auto store = chains::build_store(reader, th::morph_fixture());
    return World{std::move(corpus), std::move(model), std::move(idx), std::move(phonetic), std::move(store)};
  }();
  return w;
}

pipeline::Artifacts artifacts(const World& w) {
  pipeline::Artifacts a;
  a.model = &w.model;
  a.lexicon = &w.lexicon;
  a.phonetic = &w.phonetic;
  a.morph = &th::morph_fixture();
  a.chains = &w.chains;
  return a;
}

Outcome end_to_end() {
  auto t0 = Clock::now();
  const auto& w = world();
  pipeline::PipelineConfig cfg;
  cfg.stages = {pipeline::Stage::spell};
  pipeline::Pipeline p(cfg, artifacts(w));
  auto held_out = synth::generate_corpus(th::morph_fixture(), 500, 9001);
  synth::Rng rng(31337);
  std::size_t corrupted = 0, restored = 0, max_beam = 0, clean_changed = 0;
  for (const auto& s : held_out) {
    auto clean = p.run(s);
    if (clean.text != s) ++clean_changed;
    max_beam = std::max(max_beam, clean.max_beam);
    auto c = synth::corrupt(s, w.lexicon.lexicon(), 0.10, rng);
    if (c.positions.empty()) continue;
    auto r = p.run(c.text);
    max_beam = std::max(max_beam, r.max_beam);
    auto toks = text::tokenize(r.text).tokens;
    for (std::size_t k = 0; k < c.positions.size(); ++k) {
      ++corrupted;
      if (c.positions[k] < toks.size() && toks[c.positions[k]].surface == c.originals[k]) ++restored;
    }
  }
  double rate = corrupted ? static_cast<double>(restored) / corrupted : 0.0;
  double secs = seconds_since(t0);
  bool ok = rate >= 0.8 && max_beam <= 5 && clean_changed == 0 && secs < 300.0;
  return {ok, fmt("restored %.3f of corrupted tokens, max beam %.0f, clean changed %.0f, %.1f s", rate,
                  static_cast<double>(max_beam), static_cast<double>(clean_changed), secs)};
}

Outcome gated_gains() {
  const auto& w = world();
  pipeline::PipelineConfig cfg;
  pipeline::Pipeline p(cfg, artifacts(w));
  auto held_out = synth::generate_corpus(th::morph_fixture(), 300, 555);
  synth::Rng rng(808);
  std::size_t gated = 0, below = 0;
  for (const auto& s : held_out) {
    auto noisy = synth::inject_grammar_error(s, th::morph_fixture(), rng);
    noisy = synth::corrupt(noisy, w.lexicon.lexicon(), 0.05, rng).text;
    for (const auto& ch : p.run(noisy).changes) {
      double threshold;
      if (ch.stage == "masked_prep") threshold = cfg.masked_threshold;
      else if (ch.stage == "agreement") threshold = cfg.min_gain;
      else continue;
      ++gated;
      if (!ch.gain || *ch.gain < threshold) ++below;
    }
  }
  return {below == 0 && gated > 0,
          fmt("%.0f gated changes, %.0f below threshold", static_cast<double>(gated), static_cast<double>(below))};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"metric arithmetic", metric_arithmetic},
      {"phonetic worked example", phonetic_example},
      {"edit index vs brute force", edit_index},
      {"language model oracle, normalization, ARPA", lm_checks},
      {"MaxMatch vs exhaustive alignment", maxmatch},
      {"rule fixture and idempotence", rules_fixture},
      {"end-to-end typo restoration", end_to_end},
      {"gated changes meet thresholds", gated_gains},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
