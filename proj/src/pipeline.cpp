#include "l2gec/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "l2gec/error.hpp"

namespace l2gec::pipeline {

namespace {

constexpr std::array<std::string_view, kStageCount> kStageNames{"spell", "comma", "o_ob", "masked_prep", "agreement"};

struct SpellEntry {
  beam::Candidate cand;
  std::size_t cursor;  // tokens at or after the cursor are done
};

std::optional<std::size_t> next_flagged(const lex::LexiconIndex& lexicon, const text::Sentence& s, std::size_t cursor) {
  for (std::size_t i = cursor; i-- > 0;) {
    const auto& t = s.tokens[i];
    if (t.is_word() && !lexicon.contains(t)) return i;
  }
  return std::nullopt;
}

// Same ordering and dedupe as CandidateBeam::normalize, carrying cursors.
void cut(std::vector<SpellEntry>& entries, std::size_t width) {
  std::stable_sort(entries.begin(), entries.end(), [](const SpellEntry& a, const SpellEntry& b) {
    if (a.cand.score != b.cand.score) return a.cand.score > b.cand.score;
    return a.cand.text < b.cand.text;
  });
  std::vector<SpellEntry> kept;
  for (auto& e : entries) {
    if (kept.size() == width) break;
    bool dup = std::any_of(kept.begin(), kept.end(), [&](const SpellEntry& k) { return k.cand.text == e.cand.text; });
    if (!dup) kept.push_back(std::move(e));
  }
  entries = std::move(kept);
}

std::vector<std::string> spell_options(const lex::LexiconIndex& lexicon, const phon::PhoneticIndex* phonetic,
                                       const text::Token& token, const SpellOptions& opts) {
  std::vector<std::string> out;
  auto len = text::to_u32(token.lower).size();
  int d = std::min(spell_distance(len, opts), lexicon.max_distance());
  for (auto& s : lexicon.lookup(token.lower, d)) out.push_back(std::move(s.word));
  if (out.empty() && phonetic) {
    int cd = std::min(opts.code_d, phonetic->max_code_distance());
    for (auto& c : phonetic->candidates(token.lower, cd)) out.push_back(std::move(c.word));
  }
  return out;
}

}  // namespace

std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

std::optional<Stage> parse_stage(std::string_view s) {
  for (std::size_t i = 0; i < kStageCount; ++i)
    if (kStageNames[i] == s) return static_cast<Stage>(i);
  return std::nullopt;
}

std::vector<Stage> parse_stages(std::string_view list) {
  std::vector<Stage> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto comma = list.find(',', pos);
    auto item = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto st = parse_stage(item);
      if (!st) throw std::invalid_argument("unknown stage '" + std::string(item) + "'");
      out.push_back(*st);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<Stage> default_stages() {
  return {Stage::spell, Stage::comma, Stage::o_ob, Stage::masked_prep, Stage::agreement};
}

int spell_distance(std::size_t length, const SpellOptions& opts) {
  return length <= static_cast<std::size_t>(opts.short_len) ? opts.short_d : opts.max_d;
}

beam::CandidateBeam spell_stage(const lex::LexiconIndex& lexicon, const phon::PhoneticIndex* phonetic,
                                const lm::NGramModel& model, const beam::CandidateBeam& beam,
                                const SpellOptions& opts, std::size_t* max_beam) {
  std::vector<SpellEntry> entries;
  for (const auto& c : beam) entries.push_back({c, c.sentence.tokens.size()});

  while (true) {
    std::vector<SpellEntry> next;
    bool progressed = false;
    for (auto& e : entries) {
      auto pos = next_flagged(lexicon, e.cand.sentence, e.cursor);
      if (!pos) {
        e.cursor = 0;
        next.push_back(std::move(e));
        continue;
      }
      progressed = true;
      const auto& tok = e.cand.sentence.tokens[*pos];
      auto options = spell_options(lexicon, phonetic, tok, opts);
      if (options.empty()) {
        e.cursor = *pos;
        next.push_back(std::move(e));
        continue;
      }
      for (const auto& w : options) {
        text::Sentence s = e.cand.sentence;
        text::replace_token(s, *pos, text::restore_case(tok, w));
        auto changes = e.cand.changes;
        changes.push_back({"spell", *pos, tok.surface, s.tokens[*pos].surface, std::nullopt});
        next.push_back({beam::make_candidate(std::move(s), &model, std::move(changes)), *pos});
      }
    }
    cut(next, beam.width());
    entries = std::move(next);
    if (max_beam) *max_beam = std::max(*max_beam, entries.size());
    if (!progressed) break;
  }

  beam::CandidateBeam out(beam.width());
  for (auto& e : entries) out.push(std::move(e.cand));
  out.normalize();
  return out;
}

void check_artifacts(const PipelineConfig& config, const Artifacts& a) {
  for (Stage s : config.stages) {
    std::string name(to_string(s));
    switch (s) {
      case Stage::spell:
        if (!a.lexicon) throw MissingArtifact(name, "a frequency lexicon");
        if (!a.model) throw MissingArtifact(name, "a language model");
        break;
      case Stage::comma:
      case Stage::o_ob: break;
      case Stage::masked_prep:
        if (!a.model) throw MissingArtifact(name, "a language model");
        if (!a.morph) throw MissingArtifact(name, "a morphology lexicon");
        break;
      case Stage::agreement:
        if (!a.model) throw MissingArtifact(name, "a language model");
        if (!a.morph) throw MissingArtifact(name, "a morphology lexicon");
        if (!a.chains) throw MissingArtifact(name, "a chain store");
        break;
    }
  }
}

Pipeline::Pipeline(PipelineConfig config, Artifacts artifacts) : config_(std::move(config)), artifacts_(artifacts) {
  if (config_.beam_width == 0) throw std::invalid_argument("beam width must be at least 1");
  check_artifacts(config_, artifacts_);
  if (artifacts_.model && !artifacts_.predictor) lm_predictor_.emplace(*artifacts_.model);
  if (artifacts_.morph) tagger_.emplace(*artifacts_.morph);
  if (!config_.rules.lexicon) config_.rules.lexicon = artifacts_.morph;
}

beam::CandidateBeam Pipeline::correct_sentence(const text::Sentence& sentence, std::size_t* max_beam) const {
  const auto* model = artifacts_.model;
  auto beam = beam::CandidateBeam::seed(sentence, model, config_.beam_width);
  auto track = [&] {
    if (max_beam) *max_beam = std::max(*max_beam, beam.size());
  };
  track();

  auto apply_rule = [&](auto rule) {
    beam::CandidateBeam out(beam.width());
    for (const auto& c : beam) {
      auto changes = c.changes;
      auto s = rule(c.sentence, config_.rules, &changes);
      if (changes.size() == c.changes.size()) {
        out.push(c);
      } else {
        out.push(beam::make_candidate(std::move(s), model, std::move(changes)));
      }
    }
    out.normalize();
    return out;
  };

  SpellOptions spell{config_.short_len, config_.short_d, config_.max_d, config_.code_d};
  for (int iter = 0; iter < std::max(1, config_.max_iterations); ++iter) {
    for (Stage st : config_.stages) {
      switch (st) {
        case Stage::spell:
          beam = spell_stage(*artifacts_.lexicon, artifacts_.phonetic, *model, beam, spell, max_beam);
          break;
        case Stage::comma: beam = apply_rule(rules::apply_comma_rule); break;
        case Stage::o_ob: beam = apply_rule(rules::apply_o_ob_rule); break;
        case Stage::masked_prep: {
          const masked::MaskedPredictor& pred =
              artifacts_.predictor ? *artifacts_.predictor : static_cast<const masked::MaskedPredictor&>(*lm_predictor_);
          masked::PrepositionOptions po;
          po.threshold = config_.masked_threshold;
          po.prepositions = config_.prepositions;
          beam = masked::correct_prepositions(pred, *tagger_, *model, beam, po);
          break;
        }
        case Stage::agreement:
          beam = chains::correct_agreement(*artifacts_.chains, *model, *artifacts_.morph, beam, {config_.min_gain});
          break;
      }
      track();
    }
  }
  return beam;
}

CorrectionResult Pipeline::run(std::string_view line) const {
  CorrectionResult result;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  if (config_.split_sentences) {
    ranges = text::split_sentences(line);
  } else {
    std::size_t b = line.find_first_not_of(" \t\r\n");
    std::size_t e = line.find_last_not_of(" \t\r\n");
    if (b != std::string_view::npos) ranges.push_back({b, e + 1});
  }

  std::size_t copied = 0;
  std::size_t token_offset = 0;
  for (auto [b, e] : ranges) {
    result.text.append(line.substr(copied, b - copied));
    auto piece = line.substr(b, e - b);
    auto sentence = text::tokenize(piece, config_.tokenizer);
    auto beam = correct_sentence(sentence, &result.max_beam);
    const auto& top = beam.top();
    if (top.changes.empty()) {
      result.text.append(piece);
    } else {
      result.text.append(top.text);
      for (auto c : top.changes) {
        c.pos += token_offset;
        result.changes.push_back(std::move(c));
      }
    }
    token_offset += top.sentence.tokens.size();
    copied = e;
  }
  result.text.append(line.substr(copied));
  return result;
}

std::size_t StreamStats::total_changes() const {
  std::size_t n = 0;
  for (auto c : changes) n += c;
  return n;
}

std::string change_json(std::size_t line, const beam::Change& change) {
  nlohmann::ordered_json j;
  j["line"] = line;
  j["stage"] = change.stage;
  j["pos"] = change.pos;
  j["before"] = change.before;
  j["after"] = change.after;
  if (change.gain) j["gain"] = *change.gain;
  return j.dump();
}

StreamStats correct_stream(const Pipeline& pipeline, std::istream& in, std::ostream& out, std::ostream* log) {
  StreamStats stats;
  const std::size_t workers = std::max<std::size_t>(1, pipeline.config().workers);
  const std::size_t batch = workers == 1 ? 1 : workers * 64;

  std::vector<std::string> lines;
  std::vector<CorrectionResult> results;
  std::size_t line_no = 0;

  auto flush = [&] {
    results.assign(lines.size(), {});
    if (workers == 1 || lines.size() == 1) {
      for (std::size_t i = 0; i < lines.size(); ++i) results[i] = pipeline.run(lines[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::exception_ptr failure;
      std::mutex failure_mu;
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < std::min(workers, lines.size()); ++w) {
        pool.emplace_back([&] {
          try {
            for (std::size_t i; (i = next++) < lines.size();) results[i] = pipeline.run(lines[i]);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      if (failure) std::rethrow_exception(failure);
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      ++line_no;
      const auto& r = results[i];
      out << r.text << '\n';
      ++stats.lines;
      if (!r.changes.empty()) ++stats.changed_lines;
      stats.max_beam = std::max(stats.max_beam, r.max_beam);
      for (const auto& c : r.changes) {
        if (auto st = parse_stage(c.stage)) ++stats.changes[static_cast<std::size_t>(*st)];
        if (log) *log << change_json(line_no, c) << '\n';
      }
    }
    lines.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (lines.size() >= batch) flush();
  }
  if (in.bad()) throw IoError("read error on input stream");
  if (!lines.empty()) flush();
  out.flush();
  if (!out) throw IoError("write error on output stream");
  return stats;
}

}  // namespace l2gec::pipeline
