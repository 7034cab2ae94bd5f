#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2gec/beam.hpp"
#include "l2gec/chains.hpp"
#include "l2gec/lexicon.hpp"
#include "l2gec/masked.hpp"
#include "l2gec/morph.hpp"
#include "l2gec/ngram.hpp"
#include "l2gec/phonetic.hpp"
#include "l2gec/rules.hpp"

namespace l2gec::pipeline {

enum class Stage { spell, comma, o_ob, masked_prep, agreement };
inline constexpr std::size_t kStageCount = 5;

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view s);
// Comma separated list, e.g. "spell,comma". Throws std::invalid_argument.
std::vector<Stage> parse_stages(std::string_view list);
std::vector<Stage> default_stages();

struct PipelineConfig {
  std::size_t beam_width = 5;
  std::vector<Stage> stages = default_stages();
  int short_len = 4;  // words up to this many letters use short_d
  int short_d = 1;
  int max_d = 2;
  int code_d = 1;
  double masked_threshold = 1.0;
  std::vector<std::string> prepositions = masked::default_prepositions();
  double min_gain = 0.1;
  int max_iterations = 1;
  bool split_sentences = true;
  std::size_t workers = 1;
  rules::RuleConfig rules;
  text::TokenizerOptions tokenizer;
};

// Borrowed pointers; a stage only needs the ones it uses.
struct Artifacts {
  const lm::NGramModel* model = nullptr;
  const lex::LexiconIndex* lexicon = nullptr;
  const phon::PhoneticIndex* phonetic = nullptr;
  const morph::MorphLexicon* morph = nullptr;
  const chains::ChainStore* chains = nullptr;
  const masked::MaskedPredictor* predictor = nullptr;  // null: LM-backed
};

// Throws MissingArtifact for the first configured stage lacking an input.
void check_artifacts(const PipelineConfig& config, const Artifacts& artifacts);

struct SpellOptions {
  int short_len = 4;
  int short_d = 1;
  int max_d = 2;
  int code_d = 1;
};

// Edit distance allowed for a word of `length` code points.
int spell_distance(std::size_t length, const SpellOptions& opts);

// Replaces out-of-lexicon words, rightmost first. Every suggestion of a
// flagged word spawns a beam entry; the beam is cut to width after each
// word. `max_beam`, when given, records the largest beam seen.
beam::CandidateBeam spell_stage(const lex::LexiconIndex& lexicon, const phon::PhoneticIndex* phonetic,
                                const lm::NGramModel& model, const beam::CandidateBeam& beam,
                                const SpellOptions& opts = {}, std::size_t* max_beam = nullptr);

struct CorrectionResult {
  std::string text;
  std::vector<beam::Change> changes;  // positions are token indices over the whole input
  std::size_t max_beam = 0;
};

class Pipeline {
 public:
  Pipeline(PipelineConfig config, Artifacts artifacts);

  const PipelineConfig& config() const { return config_; }

  // Corrects one line of text. Unchanged sentences are copied byte for byte.
  CorrectionResult run(std::string_view text) const;
  // Corrects a single tokenized sentence and returns the final beam.
  beam::CandidateBeam correct_sentence(const text::Sentence& sentence, std::size_t* max_beam = nullptr) const;

 private:
  PipelineConfig config_;
  Artifacts artifacts_;
  std::optional<masked::LmPredictor> lm_predictor_;
  std::optional<morph::LexiconTagger> tagger_;
};

struct StreamStats {
  std::size_t lines = 0;
  std::size_t changed_lines = 0;
  std::array<std::size_t, kStageCount> changes{};
  std::size_t max_beam = 0;

  std::size_t total_changes() const;
};

// One output line per input line, in input order. Writes the JSON-lines change
// log to `log` when given. Lines are processed by config().workers threads.
StreamStats correct_stream(const Pipeline& pipeline, std::istream& in, std::ostream& out, std::ostream* log = nullptr);

// {"line":i,"stage":s,"pos":p,"before":b,"after":a[,"gain":g]}
std::string change_json(std::size_t line, const beam::Change& change);

}  // namespace l2gec::pipeline
