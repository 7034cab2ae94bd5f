#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "l2gec/ngram.hpp"
#include "l2gec/text.hpp"

namespace l2gec::beam {

// One modification made to a sentence by a stage.
struct Change {
  std::string stage;
  std::size_t pos = 0;  // token index after the change
  std::string before;   // empty for insertions
  std::string after;
  std::optional<double> gain;  // LM score gain, for gated stages

  bool operator==(const Change&) const = default;
};

struct Candidate {
  text::Sentence sentence;
  double score = 0.0;
  std::string text;  // detokenized form, the identity of a candidate
  std::vector<Change> changes;
};

// Up to `width` versions of one sentence, sorted by score desc with ties
// broken by text; texts are unique.
class CandidateBeam {
 public:
  explicit CandidateBeam(std::size_t width = 5);

  // Width-1 beam holding the original sentence.
  static CandidateBeam seed(text::Sentence sentence, const lm::NGramModel* model, std::size_t width);

  std::size_t width() const { return width_; }
  std::size_t size() const { return candidates_.size(); }
  bool empty() const { return candidates_.empty(); }
  const std::vector<Candidate>& candidates() const { return candidates_; }
  const Candidate& top() const { return candidates_.front(); }

  // Adds a candidate; call normalize() before reading.
  void push(Candidate c);
  // Sort, deduplicate, truncate to width.
  void normalize();

  auto begin() const { return candidates_.begin(); }
  auto end() const { return candidates_.end(); }

 private:
  std::size_t width_;
  std::vector<Candidate> candidates_;
};

// Recomputes text and score for a modified sentence. A null model scores 0.
Candidate make_candidate(text::Sentence sentence, const lm::NGramModel* model,
                         std::vector<Change> changes = {});

}  // namespace l2gec::beam
