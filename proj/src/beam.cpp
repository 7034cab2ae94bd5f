#include "l2gec/beam.hpp"

#include <algorithm>
#include <stdexcept>

namespace l2gec::beam {

CandidateBeam::CandidateBeam(std::size_t width) : width_(width) {
  if (width == 0) throw std::invalid_argument("beam width must be at least 1");
}

CandidateBeam CandidateBeam::seed(text::Sentence sentence, const lm::NGramModel* model, std::size_t width) {
  CandidateBeam b(width);
  b.push(make_candidate(std::move(sentence), model));
  return b;
}

void CandidateBeam::push(Candidate c) { candidates_.push_back(std::move(c)); }

void CandidateBeam::normalize() {
  std::stable_sort(candidates_.begin(), candidates_.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.text < b.text;
  });
  // Keep the first occurrence of each text; it has the best score.
  std::vector<Candidate> unique;
  unique.reserve(std::min(candidates_.size(), width_));
  for (auto& c : candidates_) {
    if (unique.size() == width_) break;
    bool dup = std::any_of(unique.begin(), unique.end(), [&](const Candidate& u) { return u.text == c.text; });
    if (!dup) unique.push_back(std::move(c));
  }
  candidates_ = std::move(unique);
}

Candidate make_candidate(text::Sentence sentence, const lm::NGramModel* model, std::vector<Change> changes) {
  Candidate c;
  c.text = text::detokenize(sentence);
  c.score = model ? model->score(sentence) : 0.0;
  c.sentence = std::move(sentence);
  c.changes = std::move(changes);
  return c;
}

}  // namespace l2gec::beam
