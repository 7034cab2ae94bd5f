#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "l2gec/beam.hpp"
#include "l2gec/error.hpp"
#include "l2gec/morph.hpp"
#include "l2gec/ngram.hpp"

namespace l2gec::masked {

struct Prediction {
  std::string token;
  double score = 0.0;
};

// Fills a single masked slot. Scores are comparable within one call only.
class MaskedPredictor {
 public:
  virtual ~MaskedPredictor() = default;
  // Ranked by score desc, ties by token. `candidates` restricts the fillers.
  virtual std::vector<Prediction> predict(std::span<const std::string> left, std::span<const std::string> right,
                                          std::span<const std::string> candidates) const = 0;
};

class PredictorError : public Error {
 public:
  using Error::Error;
};
class PredictorTimeout : public PredictorError {
 public:
  using PredictorError::PredictorError;
};
class BadResponse : public PredictorError {
 public:
  using PredictorError::PredictorError;
};

std::vector<std::string> default_prepositions();

// Scores each filler as the LM log-probability of the whole sentence.
class LmPredictor : public MaskedPredictor {
 public:
  explicit LmPredictor(const lm::NGramModel& model) : model_(model) {}
  std::vector<Prediction> predict(std::span<const std::string> left, std::span<const std::string> right,
                                  std::span<const std::string> candidates) const override;

 private:
  const lm::NGramModel& model_;
};

// POSTs {"left":[..],"right":[..],"candidates":[..]} and expects
// {"scores":[..]} aligned with candidates. Non-200 or malformed bodies throw
// BadResponse; connection failures and timeouts throw PredictorTimeout.
class RemotePredictor : public MaskedPredictor {
 public:
  RemotePredictor(std::string endpoint, std::chrono::milliseconds timeout);
  std::vector<Prediction> predict(std::span<const std::string> left, std::span<const std::string> right,
                                  std::span<const std::string> candidates) const override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

std::unique_ptr<MaskedPredictor> lm_predictor(const lm::NGramModel& model);
std::unique_ptr<MaskedPredictor> remote_predictor(const std::string& endpoint, std::chrono::milliseconds timeout);

struct PrepositionOptions {
  double threshold = 1.0;  // minimum log10 gain
  std::vector<std::string> prepositions = default_prepositions();
};

// Masks each ADP token left to right and substitutes the top prediction when
// the sentence score rises by at least `threshold`. Predictor failures leave
// the candidate unchanged.
beam::CandidateBeam correct_prepositions(const MaskedPredictor& predictor, const morph::Tagger& tagger,
                                         const lm::NGramModel& model, const beam::CandidateBeam& beam,
                                         const PrepositionOptions& opts = {});

}  // namespace l2gec::masked
