#include "l2gec/masked.hpp"

#include <algorithm>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

namespace l2gec::masked {

namespace {

void rank(std::vector<Prediction>& preds) {
  std::stable_sort(preds.begin(), preds.end(), [](const Prediction& a, const Prediction& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.token < b.token;
  });
}

}  // namespace

std::vector<std::string> default_prepositions() {
  return {"в",  "во", "на", "с",   "со",  "о",   "об",  "обо",   "к",   "ко",   "из",    "от",    "до",
          "по", "за", "при", "у", "для", "про", "через", "над", "под", "перед", "между", "без"};
}

std::vector<Prediction> LmPredictor::predict(std::span<const std::string> left, std::span<const std::string> right,
                                             std::span<const std::string> candidates) const {
  std::vector<std::string> words;
  words.reserve(left.size() + right.size() + 1);
  for (const auto& w : left) words.push_back(text::casefold(w));
  std::size_t slot = words.size();
  words.emplace_back();
  for (const auto& w : right) words.push_back(text::casefold(w));

  std::vector<Prediction> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    words[slot] = c;
    out.push_back({c, model_.score(words)});
  }
  rank(out);
  return out;
}

RemotePredictor::RemotePredictor(std::string endpoint, std::chrono::milliseconds timeout) : timeout_(timeout) {
  auto scheme = endpoint.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  auto slash = endpoint.find('/', host_start);
  if (slash == std::string::npos) {
    scheme_host_port_ = endpoint;
    path_ = "/";
  } else {
    scheme_host_port_ = endpoint.substr(0, slash);
    path_ = endpoint.substr(slash);
  }
}

std::vector<Prediction> RemotePredictor::predict(std::span<const std::string> left, std::span<const std::string> right,
                                                 std::span<const std::string> candidates) const {
  nlohmann::json body;
  body["left"] = std::vector<std::string>(left.begin(), left.end());
  body["right"] = std::vector<std::string>(right.begin(), right.end());
  body["candidates"] = std::vector<std::string>(candidates.begin(), candidates.end());

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  auto res = client.Post(path_, body.dump(), "application/json");
  if (!res) throw PredictorTimeout("masked predictor unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BadResponse("masked predictor returned HTTP " + std::to_string(res->status));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw BadResponse(std::string("masked predictor sent invalid JSON: ") + e.what());
  }
  if (!reply.is_object() || !reply.contains("scores") || !reply["scores"].is_array() ||
      reply["scores"].size() != candidates.size())
    throw BadResponse("masked predictor reply lacks a 'scores' array matching the candidates");

  std::vector<Prediction> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& s = reply["scores"][i];
    if (!s.is_number()) throw BadResponse("non-numeric score in masked predictor reply");
    double v = s.get<double>();
    if (!std::isfinite(v)) throw BadResponse("non-finite score in masked predictor reply");
    out.push_back({candidates[i], v});
  }
  rank(out);
  return out;
}

std::unique_ptr<MaskedPredictor> lm_predictor(const lm::NGramModel& model) {
  return std::make_unique<LmPredictor>(model);
}

std::unique_ptr<MaskedPredictor> remote_predictor(const std::string& endpoint, std::chrono::milliseconds timeout) {
  return std::make_unique<RemotePredictor>(endpoint, timeout);
}

beam::CandidateBeam correct_prepositions(const MaskedPredictor& predictor, const morph::Tagger& tagger,
                                         const lm::NGramModel& model, const beam::CandidateBeam& beam,
                                         const PrepositionOptions& opts) {
  beam::CandidateBeam out(beam.width());
  for (const auto& cand : beam) {
    text::Sentence sentence = cand.sentence;
    double score = cand.score;
    auto changes = cand.changes;
    auto tags = tagger.tag(sentence);
    try {
      for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
        if (tags[i].pos != morph::Pos::ADP) continue;
        std::vector<std::string> left, right;
        for (std::size_t j = 0; j < i; ++j) left.push_back(sentence.tokens[j].surface);
        for (std::size_t j = i + 1; j < sentence.tokens.size(); ++j) right.push_back(sentence.tokens[j].surface);
        auto preds = predictor.predict(left, right, opts.prepositions);
        if (preds.empty()) continue;
        const auto& current = sentence.tokens[i].lower;
        const auto& best = preds.front();
        if (best.token == current) continue;
        auto cur = std::find_if(preds.begin(), preds.end(), [&](const Prediction& p) { return p.token == current; });
        if (cur != preds.end() && cur->score >= best.score) continue;

        text::Sentence s = sentence;
        text::replace_token(s, i, text::restore_case(sentence.tokens[i], best.token));
        double new_score = model.score(s);
        double gain = new_score - score;
        if (!(gain >= opts.threshold)) continue;
        changes.push_back({"masked_prep", i, sentence.tokens[i].surface, s.tokens[i].surface, gain});
        sentence = std::move(s);
        score = new_score;
      }
    } catch (const PredictorError&) {
      out.push(cand);
      continue;
    }
    out.push(beam::make_candidate(std::move(sentence), &model, std::move(changes)));
  }
  out.normalize();
  return out;
}

}  // namespace l2gec::masked
