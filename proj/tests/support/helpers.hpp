#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "l2gec/morph.hpp"
#include "l2gec/ngram.hpp"
#include "l2gec/text.hpp"

namespace th {

inline std::string data_path(const std::string& name) { return std::string(L2GEC_TEST_DATA) + "/" + name; }

// Non-empty lines that do not start with '#'.
inline std::vector<std::string> fixture_lines(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline const l2gec::morph::MorphLexicon& morph_fixture() {
  static const auto lex = l2gec::morph::MorphLexicon::load(data_path("morph.tsv"));
  return lex;
}

inline l2gec::lm::NGramModel train(const std::vector<std::string>& lines) {
  auto counts = l2gec::lm::count_ngrams(l2gec::text::CorpusReader::from_lines(lines));
  return l2gec::lm::estimate_kn(counts);
}

inline std::vector<std::string> surfaces(const l2gec::text::Sentence& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens) out.push_back(t.surface);
  return out;
}

}  // namespace th
