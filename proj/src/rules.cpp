#include "l2gec/rules.hpp"

#include <algorithm>

namespace l2gec::rules {

namespace {

bool is_relative(const text::Token& t, const RuleConfig& config) {
  if (config.relative_forms.count(t.lower)) return true;
  if (!config.lexicon) return false;
  auto entries = config.lexicon->analyze(t.lower);
  return std::any_of(entries.begin(), entries.end(), [](const morph::MorphEntry& e) { return e.lemma == "который"; });
}

bool is_cyrillic_vowel(char32_t c) {
  static const std::u32string vowels = U"аеёиоуыэюя";
  return vowels.find(c) != std::u32string::npos;
}

bool is_cyrillic_consonant(char32_t c) {
  static const std::u32string consonants = U"бвгджзйклмнпрстфхцчшщ";
  return consonants.find(c) != std::u32string::npos;
}

}  // namespace

text::Sentence apply_comma_rule(const text::Sentence& sentence, const RuleConfig& config,
                                std::vector<beam::Change>* log) {
  if (!config.comma_rule_enabled) return sentence;
  text::Sentence out = sentence;
  out.tokens.clear();
  const auto& toks = sentence.tokens;
  bool seen_word = false;
  const text::Token* prev_word = nullptr;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.is_word()) {
      bool trigger = config.comma_triggers.count(t.lower) || is_relative(t, config);
      bool after_punct = i > 0 && !toks[i - 1].is_word() && toks[i - 1].kind != text::TokenKind::number;
      bool blocked = config.comma_triggers.count(t.lower) && prev_word &&
                     config.comma_blockers.count(prev_word->lower);
      if (trigger && seen_word && !after_punct && !blocked) {
        text::Token comma = text::make_token(",");
        comma.start = comma.end = t.start;
        out.tokens.push_back(std::move(comma));
        if (log) log->push_back({"comma", out.tokens.size() - 1, "", ",", std::nullopt});
      }
      seen_word = true;
      prev_word = &t;
    }
    out.tokens.push_back(t);
  }
  return out;
}

text::Sentence apply_o_ob_rule(const text::Sentence& sentence, const RuleConfig& config,
                               std::vector<beam::Change>* log) {
  if (!config.prep_rule_enabled) return sentence;
  text::Sentence out = sentence;
  for (std::size_t i = 0; i + 1 < out.tokens.size(); ++i) {
    const auto& t = out.tokens[i];
    if (t.lower != "о" && t.lower != "об") continue;
    const auto& next = out.tokens[i + 1];
    if (!next.is_word()) continue;
    std::u32string first = text::to_u32(next.lower);
    if (first.empty()) continue;
    char32_t c = first.front();
    std::string want;
    if (is_cyrillic_consonant(c) || config.iotified_vowels.find(c) != std::u32string::npos) {
      want = "о";
    } else if (is_cyrillic_vowel(c)) {
      want = "об";
    } else {
      continue;
    }
    if (t.lower == want) continue;
    std::string before = t.surface;
    text::replace_token(out, i, text::restore_case(t, want));
    if (log) log->push_back({"o_ob", i, before, out.tokens[i].surface, std::nullopt});
  }
  return out;
}

}  // namespace l2gec::rules
