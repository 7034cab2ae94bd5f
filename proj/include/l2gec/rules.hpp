#pragma once

#include <set>
#include <string>
#include <vector>

#include "l2gec/beam.hpp"
#include "l2gec/morph.hpp"
#include "l2gec/text.hpp"

namespace l2gec::rules {

struct RuleConfig {
  bool comma_rule_enabled = true;
  bool prep_rule_enabled = true;
  std::set<std::string> comma_triggers{"а", "что"};
  std::set<std::string> comma_blockers{"потому", "не", "ни"};
  // Forms of «который»; a morphology lexicon, when given, also recognizes
  // any form whose lemma is «который».
  std::set<std::string> relative_forms{"который", "которая", "которое", "которые", "которого",
                                       "которой",  "которому", "которую", "которым",  "котором",
                                       "которых",  "которыми"};
  std::u32string iotified_vowels = U"еёюя";
  const morph::MorphLexicon* lexicon = nullptr;
};

// Inserts a comma before а/что (unless the previous word is a blocker) and
// before forms of «который». Skips triggers with no word before them and
// triggers already preceded by punctuation. Appends one Change per insertion
// when `log` is given.
text::Sentence apply_comma_rule(const text::Sentence& sentence, const RuleConfig& config = {},
                                std::vector<beam::Change>* log = nullptr);

// о before a consonant or an iotified vowel, об before any other vowel.
text::Sentence apply_o_ob_rule(const text::Sentence& sentence, const RuleConfig& config = {},
                               std::vector<beam::Change>* log = nullptr);

}  // namespace l2gec::rules
