#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace l2gec::m2 {

// Token span [start, end) of the source replaced by `replacement` (tokens
// joined by single spaces; empty for deletions). start == end is an insertion.
struct EditSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string replacement;
  std::string type;
  int annotator = 0;

  // Matching ignores type and annotator.
  bool same_edit(const EditSpan& o) const {
    return start == o.start && end == o.end && replacement == o.replacement;
  }
};

struct AnnotatedSentence {
  std::vector<std::string> source;
  // annotator id -> sorted, non-overlapping gold edits. A sentence without
  // A-lines gets annotator 0 with no edits.
  std::map<int, std::vector<EditSpan>> gold;
};

std::vector<std::string> split_tokens(std::string_view line);

// Throws M2ParseError with the offending line number.
std::vector<AnnotatedSentence> parse_m2(std::istream& in);
std::vector<AnnotatedSentence> parse_m2_file(const std::string& path);

// System edits between source and hypothesis that overlap `gold` the most.
// Edits are runs of at most `merge_window` consecutive non-match operations
// along an optimal Levenshtein alignment. Ties: fewest edits, then the
// lexicographically smallest (start, end, replacement length, replacement)
// sequence.
std::vector<EditSpan> extract_edits(const std::vector<std::string>& source, const std::vector<std::string>& hypothesis,
                                    const std::vector<EditSpan>& gold, int merge_window = 2);

// Number of distinct system edits that appear in gold.
std::size_t count_matches(const std::vector<EditSpan>& system, const std::vector<EditSpan>& gold);
std::size_t count_distinct(const std::vector<EditSpan>& edits);

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

// 0/0 is taken as 1 for precision and recall.
double precision(const Counts& c);
double recall(const Counts& c);
double f_beta(double p, double r, double beta);

struct SentenceResult {
  int annotator = 0;
  Counts counts;
  std::vector<EditSpan> edits;
};

struct EvalReport {
  Counts counts;
  double precision = 1.0;
  double recall = 1.0;
  double beta = 0.5;
  double f = 1.0;
  std::vector<SentenceResult> sentences;
};

// The annotator is chosen per sentence by sentence-level F, then TP desc,
// FP asc, FN asc, id asc. Throws LengthMismatch.
EvalReport score(const std::vector<AnnotatedSentence>& annotated,
                 const std::vector<std::vector<std::string>>& hypotheses, double beta = 0.5, int merge_window = 2);

void write_json(std::ostream& out, const EvalReport& report);
void write_table(std::ostream& out, const EvalReport& report);

}  // namespace l2gec::m2
