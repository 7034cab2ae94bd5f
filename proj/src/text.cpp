#include "l2gec/text.hpp"

#include <fstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "l2gec/error.hpp"

namespace l2gec::text {

namespace {

icu::UnicodeString from_utf8(std::string_view s) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string utf8_of(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFC normalizer unavailable");
  return *n;
}

bool is_mark(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

bool is_hyphen(char32_t c) { return c == U'-' || c == U'‐' || c == U'‑'; }

std::size_t utf8_length(char32_t c) {
  return c < 0x80 ? 1 : c < 0x800 ? 2 : c < 0x10000 ? 3 : 4;
}

constexpr std::string_view kBom = "\xEF\xBB\xBF";

}  // namespace

std::u32string to_u32(std::string_view utf8) {
  icu::UnicodeString u = from_utf8(utf8);
  std::u32string out;
  out.reserve(static_cast<std::size_t>(u.length()));
  for (int32_t i = 0; i < u.length();) {
    UChar32 c = u.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i = u.moveIndex32(i, 1);
  }
  return out;
}

std::string to_utf8(std::u32string_view text) {
  icu::UnicodeString u;
  for (char32_t c : text) u.append(static_cast<UChar32>(c));
  return utf8_of(u);
}

std::string to_utf8(char32_t c) { return to_utf8(std::u32string_view(&c, 1)); }

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString u = nfc_instance().normalize(from_utf8(utf8), status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return utf8_of(u);
}

std::string casefold(std::string_view utf8, bool fold_yo) {
  icu::UnicodeString u = from_utf8(utf8);
  u.foldCase();
  UErrorCode status = U_ZERO_ERROR;
  u = nfc_instance().normalize(u, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  if (fold_yo) u.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x0451)),
                                icu::UnicodeString(static_cast<UChar32>(0x0435)));
  return utf8_of(u);
}

std::string to_upper(std::string_view utf8) {
  icu::UnicodeString u = from_utf8(utf8);
  u.toUpper();
  return utf8_of(u);
}

bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }
bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }
bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_upper(char32_t c) { return u_isUUppercase(static_cast<UChar32>(c)); }
bool is_lower(char32_t c) { return u_isULowercase(static_cast<UChar32>(c)); }
char32_t upper(char32_t c) { return static_cast<char32_t>(u_toupper(static_cast<UChar32>(c))); }

Sentence tokenize(std::string_view text, const TokenizerOptions& opts) {
  Sentence s;
  s.source = nfc(text);
  const std::u32string cps = to_u32(s.source);
  const std::size_t n = cps.size();

  std::size_t gap_start = 0;
  std::size_t i = 0;
  auto slice = [&](std::size_t a, std::size_t b) {
    return to_utf8(std::u32string_view(cps).substr(a, b - a));
  };
  while (i < n) {
    char32_t c = cps[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    TokenKind kind;
    if (is_letter(c)) {
      kind = TokenKind::word;
      ++i;
      while (i < n) {
        if (is_letter(cps[i]) || is_mark(cps[i])) {
          ++i;
        } else if (is_hyphen(cps[i]) && i + 1 < n && is_letter(cps[i + 1])) {
          i += 2;
        } else {
          break;
        }
      }
    } else if (is_digit(c)) {
      kind = TokenKind::number;
      while (i < n && is_digit(cps[i])) ++i;
    } else {
      kind = TokenKind::punctuation;
      ++i;
    }
    Token t;
    t.surface = slice(start, i);
    t.lower = casefold(t.surface, opts.fold_yo);
    t.start = start;
    t.end = i;
    t.kind = kind;
    t.gap_before = slice(gap_start, start);
    s.tokens.push_back(std::move(t));
    gap_start = i;
  }
  s.trailing = slice(gap_start, n);
  return s;
}

Token make_token(std::string_view surface, const TokenizerOptions& opts) {
  Token t;
  t.surface = nfc(surface);
  t.lower = casefold(t.surface, opts.fold_yo);
  std::u32string cps = to_u32(t.surface);
  t.kind = TokenKind::punctuation;
  for (char32_t c : cps) {
    if (is_letter(c)) {
      t.kind = TokenKind::word;
      break;
    }
  }
  if (t.kind != TokenKind::word && !cps.empty() && is_digit(cps.front()))
    t.kind = TokenKind::number;
  return t;
}

void replace_token(Sentence& s, std::size_t index, std::string_view surface,
                   const TokenizerOptions& opts) {
  Token& old = s.tokens.at(index);
  Token t = make_token(surface, opts);
  t.start = old.start;
  t.end = old.end;
  t.gap_before = std::move(old.gap_before);
  old = std::move(t);
}

namespace {

bool attaches_left(std::string_view surface) {
  static const std::u32string closing = U",.!?;:)]}»…%";
  std::u32string cps = to_u32(surface);
  return cps.size() == 1 && closing.find(cps[0]) != std::u32string::npos;
}

bool attaches_right(std::string_view surface) {
  static const std::u32string opening = U"([{«";
  std::u32string cps = to_u32(surface);
  return cps.size() == 1 && opening.find(cps[0]) != std::u32string::npos;
}

}  // namespace

std::string detokenize(const Sentence& sentence) {
  std::string out;
  const auto& toks = sentence.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.gap_before) {
      out += *t.gap_before;
    } else if (i > 0 && !attaches_left(t.surface) && !attaches_right(toks[i - 1].surface)) {
      out += ' ';
    }
    out += t.surface;
  }
  out += sentence.trailing;
  return out;
}

std::vector<std::string> lower_words(const Sentence& sentence) {
  std::vector<std::string> out;
  out.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) out.push_back(t.lower);
  return out;
}

std::string restore_case(const Token& original, std::string_view replacement) {
  std::u32string orig = to_u32(original.surface);
  std::size_t letters = 0, uppers = 0;
  for (char32_t c : orig) {
    if (!is_letter(c)) continue;
    ++letters;
    if (is_upper(c)) ++uppers;
  }
  if (letters > 1 && uppers == letters) return to_upper(replacement);

  char32_t first = 0;
  for (char32_t c : orig) {
    if (is_letter(c)) {
      first = c;
      break;
    }
  }
  if (first == 0 || !is_upper(first)) return std::string(replacement);

  std::u32string rep = to_u32(replacement);
  for (char32_t& c : rep) {
    if (is_letter(c)) {
      c = upper(c);
      break;
    }
  }
  return to_utf8(rep);
}

std::vector<std::pair<std::size_t, std::size_t>> split_sentences(std::string_view paragraph) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  // Work on code points but report byte offsets.
  std::u32string cps = to_u32(paragraph);
  std::vector<std::size_t> byte_at(cps.size() + 1, 0);
  for (std::size_t i = 0; i < cps.size(); ++i) byte_at[i + 1] = byte_at[i] + utf8_length(cps[i]);

  auto is_terminal = [](char32_t c) { return c == U'.' || c == U'!' || c == U'?'; };
  std::size_t begin = 0;
  while (begin < cps.size() && is_space(cps[begin])) ++begin;
  std::size_t i = begin;
  while (i < cps.size()) {
    if (!is_terminal(cps[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < cps.size() && is_terminal(cps[end])) ++end;
    std::size_t next = end;
    while (next < cps.size() && is_space(cps[next])) ++next;
    if (next > end && next < cps.size() && is_upper(cps[next])) {
      out.emplace_back(byte_at[begin], byte_at[end]);
      begin = next;
    }
    i = next > end ? next : end;
  }
  std::size_t last = cps.size();
  while (last > begin && is_space(cps[last - 1])) --last;
  if (last > begin) out.emplace_back(byte_at[begin], byte_at[last]);
  return out;
}

CorpusReader::CorpusReader(std::filesystem::path path, LineMode mode)
    : path_(std::move(path)), mode_(mode) {}

CorpusReader CorpusReader::from_lines(std::vector<std::string> lines, LineMode mode) {
  CorpusReader r;
  r.lines_ = std::move(lines);
  r.mode_ = mode;
  return r;
}

void CorpusReader::emit(std::string_view line,
                        const std::function<void(std::string_view)>& fn) const {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  bool blank = true;
  for (char c : line) {
    if (c != ' ' && c != '\t') {
      blank = false;
      break;
    }
  }
  if (blank) return;
  if (mode_ == LineMode::sentence) {
    fn(line);
    return;
  }
  for (auto [a, b] : split_sentences(line)) fn(line.substr(a, b - a));
}

void CorpusReader::for_each(const std::function<void(std::string_view)>& fn) const {
  if (lines_) {
    bool first = true;
    for (const auto& l : *lines_) {
      std::string_view v = l;
      if (first && v.starts_with(kBom)) v.remove_prefix(kBom.size());
      first = false;
      emit(v, fn);
    }
    return;
  }
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path_.string());
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string_view v = line;
    if (first && v.starts_with(kBom)) v.remove_prefix(kBom.size());
    first = false;
    emit(v, fn);
  }
  if (in.bad()) throw IoError("error reading corpus file " + path_.string());
}

std::vector<std::string> CorpusReader::read_all() const {
  std::vector<std::string> out;
  for_each([&](std::string_view s) { out.emplace_back(s); });
  return out;
}

}  // namespace l2gec::text
