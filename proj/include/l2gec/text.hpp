#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace l2gec::text {

// --- Unicode helpers (ICU-backed) ---

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
std::string to_utf8(char32_t c);

std::string nfc(std::string_view utf8);
// Full case folding followed by NFC. With fold_yo, ё is folded to е.
std::string casefold(std::string_view utf8, bool fold_yo = false);
std::string to_upper(std::string_view utf8);

bool is_letter(char32_t c);
bool is_digit(char32_t c);
bool is_space(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
char32_t upper(char32_t c);

// --- Tokens and sentences ---

enum class TokenKind { word, punctuation, number };

struct Token {
  std::string surface;  // NFC
  std::string lower;    // casefold(surface)
  std::size_t start = 0;  // code point offsets into the NFC source
  std::size_t end = 0;
  TokenKind kind = TokenKind::word;
  // Source text between the previous token (or sentence start) and this one.
  // Empty optional for tokens that did not come from the source.
  std::optional<std::string> gap_before;

  bool is_word() const { return kind == TokenKind::word; }
  bool is_punct() const { return kind == TokenKind::punctuation; }
};

struct Sentence {
  std::string source;  // NFC form of the tokenized text
  std::vector<Token> tokens;
  std::string trailing;  // source text after the last token

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
};

struct TokenizerOptions {
  bool fold_yo = false;
};

Sentence tokenize(std::string_view text, const TokenizerOptions& opts = {});

// Builds a token that does not originate from a source string (replacement or
// insertion). Its gap is left empty so detokenize applies default spacing.
Token make_token(std::string_view surface, const TokenizerOptions& opts = {});

// Replaces the surface of token `index`, keeping its position and gap.
void replace_token(Sentence& s, std::size_t index, std::string_view surface,
                   const TokenizerOptions& opts = {});

std::string detokenize(const Sentence& sentence);

// Lowercased token strings, the unit the language model and lexicon work on.
std::vector<std::string> lower_words(const Sentence& sentence);

std::string restore_case(const Token& original, std::string_view replacement);

// Byte ranges [first, second) of the sentences inside a paragraph. A break is
// placed after a run of .!? that is followed by whitespace and an uppercase
// letter. Ranges exclude the whitespace between sentences.
std::vector<std::pair<std::size_t, std::size_t>> split_sentences(std::string_view paragraph);

// --- Corpus input ---

enum class LineMode { sentence, paragraph };

// Line-oriented UTF-8 corpus. Blank lines are skipped; a leading BOM is
// stripped. In paragraph mode each line is split with split_sentences.
class CorpusReader {
 public:
  explicit CorpusReader(std::filesystem::path path, LineMode mode = LineMode::sentence);
  static CorpusReader from_lines(std::vector<std::string> lines,
                                 LineMode mode = LineMode::sentence);

  void for_each(const std::function<void(std::string_view)>& fn) const;
  std::vector<std::string> read_all() const;

  const std::filesystem::path& path() const { return path_; }
  LineMode mode() const { return mode_; }

 private:
  CorpusReader() = default;
  void emit(std::string_view line, const std::function<void(std::string_view)>& fn) const;

  std::filesystem::path path_;
  std::optional<std::vector<std::string>> lines_;
  LineMode mode_ = LineMode::sentence;
};

}  // namespace l2gec::text
