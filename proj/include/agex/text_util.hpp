#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace agex {

// ASCII-only case folding; transcripts are English ASR output.
std::string to_lower(const std::string& s);

struct WordSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // half-open
  std::string word;     // original casing
};

// Word characters for replacement-style operations (remap, fillers, hyphenation):
// alphanumerics plus apostrophe and hyphen, so "20-head" and "don't" are single words.
bool is_word_char(char c);

// Splits text into word spans using is_word_char. Punctuation and whitespace separate words.
std::vector<WordSpan> word_spans(const std::string& text);

// Lowercased alphanumeric runs; hyphens and apostrophes split here. Used for
// overlap scoring and the hallucination filter.
std::vector<std::string> content_tokens(const std::string& text);

// Suffix-only singular/plural stemming: strips one trailing 's' from words longer
// than three characters. Anything smarter is deliberately out of bounds.
std::string stem(const std::string& lowercase_word);

struct ParsedNumber {
  double value = 0.0;
  bool is_integer = false;
};

// Parses a numeric token: plain digits, comma-grouped digits ("6,670"), decimals,
// or a spelled-out small number ("three", "twelve"). Returns nullopt otherwise.
std::optional<ParsedNumber> parse_number_token(const std::string& token);

// True if the token is digits only (no commas, no sign, no decimal point).
bool is_plain_numeral(const std::string& token);

// 64-bit FNV-1a. Deterministic across platforms, unlike std::hash.
std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

// Replaces [begin, end) in text. Out-of-range arguments are clamped.
std::string splice(const std::string& text, std::size_t begin, std::size_t end,
                   const std::string& replacement);

std::string trim(const std::string& s);

}  // namespace agex
