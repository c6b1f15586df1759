#include "agex/text_util.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <unordered_map>

namespace agex {

std::string to_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_word_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '\'' || c == '-';
}

std::vector<WordSpan> word_spans(const std::string& text) {
  std::vector<WordSpan> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    out.push_back({i, j, text.substr(i, j - i)});
    i = j;
  }
  return out;
}

std::vector<std::string> content_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string stem(const std::string& w) {
  if (w.size() > 3 && w.back() == 's') return w.substr(0, w.size() - 1);
  return w;
}

namespace {

const std::unordered_map<std::string, int>& spelled_numbers() {
  static const std::unordered_map<std::string, int> m = {
      {"zero", 0},     {"one", 1},       {"two", 2},      {"three", 3},   {"four", 4},
      {"five", 5},     {"six", 6},       {"seven", 7},    {"eight", 8},   {"nine", 9},
      {"ten", 10},     {"eleven", 11},   {"twelve", 12},  {"thirteen", 13},
      {"fourteen", 14},{"fifteen", 15},  {"sixteen", 16}, {"seventeen", 17},
      {"eighteen", 18},{"nineteen", 19}, {"twenty", 20},  {"thirty", 30},
      {"forty", 40},   {"fifty", 50},    {"sixty", 60},   {"seventy", 70},
      {"eighty", 80},  {"ninety", 90}};
  return m;
}

}  // namespace

bool is_plain_numeral(const std::string& token) {
  if (token.empty()) return false;
  for (char c : token)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::optional<ParsedNumber> parse_number_token(const std::string& token) {
  if (token.empty()) return std::nullopt;
  auto it = spelled_numbers().find(to_lower(token));
  if (it != spelled_numbers().end()) return ParsedNumber{static_cast<double>(it->second), true};

  // Digits with optional comma grouping and one decimal point.
  std::string digits;
  bool seen_dot = false;
  bool seen_digit = false;
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
    } else if (c == ',') {
      // Comma grouping must sit between digits: "6,670" yes, ",5" or "5," no.
      if (i == 0 || i + 1 >= token.size()) return std::nullopt;
      if (!std::isdigit(static_cast<unsigned char>(token[i - 1])) ||
          !std::isdigit(static_cast<unsigned char>(token[i + 1])))
        return std::nullopt;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
      digits.push_back('.');
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  try {
    double v = std::stod(digits);
    return ParsedNumber{v, !seen_dot};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return std::string(buf);
}

std::string splice(const std::string& text, std::size_t begin, std::size_t end,
                   const std::string& replacement) {
  if (begin > text.size()) begin = text.size();
  if (end > text.size()) end = text.size();
  if (end < begin) end = begin;
  return text.substr(0, begin) + replacement + text.substr(end);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace agex
