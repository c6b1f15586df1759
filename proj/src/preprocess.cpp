#include "agex/preprocess.hpp"

#include <algorithm>
#include <cctype>

#include "agex/error.hpp"
#include "agex/io_util.hpp"
#include "agex/text_util.hpp"

namespace agex {

std::string correction_kind_name(CorrectionKind k) {
  switch (k) {
    case CorrectionKind::remap: return "remap";
    case CorrectionKind::number: return "number";
    case CorrectionKind::hyphen: return "hyphen";
    case CorrectionKind::filler: return "filler";
  }
  return "remap";
}

namespace {

// Applies one edit to a turn, shifting atmospheric tag offsets with it.
void edit_turn(SpeakerTurn& turn, std::size_t begin, std::size_t end,
               const std::string& replacement) {
  std::ptrdiff_t delta =
      static_cast<std::ptrdiff_t>(replacement.size()) - static_cast<std::ptrdiff_t>(end - begin);
  for (auto& tag : turn.tags) {
    if (tag.offset >= end)
      tag.offset = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(tag.offset) + delta);
    else if (tag.offset > begin)
      tag.offset = begin;
  }
  turn.text = splice(turn.text, begin, end, replacement);
}

struct TurnEditor {
  SpeakerTurn& turn;
  int turn_index;
  CorrectionKind kind;
  CorrectionLog& log;

  void replace(std::size_t begin, std::size_t end, const std::string& replacement) {
    log.entries.push_back(
        {kind, turn_index, begin, turn.text.substr(begin, end - begin), replacement, false});
    edit_turn(turn, begin, end, replacement);
  }

  void skip(std::size_t begin, std::size_t end) {
    std::string span = turn.text.substr(begin, end - begin);
    log.entries.push_back({kind, turn_index, begin, span, span, true});
  }
};

bool gap_is_spaces(const std::string& text, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i)
    if (text[i] != ' ') return false;
  return true;
}

// Numeral-ish first operand for the merge rule: 1-2 digit numeral or a spelled
// number word of value 1..99. Returns its digit string.
std::optional<std::string> merge_lhs_digits(const std::string& word) {
  if (is_plain_numeral(word) && (word.size() == 1 || word.size() == 2)) return word;
  auto parsed = parse_number_token(word);
  if (parsed && parsed->is_integer && !is_plain_numeral(word)) {
    int v = static_cast<int>(parsed->value);
    if (v >= 1 && v <= 99) return std::to_string(v);
  }
  return std::nullopt;
}

bool in_known_grade_triple(const std::vector<WordSpan>& words, std::size_t i,
                           const std::set<std::string>& grades) {
  auto triple_matches = [&](std::size_t a) {
    if (a + 2 >= words.size()) return false;
    if (!is_plain_numeral(words[a].word) || !is_plain_numeral(words[a + 1].word) ||
        !is_plain_numeral(words[a + 2].word))
      return false;
    return grades.count(words[a].word + "-" + words[a + 1].word + "-" + words[a + 2].word) > 0;
  };
  // The pair (i, i+1) may be the head or the tail of a listed triple.
  if (triple_matches(i)) return true;
  if (i >= 1 && triple_matches(i - 1)) return true;
  return false;
}

}  // namespace

RemapTable load_remap_table(const std::string& content) {
  RemapTable table;
  std::set<std::pair<std::string, std::string>> seen;  // (pattern, scope)
  for (const auto& [line_no, line] : config_lines(content)) {
    auto fields = split_csv_line(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("remap entry needs pattern, replacement[, domain]", line_no);
    RemapEntry e;
    for (const auto& w : word_spans(fields[0])) e.pattern_words.push_back(to_lower(w.word));
    if (e.pattern_words.empty()) throw ParseError("empty remap pattern", line_no);
    e.replacement = fields[1];
    if (e.replacement.find('\n') != std::string::npos)
      throw ParseError("remap replacement contains newline", line_no);
    std::string scope_key = "*";
    if (fields.size() == 3 && !fields[2].empty()) {
      auto d = parse_domain(fields[2]);
      if (!d) throw ParseError("unknown remap domain scope: " + fields[2], line_no);
      e.domain_scope = d;
      scope_key = domain_name(*d);
    }
    std::string pattern_key;
    for (const auto& w : e.pattern_words) pattern_key += w + " ";
    if (!seen.insert({pattern_key, scope_key}).second)
      throw ValidationError("duplicate remap pattern: " + trim(pattern_key));
    table.entries.push_back(std::move(e));
  }
  // Longest-match-first.
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const RemapEntry& a, const RemapEntry& b) {
                     return a.pattern_words.size() > b.pattern_words.size();
                   });
  return table;
}

std::vector<std::vector<std::string>> load_phrase_list(const std::string& content) {
  std::vector<std::vector<std::string>> out;
  for (const auto& [line_no, line] : config_lines(content)) {
    std::vector<std::string> words;
    for (const auto& w : word_spans(line)) words.push_back(to_lower(w.word));
    if (words.size() < 2) throw ParseError("hyphenation phrase needs at least 2 words", line_no);
    out.push_back(std::move(words));
  }
  return out;
}

std::vector<std::string> load_word_list(const std::string& content) {
  std::vector<std::string> out;
  for (const auto& [line_no, line] : config_lines(content)) {
    auto ws = word_spans(line);
    if (ws.size() != 1) throw ParseError("expected one word per line", line_no);
    out.push_back(to_lower(ws[0].word));
  }
  return out;
}

std::set<std::string> load_grades_list(const std::string& content) {
  std::set<std::string> out;
  for (const auto& [line_no, line] : config_lines(content)) {
    std::string g = trim(line);
    auto parts = split_trim(g, '-');
    if (parts.size() != 3) throw ParseError("grade must be three hyphen-joined numbers", line_no);
    for (const auto& p : parts)
      if (!is_plain_numeral(p)) throw ParseError("grade component not numeric: " + p, line_no);
    out.insert(g);
  }
  return out;
}

PreprocessResult apply_term_remap(const Transcript& t, const RemapTable& table) {
  PreprocessResult res{t, {}};
  for (std::size_t ti = 0; ti < res.transcript.turns.size(); ++ti) {
    SpeakerTurn& turn = res.transcript.turns[ti];
    TurnEditor ed{turn, static_cast<int>(ti), CorrectionKind::remap, res.log};
    std::size_t scan_from = 0;
    for (;;) {
      auto words = word_spans(turn.text);
      bool edited = false;
      for (std::size_t wi = 0; wi < words.size() && !edited; ++wi) {
        if (words[wi].begin < scan_from) continue;
        // Entries are sorted longest-first, so the first hit is the longest match.
        for (const auto& e : table.entries) {
          if (e.domain_scope &&
              (!t.domain_hint || *t.domain_hint != *e.domain_scope))
            continue;
          std::size_t n = e.pattern_words.size();
          if (wi + n > words.size()) continue;
          bool ok = true;
          for (std::size_t k = 0; k < n && ok; ++k)
            ok = to_lower(words[wi + k].word) == e.pattern_words[k];
          // Multi-word patterns must not span punctuation.
          for (std::size_t k = 0; k + 1 < n && ok; ++k)
            ok = gap_is_spaces(turn.text, words[wi + k].end, words[wi + k + 1].begin);
          if (!ok) continue;
          std::size_t begin = words[wi].begin;
          std::size_t end = words[wi + n - 1].end;
          ed.replace(begin, end, e.replacement);
          scan_from = begin + e.replacement.size();
          edited = true;
          break;
        }
      }
      if (!edited) break;
    }
  }
  return res;
}

PreprocessResult normalize_numbers(const Transcript& t, const std::set<std::string>& grades) {
  PreprocessResult res{t, {}};
  for (std::size_t ti = 0; ti < res.transcript.turns.size(); ++ti) {
    SpeakerTurn& turn = res.transcript.turns[ti];
    TurnEditor ed{turn, static_cast<int>(ti), CorrectionKind::number, res.log};

    // Rule 1: "<N> hundred" -> N*100 for a bare numeral or spelled number.
    for (;;) {
      auto words = word_spans(turn.text);
      bool edited = false;
      for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        if (to_lower(words[i + 1].word) != "hundred") continue;
        const std::string& lhs = words[i].word;
        std::optional<long long> n;
        if (is_plain_numeral(lhs)) {
          n = std::stoll(lhs);
        } else if (auto parsed = parse_number_token(lhs);
                   parsed && parsed->is_integer && to_lower(lhs) != "hundred") {
          n = static_cast<long long>(parsed->value);
        }
        if (!n || !gap_is_spaces(turn.text, words[i].end, words[i + 1].begin)) continue;
        ed.replace(words[i].begin, words[i + 1].end, std::to_string(*n * 100));
        edited = true;
        break;
      }
      if (!edited) break;
    }

    // Rule 2: adjacent numeral merge, deliberately conservative. The watermark
    // keeps a restarted scan from re-logging skips or re-matching inside an edit.
    std::size_t scan_from = 0;
    for (;;) {
      auto words = word_spans(turn.text);
      bool edited = false;
      for (std::size_t i = 0; i + 1 < words.size() && !edited; ++i) {
        if (words[i].begin < scan_from) continue;
        auto lhs = merge_lhs_digits(words[i].word);
        if (!lhs) continue;
        const std::string& rhs = words[i + 1].word;
        bool rhs_bare_two = is_plain_numeral(rhs) && rhs.size() == 2;
        // "two 20-head": the would-be second numeral is welded to a hyphenated
        // compound; ambiguous, leave it and log the skip.
        bool rhs_hyphen_compound = rhs.size() > 2 && std::isdigit((unsigned char)rhs[0]) &&
                                   std::isdigit((unsigned char)rhs[1]) && rhs[2] == '-';
        if (!rhs_bare_two && !rhs_hyphen_compound) continue;
        if (!gap_is_spaces(turn.text, words[i].end, words[i + 1].begin)) continue;
        bool next_hyphenated =
            i + 2 < words.size() && words[i + 2].word.find('-') != std::string::npos;
        if (rhs_hyphen_compound || next_hyphenated || in_known_grade_triple(words, i, grades)) {
          ed.skip(words[i].begin, words[i + 1].end);
          scan_from = words[i + 1].begin;
          continue;
        }
        ed.replace(words[i].begin, words[i + 1].end, *lhs + rhs);
        scan_from = words[i].begin + lhs->size() + rhs.size();
        edited = true;
      }
      if (!edited) break;
    }

    // Rule 3: fertilizer-grade triples from the known-grades list.
    for (;;) {
      auto words = word_spans(turn.text);
      bool edited = false;
      for (std::size_t i = 0; i + 2 < words.size(); ++i) {
        if (!is_plain_numeral(words[i].word) || !is_plain_numeral(words[i + 1].word) ||
            !is_plain_numeral(words[i + 2].word))
          continue;
        std::string joined = words[i].word + "-" + words[i + 1].word + "-" + words[i + 2].word;
        if (!grades.count(joined)) continue;
        if (!gap_is_spaces(turn.text, words[i].end, words[i + 1].begin) ||
            !gap_is_spaces(turn.text, words[i + 1].end, words[i + 2].begin))
          continue;
        ed.replace(words[i].begin, words[i + 2].end, joined);
        edited = true;
        break;
      }
      if (!edited) break;
    }
  }
  return res;
}

PreprocessResult hyphenate_terms(const Transcript& t,
                                 const std::vector<std::vector<std::string>>& phrases) {
  for (const auto& p : phrases)
    if (p.size() < 2) throw ValidationError("hyphenation phrase needs at least 2 words");

  PreprocessResult res{t, {}};
  for (std::size_t ti = 0; ti < res.transcript.turns.size(); ++ti) {
    SpeakerTurn& turn = res.transcript.turns[ti];
    TurnEditor ed{turn, static_cast<int>(ti), CorrectionKind::hyphen, res.log};
    std::size_t scan_from = 0;
    for (;;) {
      auto words = word_spans(turn.text);
      bool edited = false;
      for (std::size_t wi = 0; wi < words.size() && !edited; ++wi) {
        if (words[wi].begin < scan_from) continue;
        // Leftmost-longest: longest listed phrase starting at this word wins.
        const std::vector<std::string>* best = nullptr;
        for (const auto& p : phrases) {
          if (wi + p.size() > words.size()) continue;
          if (best && p.size() <= best->size()) continue;
          bool ok = true;
          for (std::size_t k = 0; k < p.size() && ok; ++k)
            ok = to_lower(words[wi + k].word) == p[k];
          for (std::size_t k = 0; k + 1 < p.size() && ok; ++k)
            ok = gap_is_spaces(turn.text, words[wi + k].end, words[wi + k + 1].begin);
          if (ok) best = &p;
        }
        if (!best) continue;
        std::size_t n = best->size();
        std::string joined;
        for (std::size_t k = 0; k < n; ++k) {
          if (k) joined += "-";
          joined += words[wi + k].word;  // keep original casing
        }
        std::size_t begin = words[wi].begin;
        ed.replace(begin, words[wi + n - 1].end, joined);
        scan_from = begin + joined.size();
        edited = true;
      }
      if (!edited) break;
    }
  }
  return res;
}

PreprocessResult remove_fillers(const Transcript& t, const std::vector<std::string>& fillers) {
  std::set<std::string> filler_set(fillers.begin(), fillers.end());
  PreprocessResult res{t, {}};
  for (std::size_t ti = 0; ti < res.transcript.turns.size(); ++ti) {
    SpeakerTurn& turn = res.transcript.turns[ti];
    TurnEditor ed{turn, static_cast<int>(ti), CorrectionKind::filler, res.log};
    for (;;) {
      auto words = word_spans(turn.text);
      bool edited = false;
      for (std::size_t wi = 0; wi < words.size(); ++wi) {
        if (!filler_set.count(to_lower(words[wi].word))) continue;
        std::size_t begin = words[wi].begin;
        std::size_t end = words[wi].end;
        if (end < turn.text.size() && turn.text[end] == ',') ++end;
        // Swallow one adjacent space so the removal leaves clean spacing.
        if (end < turn.text.size() && turn.text[end] == ' ')
          ++end;
        else if (begin > 0 && turn.text[begin - 1] == ' ')
          --begin;
        ed.replace(begin, end, "");
        edited = true;
        break;
      }
      if (!edited) break;
    }
    // Collapse any double spaces produced by removals.
    for (;;) {
      std::size_t pos = turn.text.find("  ");
      if (pos == std::string::npos) break;
      std::size_t end = pos;
      while (end < turn.text.size() && turn.text[end] == ' ') ++end;
      ed.replace(pos, end, " ");
    }
  }
  return res;
}

PreprocessResult preprocess_pipeline(const Transcript& t, const PreprocessConfig& cfg) {
  PreprocessResult r1 = apply_term_remap(t, cfg.remap);
  PreprocessResult r2 = normalize_numbers(r1.transcript, cfg.grades);
  PreprocessResult r3 = hyphenate_terms(r2.transcript, cfg.hyphen_phrases);
  PreprocessResult r4 = remove_fillers(r3.transcript, cfg.fillers);
  CorrectionLog merged;
  merged.append(r1.log);
  merged.append(r2.log);
  merged.append(r3.log);
  merged.append(r4.log);
  return {std::move(r4.transcript), std::move(merged)};
}

Transcript replay_corrections(const Transcript& original, const CorrectionLog& log) {
  Transcript t = original;
  for (const auto& e : log.entries) {
    if (e.skipped) continue;
    if (e.turn_index < 0 || static_cast<std::size_t>(e.turn_index) >= t.turns.size())
      throw ValidationError("correction log entry references missing turn " +
                            std::to_string(e.turn_index));
    SpeakerTurn& turn = t.turns[static_cast<std::size_t>(e.turn_index)];
    if (turn.text.compare(e.offset, e.original_span.size(), e.original_span) != 0)
      throw ValidationError("correction log entry does not match text at turn " +
                            std::to_string(e.turn_index) + " offset " +
                            std::to_string(e.offset) + ": expected '" + e.original_span + "'");
    edit_turn(turn, e.offset, e.offset + e.original_span.size(), e.replacement);
  }
  return t;
}

}  // namespace agex
