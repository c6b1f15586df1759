#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agex/transcript.hpp"

namespace agex {

enum class CorrectionKind { remap, number, hyphen, filler };

std::string correction_kind_name(CorrectionKind k);

// One textual edit. offset indexes into the turn text as it was immediately
// before this edit, so a log can be replayed edit by edit. skipped entries
// record a guard that fired (no text change).
struct CorrectionEntry {
  CorrectionKind kind = CorrectionKind::remap;
  int turn_index = 0;
  std::size_t offset = 0;
  std::string original_span;
  std::string replacement;
  bool skipped = false;
};

struct CorrectionLog {
  std::vector<CorrectionEntry> entries;

  void append(const CorrectionLog& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  }
};

struct RemapEntry {
  std::vector<std::string> pattern_words;  // lowercased
  std::string replacement;
  std::optional<Domain> domain_scope;
};

struct RemapTable {
  std::vector<RemapEntry> entries;
};

// Two-column delimited text: pattern, replacement, optional domain scope.
RemapTable load_remap_table(const std::string& content);
std::vector<std::vector<std::string>> load_phrase_list(const std::string& content);
std::vector<std::string> load_word_list(const std::string& content);
std::set<std::string> load_grades_list(const std::string& content);

struct PreprocessConfig {
  RemapTable remap;
  std::vector<std::vector<std::string>> hyphen_phrases;
  std::vector<std::string> fillers;  // lowercased single words
  std::set<std::string> grades;      // canonical "18-46-0" forms
};

struct PreprocessResult {
  Transcript transcript;
  CorrectionLog log;
};

// Longest-match-first, case-insensitive, whole-word replacement of curated
// term patterns. Entries scoped to a domain apply only when the transcript's
// domain hint matches.
PreprocessResult apply_term_remap(const Transcript& t, const RemapTable& table);

// Spoken-number repair, in order: "<N> hundred" -> N*100; conservative
// adjacent-numeral merge ("2 40" -> "240"); fertilizer-grade triples
// ("18 46 0" -> "18-46-0") when listed in grades. Guarded merges that are
// skipped get a skipped log entry.
PreprocessResult normalize_numbers(const Transcript& t,
                                   const std::set<std::string>& grades = {});

// Joins each listed word sequence with hyphens ("farrow to finish" ->
// "farrow-to-finish"). Leftmost-longest occurrence wins on overlaps.
PreprocessResult hyphenate_terms(const Transcript& t,
                                 const std::vector<std::vector<std::string>>& phrases);

// Removes filler words plus an immediately following comma; collapses the
// spacing left behind.
PreprocessResult remove_fillers(const Transcript& t, const std::vector<std::string>& fillers);

// remap -> numbers -> hyphenation -> fillers, merged log.
PreprocessResult preprocess_pipeline(const Transcript& t, const PreprocessConfig& cfg);

// Re-applies a correction log to the original transcript. Throws
// ValidationError if an entry does not line up; used to audit logs.
Transcript replay_corrections(const Transcript& original, const CorrectionLog& log);

}  // namespace agex
