#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agex/transcript.hpp"

namespace agex {

struct DomainSegment {
  Domain domain = Domain::unknown;
  std::size_t begin_turn = 0;
  std::size_t end_turn = 0;  // half-open
  std::optional<std::size_t> marker_turn;
};

struct TopicBlock {
  std::string topic_label;
  std::size_t begin_turn = 0;
  std::size_t end_turn = 0;  // half-open, within the parent segment
  std::optional<std::string> trigger_keyword;
};

struct KeywordEntry {
  std::string keyword;  // word or phrase, stored lowercased
  std::string topic_label;
};

struct KeywordMap {
  std::vector<KeywordEntry> entries;
};

// Delimited text: keyword, topic_label. Duplicate keywords are rejected.
KeywordMap load_keyword_map(const std::string& content);

// Interviewer section-marker template: words matched case-insensitively,
// "*" matches any single word, "{domain}" captures the domain word.
struct MarkerPattern {
  std::vector<std::string> words;
  std::size_t domain_slot = 0;
};

std::vector<MarkerPattern> load_marker_patterns(const std::string& content);

// Splits a transcript at turns matching a section marker. Turns before the
// first marker form an unknown segment; the manifest domain hint backfills
// unknown segments. Output segments partition the turn range.
std::vector<DomainSegment> segment_by_markers(const Transcript& t,
                                              const std::vector<MarkerPattern>& patterns);

// Keyword-driven topic blocks inside one segment. A turn containing a keyword
// (word-boundary, case-insensitive, leftmost wins) opens a new block unless the
// running block already has that topic. Turns before the first trigger form a
// "preamble" block. Output blocks partition the segment.
std::vector<TopicBlock> fine_segment(const DomainSegment& seg, const Transcript& t,
                                     const KeywordMap& km);

// Leftmost keyword hit in one turn, if any: (entry index, char position).
std::optional<std::pair<std::size_t, std::size_t>> find_trigger(const std::string& turn_text,
                                                                const KeywordMap& km);

}  // namespace agex
