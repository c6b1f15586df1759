#include "agex/segmentation.hpp"

#include <algorithm>
#include <set>

#include "agex/error.hpp"
#include "agex/io_util.hpp"
#include "agex/text_util.hpp"

namespace agex {

KeywordMap load_keyword_map(const std::string& content) {
  KeywordMap km;
  std::set<std::string> seen;
  for (const auto& [line_no, line] : config_lines(content)) {
    auto fields = split_csv_line(line);
    if (fields.size() != 2) throw ParseError("expected: keyword, topic_label", line_no);
    KeywordEntry e{to_lower(fields[0]), fields[1]};
    if (e.keyword.empty()) throw ParseError("empty keyword", line_no);
    if (e.topic_label.empty()) throw ParseError("empty topic label", line_no);
    if (!seen.insert(e.keyword).second)
      throw ValidationError("duplicate keyword: " + e.keyword);
    km.entries.push_back(std::move(e));
  }
  return km;
}

std::vector<MarkerPattern> load_marker_patterns(const std::string& content) {
  std::vector<MarkerPattern> out;
  for (const auto& [line_no, line] : config_lines(content)) {
    MarkerPattern p;
    bool have_slot = false;
    for (const auto& w : split_trim(line, ' ')) {
      if (w.empty()) continue;
      if (w == "{domain}") {
        if (have_slot) throw ParseError("marker pattern has two {domain} slots", line_no);
        p.domain_slot = p.words.size();
        have_slot = true;
      }
      p.words.push_back(to_lower(w));
    }
    if (p.words.empty()) throw ParseError("empty marker pattern", line_no);
    if (!have_slot) throw ParseError("marker pattern needs a {domain} slot", line_no);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// Matches a marker template against a turn; returns the captured domain.
std::optional<Domain> match_marker(const std::string& text,
                                   const std::vector<MarkerPattern>& patterns) {
  auto words = word_spans(text);
  for (const auto& p : patterns) {
    if (words.size() < p.words.size()) continue;
    for (std::size_t start = 0; start + p.words.size() <= words.size(); ++start) {
      std::optional<Domain> captured;
      bool ok = true;
      for (std::size_t k = 0; k < p.words.size() && ok; ++k) {
        std::string w = to_lower(words[start + k].word);
        const std::string& pw = p.words[k];
        if (k == p.domain_slot) {
          captured = parse_domain(w);
          ok = captured.has_value();
        } else if (pw != "*") {
          ok = (w == pw);
        }
      }
      if (ok && captured) return captured;
    }
  }
  return std::nullopt;
}

bool boundary_at(const std::string& lower_text, std::size_t pos, std::size_t len) {
  auto is_word = [&](std::size_t i) {
    return i < lower_text.size() && is_word_char(lower_text[i]);
  };
  bool left_ok = pos == 0 || !is_word(pos - 1);
  bool right_ok = !is_word(pos + len);
  return left_ok && right_ok;
}

}  // namespace

std::vector<DomainSegment> segment_by_markers(const Transcript& t,
                                              const std::vector<MarkerPattern>& patterns) {
  std::vector<DomainSegment> segments;
  if (t.turns.empty()) return segments;

  std::vector<std::pair<std::size_t, Domain>> markers;
  for (std::size_t i = 0; i < t.turns.size(); ++i)
    if (auto d = match_marker(t.turns[i].text, patterns)) markers.emplace_back(i, *d);

  std::size_t cursor = 0;
  if (markers.empty() || markers.front().first > 0) {
    std::size_t end = markers.empty() ? t.turns.size() : markers.front().first;
    segments.push_back({Domain::unknown, 0, end, std::nullopt});
    cursor = end;
  }
  for (std::size_t m = 0; m < markers.size(); ++m) {
    std::size_t end = m + 1 < markers.size() ? markers[m + 1].first : t.turns.size();
    segments.push_back({markers[m].second, markers[m].first, end, markers[m].first});
    cursor = end;
  }
  (void)cursor;

  if (t.domain_hint)
    for (auto& s : segments)
      if (s.domain == Domain::unknown) s.domain = *t.domain_hint;
  return segments;
}

std::optional<std::pair<std::size_t, std::size_t>> find_trigger(const std::string& turn_text,
                                                                const KeywordMap& km) {
  std::string lower = to_lower(turn_text);
  std::optional<std::pair<std::size_t, std::size_t>> best;  // (entry, pos)
  for (std::size_t e = 0; e < km.entries.size(); ++e) {
    const std::string& kw = km.entries[e].keyword;
    std::size_t pos = 0;
    while ((pos = lower.find(kw, pos)) != std::string::npos) {
      if (boundary_at(lower, pos, kw.size())) break;
      ++pos;
    }
    if (pos == std::string::npos) continue;
    if (!best || pos < best->second) {
      best = {e, pos};
    } else if (pos == best->second) {
      // Same position: prefer the longer keyword, then lexicographic order,
      // purely so the result is total.
      const std::string& cur = km.entries[best->first].keyword;
      if (kw.size() > cur.size() || (kw.size() == cur.size() && kw < cur)) best = {e, pos};
    }
  }
  return best;
}

std::vector<TopicBlock> fine_segment(const DomainSegment& seg, const Transcript& t,
                                     const KeywordMap& km) {
  if (seg.end_turn > t.turns.size() || seg.begin_turn > seg.end_turn)
    throw ValidationError("segment out of range for transcript " + t.interview_id);

  std::vector<TopicBlock> blocks;
  if (seg.begin_turn == seg.end_turn) return blocks;

  TopicBlock current{"preamble", seg.begin_turn, seg.begin_turn, std::nullopt};
  for (std::size_t i = seg.begin_turn; i < seg.end_turn; ++i) {
    auto hit = find_trigger(t.turns[i].text, km);
    if (hit) {
      const KeywordEntry& e = km.entries[hit->first];
      if (e.topic_label != current.topic_label) {
        if (current.end_turn > current.begin_turn) blocks.push_back(current);
        current = {e.topic_label, i, i, e.keyword};
      }
    }
    current.end_turn = i + 1;
  }
  if (current.end_turn > current.begin_turn) blocks.push_back(current);
  return blocks;
}

}  // namespace agex
