#include "agex/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"

#include "agex/error.hpp"
#include "agex/io_util.hpp"
#include "agex/text_util.hpp"

namespace agex {

using nlohmann::ordered_json;

std::string domain_name(Domain d) {
  switch (d) {
    case Domain::pork: return "pork";
    case Domain::crop: return "crop";
    case Domain::dairy: return "dairy";
    case Domain::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Domain> parse_domain(const std::string& word) {
  std::string w = to_lower(trim(word));
  if (w == "pork") return Domain::pork;
  if (w == "crop" || w == "crops") return Domain::crop;
  if (w == "dairy") return Domain::dairy;
  return std::nullopt;
}

namespace {

bool is_tag_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Strips <name> markers out of raw text. Offsets index into the stripped text.
void lift_tags(const std::string& raw, std::string& text, std::vector<AtmosphericTag>& tags) {
  text.clear();
  tags.clear();
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] == '<') {
      std::size_t j = i + 1;
      while (j < raw.size() && is_tag_name_char(raw[j])) ++j;
      if (j > i + 1 && j < raw.size() && raw[j] == '>') {
        tags.push_back({raw.substr(i + 1, j - i - 1), text.size()});
        i = j + 1;
        continue;
      }
    }
    text.push_back(raw[i]);
    ++i;
  }
}

std::string embed_tags(const SpeakerTurn& turn) {
  std::string out = turn.text;
  // Insert right-to-left so earlier offsets stay valid; among equal offsets the
  // later-listed tag goes in first, which keeps the original left-to-right order.
  for (auto it = turn.tags.rbegin(); it != turn.tags.rend(); ++it) {
    std::size_t off = std::min(it->offset, out.size());
    out.insert(off, "<" + it->name + ">");
  }
  return out;
}

}  // namespace

Transcript parse_transcript(const std::string& raw, const std::string& interview_id,
                            std::optional<Domain> domain_hint) {
  Transcript t;
  t.interview_id = interview_id;
  t.domain_hint = domain_hint;

  std::istringstream in(raw);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw ParseError(std::string("malformed turn record: ") + e.what(), line_no);
    }
    if (!rec.is_object() || !rec.contains("speaker") || !rec.contains("start") ||
        !rec.contains("text"))
      throw ParseError("turn record must have speaker, start, text", line_no);
    if (!rec["speaker"].is_string() || !rec["start"].is_number() || !rec["text"].is_string())
      throw ParseError("turn record field has wrong type", line_no);

    SpeakerTurn turn;
    turn.speaker_label = rec["speaker"].get<std::string>();
    turn.start_time = rec["start"].get<double>();
    lift_tags(rec["text"].get<std::string>(), turn.text, turn.tags);

    if (turn.start_time < 0.0)
      throw ValidationError("negative start time at turn " + std::to_string(t.turns.size()) +
                            " of " + interview_id);
    if (!t.turns.empty() && turn.start_time < t.turns.back().start_time)
      throw ValidationError("non-monotonic timestamp at turn " + std::to_string(t.turns.size()) +
                            " of " + interview_id + ": " + std::to_string(turn.start_time) +
                            " after " + std::to_string(t.turns.back().start_time));
    for (const auto& tag : turn.tags) {
      if (tag.name.empty())
        throw ParseError("empty atmospheric tag name", line_no);
      if (tag.offset > turn.text.size())
        throw ParseError("tag offset out of range", line_no);
    }
    t.turns.push_back(std::move(turn));
  }

  if (t.turns.empty()) throw ValidationError("empty transcript: " + interview_id);
  return t;
}

std::string serialize_transcript(const Transcript& t) {
  std::string out;
  for (const auto& turn : t.turns) {
    ordered_json rec;
    rec["speaker"] = turn.speaker_label;
    rec["start"] = turn.start_time;
    rec["text"] = embed_tags(turn);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::vector<SpeakerTurn> turn_window(const Transcript& t, std::size_t center,
                                     std::size_t before, std::size_t after) {
  if (center >= t.turns.size())
    throw std::out_of_range("turn_window: center " + std::to_string(center) +
                            " out of range for " + std::to_string(t.turns.size()) + " turns");
  std::size_t lo = center >= before ? center - before : 0;
  std::size_t hi = std::min(t.turns.size() - 1, center + after);
  return {t.turns.begin() + static_cast<std::ptrdiff_t>(lo),
          t.turns.begin() + static_cast<std::ptrdiff_t>(hi) + 1};
}

std::vector<ManifestEntry> load_manifest(const std::string& manifest_path) {
  std::string raw = read_file(manifest_path);
  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

  std::vector<ManifestEntry> out;
  std::set<std::string> seen_ids;
  std::istringstream in(raw);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw ParseError(std::string("malformed manifest record: ") + e.what(), line_no);
    }
    if (!rec.contains("interview_id") || !rec.contains("path"))
      throw ParseError("manifest record must have interview_id and path", line_no);

    ManifestEntry e;
    e.interview_id = rec["interview_id"].get<std::string>();
    if (!seen_ids.insert(e.interview_id).second)
      throw ValidationError("duplicate interview_id in manifest: " + e.interview_id);
    std::filesystem::path p = rec["path"].get<std::string>();
    e.path = p.is_absolute() ? p.string() : (base / p).string();
    if (rec.contains("domain_hint")) {
      auto d = parse_domain(rec["domain_hint"].get<std::string>());
      if (!d)
        throw ParseError("unknown domain_hint: " + rec["domain_hint"].get<std::string>(), line_no);
      e.domain_hint = d;
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace agex
