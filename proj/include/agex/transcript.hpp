#pragma once

#include <optional>
#include <string>
#include <vector>

namespace agex {

enum class Domain { pork, crop, dairy, unknown };

std::string domain_name(Domain d);
// Accepts "pork", "crop"/"crops", "dairy" case-insensitively.
std::optional<Domain> parse_domain(const std::string& word);

// Non-speech annotation the ASR embeds inline, e.g. <laugh>. Lifted out of the
// turn text at parse time; offset indexes into the stripped text.
struct AtmosphericTag {
  std::string name;
  std::size_t offset = 0;

  bool operator==(const AtmosphericTag&) const = default;
};

struct SpeakerTurn {
  std::string speaker_label;
  double start_time = 0.0;  // seconds since recording start
  std::string text;         // tag markers removed
  std::vector<AtmosphericTag> tags;

  bool operator==(const SpeakerTurn&) const = default;
};

struct Transcript {
  std::string interview_id;
  std::optional<Domain> domain_hint;
  std::vector<SpeakerTurn> turns;

  bool operator==(const Transcript&) const = default;
};

// Parses the line-delimited interchange format: one JSON record per line with
// fields "speaker", "start" (seconds), "text". Inline <name> markers become
// AtmosphericTags. Throws ParseError (with line number) on malformed records,
// ValidationError on an empty document or non-monotonic timestamps.
Transcript parse_transcript(const std::string& raw, const std::string& interview_id = "",
                            std::optional<Domain> domain_hint = std::nullopt);

// Inverse of parse_transcript: re-embeds tags at their offsets. parse∘serialize
// is the identity on Transcript values.
std::string serialize_transcript(const Transcript& t);

// Up to before+1+after turns around center, clipped at boundaries, in order.
// Throws std::out_of_range for an invalid center.
std::vector<SpeakerTurn> turn_window(const Transcript& t, std::size_t center,
                                     std::size_t before, std::size_t after);

struct ManifestEntry {
  std::string interview_id;
  std::string path;  // resolved against the manifest file's directory
  std::optional<Domain> domain_hint;
};

// Batch manifest: one JSON record per line with "interview_id", "path" and
// optional "domain_hint". interview_ids must be unique within the batch.
std::vector<ManifestEntry> load_manifest(const std::string& manifest_path);

}  // namespace agex
