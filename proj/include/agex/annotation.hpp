#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agex/transcript.hpp"

namespace agex {

struct DepEdge {
  int dependent = 0;
  int governor = -1;  // -1 = ROOT
  std::string relation;

  bool operator==(const DepEdge&) const = default;
};

// Linguistic annotations for one sentence of one turn. Token char offsets are
// recovered by aligning tokens against the turn text at validation time.
struct SentenceAnnotation {
  int turn_index = 0;
  std::size_t char_begin = 0;
  std::size_t char_end = 0;  // half-open span in the turn text
  std::vector<std::string> tokens;
  std::vector<std::string> pos_tags;
  std::vector<std::string> ner_tags;
  std::vector<DepEdge> dep_edges;  // one per token, in token order

  // Derived by validate_annotation.
  std::vector<std::size_t> token_begins;
  std::string text;  // the [char_begin, char_end) slice of the turn text

  std::size_t size() const { return tokens.size(); }
  int governor_of(int token) const { return dep_edges[static_cast<std::size_t>(token)].governor; }
  std::size_t token_end(std::size_t i) const { return token_begins[i] + tokens[i].size(); }
};

// Checks parallel lengths, governor ranges, single-root treeness, and aligns
// tokens to the turn text. Throws ValidationError with the failing detail.
void validate_annotation(SentenceAnnotation& anno, const std::string& turn_text);

// Tokens reachable from head through dependent edges, head included, sorted.
std::vector<int> subtree_tokens(const SentenceAnnotation& anno, int head);

// Whitespace-aware tokenizer shared by the heuristic annotator and fixtures:
// word characters plus digit-internal commas/periods group; every other
// non-space character is its own token.
std::vector<std::pair<std::size_t, std::string>> tokenize_with_offsets(const std::string& text);

class AnnotationProvider {
 public:
  virtual ~AnnotationProvider() = default;
  virtual std::vector<SentenceAnnotation> annotate(const Transcript& t) = 0;
};

// Loads pre-computed annotations from <dir>/<interview_id>.jsonl; one JSON
// record per sentence with tokens, pos, ner, and per-token (relative governor
// offset, relation). Throws IoError when the file is missing.
class FileAnnotationProvider : public AnnotationProvider {
 public:
  explicit FileAnnotationProvider(std::string dir) : dir_(std::move(dir)) {}
  std::vector<SentenceAnnotation> annotate(const Transcript& t) override;

 private:
  std::string dir_;
};

// Deterministic lexicon-and-pattern annotator. Good enough to exercise the
// rule engine without any neural stack; also used to generate the bundled
// annotation fixtures.
class HeuristicAnnotator : public AnnotationProvider {
 public:
  std::vector<SentenceAnnotation> annotate(const Transcript& t) override;
};

// Pluggable external annotator: POSTs the transcript to <endpoint>/annotate
// and expects the file-format records back.
class HttpAnnotatorClient : public AnnotationProvider {
 public:
  explicit HttpAnnotatorClient(std::string endpoint, int timeout_sec = 30)
      : endpoint_(std::move(endpoint)), timeout_sec_(timeout_sec) {}
  std::vector<SentenceAnnotation> annotate(const Transcript& t) override;

 private:
  std::string endpoint_;
  int timeout_sec_;
};

std::vector<SentenceAnnotation> parse_annotation_records(const std::string& raw,
                                                         const Transcript& t);
std::string serialize_annotations(const std::vector<SentenceAnnotation>& annos);

}  // namespace agex
