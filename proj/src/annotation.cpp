#include "agex/annotation.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <sstream>
#include <unordered_map>

#include "httplib.h"
#include "json.hpp"

#include "agex/error.hpp"
#include "agex/io_util.hpp"
#include "agex/text_util.hpp"

namespace agex {

using nlohmann::ordered_json;

void validate_annotation(SentenceAnnotation& anno, const std::string& turn_text) {
  std::size_t n = anno.tokens.size();
  if (anno.pos_tags.size() != n || anno.ner_tags.size() != n || anno.dep_edges.size() != n)
    throw ValidationError("annotation length mismatch: " + std::to_string(n) + " tokens, " +
                          std::to_string(anno.pos_tags.size()) + " pos, " +
                          std::to_string(anno.ner_tags.size()) + " ner, " +
                          std::to_string(anno.dep_edges.size()) + " dep entries");
  if (anno.char_end > turn_text.size() || anno.char_begin > anno.char_end)
    throw ValidationError("sentence span out of range");

  int roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const DepEdge& e = anno.dep_edges[i];
    if (e.dependent != static_cast<int>(i))
      throw ValidationError("dep edge out of order at token " + std::to_string(i));
    if (e.governor == -1) {
      ++roots;
    } else if (e.governor < 0 || e.governor >= static_cast<int>(n) ||
               e.governor == static_cast<int>(i)) {
      throw ValidationError("governor index " + std::to_string(e.governor) +
                            " out of range for " + std::to_string(n) + "-token sentence");
    }
  }
  if (n > 0 && roots != 1)
    throw ValidationError("dependency graph must have exactly one root, found " +
                          std::to_string(roots));
  // Acyclicity: every governor chain must reach ROOT within n steps.
  for (std::size_t i = 0; i < n; ++i) {
    int cur = static_cast<int>(i);
    std::size_t steps = 0;
    while (cur != -1) {
      cur = anno.dep_edges[static_cast<std::size_t>(cur)].governor;
      if (++steps > n) throw ValidationError("dependency graph has a cycle");
    }
  }

  // Align tokens against the turn text to recover char offsets.
  anno.text = turn_text.substr(anno.char_begin, anno.char_end - anno.char_begin);
  anno.token_begins.assign(n, 0);
  std::size_t pos = anno.char_begin;
  for (std::size_t i = 0; i < n; ++i) {
    while (pos < anno.char_end && std::isspace(static_cast<unsigned char>(turn_text[pos]))) ++pos;
    if (turn_text.compare(pos, anno.tokens[i].size(), anno.tokens[i]) != 0)
      throw ValidationError("token '" + anno.tokens[i] + "' does not align with turn text at " +
                            std::to_string(pos));
    anno.token_begins[i] = pos;
    pos += anno.tokens[i].size();
  }
}

std::vector<int> subtree_tokens(const SentenceAnnotation& anno, int head) {
  std::vector<int> out{head};
  std::vector<int> frontier{head};
  while (!frontier.empty()) {
    int cur = frontier.back();
    frontier.pop_back();
    for (const auto& e : anno.dep_edges) {
      if (e.governor == cur) {
        out.push_back(e.dependent);
        frontier.push_back(e.dependent);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<std::size_t, std::string>> tokenize_with_offsets(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t k) {
    return k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]));
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_word_char(c)) {
      std::size_t j = i;
      while (j < text.size()) {
        if (is_word_char(text[j])) {
          ++j;
        } else if ((text[j] == ',' || text[j] == '.') && j > i && digit(j - 1) && digit(j + 1)) {
          ++j;  // digit grouping or decimal point inside a number
        } else {
          break;
        }
      }
      out.emplace_back(i, text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(i, std::string(1, c));
      ++i;
    }
  }
  return out;
}

namespace {

SentenceAnnotation record_to_annotation(const ordered_json& rec, int line_no) {
  for (const char* key : {"turn", "begin", "end", "tokens", "pos", "ner", "heads", "rels"})
    if (!rec.contains(key))
      throw ParseError(std::string("annotation record missing field '") + key + "'", line_no);

  SentenceAnnotation a;
  a.turn_index = rec["turn"].get<int>();
  a.char_begin = rec["begin"].get<std::size_t>();
  a.char_end = rec["end"].get<std::size_t>();
  a.tokens = rec["tokens"].get<std::vector<std::string>>();
  a.pos_tags = rec["pos"].get<std::vector<std::string>>();
  a.ner_tags = rec["ner"].get<std::vector<std::string>>();
  auto heads = rec["heads"].get<std::vector<int>>();
  auto rels = rec["rels"].get<std::vector<std::string>>();
  if (heads.size() != a.tokens.size() || rels.size() != a.tokens.size())
    throw ParseError("heads/rels length mismatch", line_no);
  for (std::size_t i = 0; i < heads.size(); ++i) {
    // The sequence encoding stores the governor's relative position; 0 = ROOT.
    int gov = heads[i] == 0 ? -1 : static_cast<int>(i) + heads[i];
    a.dep_edges.push_back({static_cast<int>(i), gov, rels[i]});
  }
  return a;
}

ordered_json annotation_to_record(const SentenceAnnotation& a) {
  ordered_json rec;
  rec["turn"] = a.turn_index;
  rec["begin"] = a.char_begin;
  rec["end"] = a.char_end;
  rec["tokens"] = a.tokens;
  rec["pos"] = a.pos_tags;
  rec["ner"] = a.ner_tags;
  std::vector<int> heads;
  std::vector<std::string> rels;
  for (const auto& e : a.dep_edges) {
    heads.push_back(e.governor == -1 ? 0 : e.governor - e.dependent);
    rels.push_back(e.relation);
  }
  rec["heads"] = heads;
  rec["rels"] = rels;
  return rec;
}

}  // namespace

namespace {

// Sentence spans of one turn must be ordered, non-overlapping, and leave only
// whitespace uncovered.
void check_sentence_partition(const std::vector<SentenceAnnotation>& annos, const Transcript& t) {
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> by_turn;
  for (const auto& a : annos) by_turn[a.turn_index].emplace_back(a.char_begin, a.char_end);
  for (auto& [turn, spans] : by_turn) {
    const std::string& text = t.turns[static_cast<std::size_t>(turn)].text;
    std::size_t cursor = 0;
    for (auto [b, e] : spans) {
      if (b < cursor)
        throw ValidationError("overlapping or unordered sentence spans in turn " +
                              std::to_string(turn));
      for (std::size_t i = cursor; i < b; ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i])))
          throw ValidationError("sentence spans do not cover turn " + std::to_string(turn));
      cursor = e;
    }
    for (std::size_t i = cursor; i < text.size(); ++i)
      if (!std::isspace(static_cast<unsigned char>(text[i])))
        throw ValidationError("sentence spans do not cover turn " + std::to_string(turn));
  }
}

}  // namespace

std::vector<SentenceAnnotation> parse_annotation_records(const std::string& raw,
                                                         const Transcript& t) {
  std::vector<SentenceAnnotation> out;
  std::istringstream in(raw);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw ParseError(std::string("malformed annotation record: ") + e.what(), line_no);
    }
    SentenceAnnotation a = record_to_annotation(rec, line_no);
    if (a.turn_index < 0 || static_cast<std::size_t>(a.turn_index) >= t.turns.size())
      throw ValidationError("annotation references missing turn " +
                            std::to_string(a.turn_index));
    validate_annotation(a, t.turns[static_cast<std::size_t>(a.turn_index)].text);
    out.push_back(std::move(a));
  }
  check_sentence_partition(out, t);
  return out;
}

std::string serialize_annotations(const std::vector<SentenceAnnotation>& annos) {
  std::string out;
  for (const auto& a : annos) {
    out += annotation_to_record(a).dump();
    out += '\n';
  }
  return out;
}

std::vector<SentenceAnnotation> FileAnnotationProvider::annotate(const Transcript& t) {
  std::filesystem::path path = std::filesystem::path(dir_) / (t.interview_id + ".jsonl");
  if (!std::filesystem::exists(path))
    throw IoError("missing annotation file: " + path.string());
  return parse_annotation_records(read_file(path.string()), t);
}

namespace {

const std::unordered_map<std::string, std::string>& pos_lexicon() {
  static const std::unordered_map<std::string, std::string> m = {
      {"the", "DT"},    {"a", "DT"},      {"an", "DT"},     {"those", "DT"},
      {"these", "DT"},  {"that", "DT"},   {"this", "DT"},   {"some", "DT"},
      {"any", "DT"},    {"each", "DT"},   {"every", "DT"},  {"your", "PRP$"},
      {"our", "PRP$"},  {"their", "PRP$"},{"my", "PRP$"},   {"i", "PRP"},
      {"you", "PRP"},   {"we", "PRP"},    {"they", "PRP"},  {"he", "PRP"},
      {"she", "PRP"},   {"it", "PRP"},    {"of", "IN"},     {"in", "IN"},
      {"on", "IN"},     {"at", "IN"},     {"for", "IN"},    {"with", "IN"},
      {"about", "IN"},  {"per", "IN"},    {"from", "IN"},   {"by", "IN"},
      {"and", "CC"},    {"or", "CC"},     {"but", "CC"},    {"so", "CC"},
      {"to", "TO"},     {"is", "VBZ"},    {"are", "VBP"},   {"was", "VBD"},
      {"were", "VBD"},  {"be", "VB"},     {"been", "VBN"},  {"do", "VBP"},
      {"does", "VBZ"},  {"did", "VBD"},   {"have", "VBP"},  {"has", "VBZ"},
      {"had", "VBD"},   {"got", "VBD"},   {"get", "VBP"},   {"run", "VBP"},
      {"use", "VBP"},   {"raise", "VBP"}, {"store", "VBP"}, {"grow", "VBP"},
      {"keep", "VBP"},  {"milk", "NN"},   {"what", "WP"},   {"what's", "WP"},
      {"how", "WRB"},   {"when", "WRB"},  {"where", "WRB"}, {"many", "JJ"},
      {"much", "JJ"},   {"total", "JJ"},  {"renewable", "JJ"}, {"there", "EX"},
      {"yes", "UH"},    {"yeah", "UH"},   {"yep", "UH"},    {"no", "UH"},
      {"nope", "UH"},   {"okay", "UH"},   {"uh", "UH"},     {"um", "UH"},
      {"would", "MD"},  {"can", "MD"},    {"could", "MD"},  {"will", "MD"},
      {"then", "RB"},   {"now", "RB"},    {"also", "RB"},   {"just", "RB"},
      {"not", "RB"},    {"right", "RB"}};
  return m;
}

bool noun_pos(const std::string& pos) { return pos.rfind("NN", 0) == 0; }

std::string guess_pos(const std::string& token) {
  std::string lower = to_lower(token);
  auto it = pos_lexicon().find(lower);
  if (it != pos_lexicon().end()) return it->second;
  if (auto n = parse_number_token(token)) return "CD";
  if (token.size() == 1 && !std::isalnum(static_cast<unsigned char>(token[0]))) return token;
  if (lower.size() > 4 && lower.compare(lower.size() - 3, 3, "ing") == 0) return "NN";
  if (lower.size() > 2 && lower.back() == 's') return "NNS";
  return "NN";
}

}  // namespace

std::vector<SentenceAnnotation> HeuristicAnnotator::annotate(const Transcript& t) {
  std::vector<SentenceAnnotation> out;
  for (std::size_t ti = 0; ti < t.turns.size(); ++ti) {
    const std::string& text = t.turns[ti].text;
    // Sentence split at terminal punctuation that is not a decimal point.
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      bool decimal = c == '.' && i > 0 && i + 1 < text.size() &&
                     std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
                     std::isdigit(static_cast<unsigned char>(text[i + 1]));
      if ((c == '.' || c == '?' || c == '!') && !decimal) {
        spans.emplace_back(start, i + 1);
        start = i + 1;
      }
    }
    if (start < text.size() && !trim(text.substr(start)).empty())
      spans.emplace_back(start, text.size());

    for (auto [sb, se] : spans) {
      SentenceAnnotation a;
      a.turn_index = static_cast<int>(ti);
      // Trim whitespace off the sentence span edges.
      while (sb < se && std::isspace(static_cast<unsigned char>(text[sb]))) ++sb;
      while (se > sb && std::isspace(static_cast<unsigned char>(text[se - 1]))) --se;
      a.char_begin = sb;
      a.char_end = se;
      auto toks = tokenize_with_offsets(text.substr(sb, se - sb));
      if (toks.empty()) continue;
      for (auto& [off, tok] : toks) {
        a.tokens.push_back(tok);
        a.pos_tags.push_back(guess_pos(tok));
        a.ner_tags.push_back(parse_number_token(tok) ? "NUMBER" : "O");
      }
      // Backbone: token 0 is the root, everything else attaches to the
      // previous token. Then carve out "X of [det/adj]* Y" attachments.
      for (std::size_t i = 0; i < a.tokens.size(); ++i) {
        int gov = i == 0 ? -1 : static_cast<int>(i) - 1;
        std::string rel = i == 0 ? "root" : (a.pos_tags[i].size() == 1 ? "punct" : "dep");
        a.dep_edges.push_back({static_cast<int>(i), gov, rel});
      }
      for (std::size_t i = 0; i + 2 < a.tokens.size(); ++i) {
        if (!noun_pos(a.pos_tags[i])) continue;
        if (to_lower(a.tokens[i + 1]) != "of") continue;
        std::size_t j = i + 2;
        std::vector<std::size_t> modifiers;
        while (j < a.tokens.size() &&
               (a.pos_tags[j] == "DT" || a.pos_tags[j] == "JJ" || a.pos_tags[j] == "PRP$"))
          modifiers.push_back(j++);
        if (j >= a.tokens.size() || !noun_pos(a.pos_tags[j])) continue;
        a.dep_edges[j] = {static_cast<int>(j), static_cast<int>(i), "nmod_of"};
        a.dep_edges[i + 1] = {static_cast<int>(i + 1), static_cast<int>(j), "case"};
        for (std::size_t m : modifiers)
          a.dep_edges[m] = {static_cast<int>(m), static_cast<int>(j),
                            a.pos_tags[m] == "JJ" ? "amod" : "det"};
      }
      validate_annotation(a, text);
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<SentenceAnnotation> HttpAnnotatorClient::annotate(const Transcript& t) {
  httplib::Client client(endpoint_);
  client.set_read_timeout(timeout_sec_, 0);
  client.set_connection_timeout(timeout_sec_, 0);

  ordered_json req;
  req["interview_id"] = t.interview_id;
  auto turns = ordered_json::array();
  for (const auto& turn : t.turns) turns.push_back({{"text", turn.text}});
  req["turns"] = turns;

  auto res = client.Post("/annotate", req.dump(), "application/json");
  if (!res) throw IoError("annotator endpoint unreachable: " + endpoint_);
  if (res->status != 200)
    throw IoError("annotator endpoint returned status " + std::to_string(res->status));

  // Response body: one annotation record per line, same shape as the files.
  return parse_annotation_records(res->body, t);
}

}  // namespace agex
