#include "agex/grounding.hpp"

#include <cmath>
#include <map>
#include <set>

#include "httplib.h"
#include "json.hpp"

#include "agex/error.hpp"
#include "agex/text_util.hpp"

namespace agex {

std::vector<double> hashed_ngram_embed(const std::string& text, int dim) {
  if (dim < 16) throw ValidationError("embedding dim must be >= 16");
  std::string lower = to_lower(text);
  if (trim(lower).empty()) throw ValidationError("cannot embed empty text (zero vector)");

  std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
  if (lower.size() < 3) {
    v[fnv1a64(lower) % static_cast<std::size_t>(dim)] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= lower.size(); ++i)
      v[fnv1a64(lower.substr(i, 3)) % static_cast<std::size_t>(dim)] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

const std::set<std::string>& overlap_stopwords() {
  static const std::set<std::string> s = {"of", "those", "the", "a", "an"};
  return s;
}

std::map<std::string, int> content_word_multiset(const std::string& text) {
  std::map<std::string, int> out;
  for (const auto& w : content_tokens(text)) {
    if (overlap_stopwords().count(w)) continue;
    ++out[stem(w)];
  }
  return out;
}

}  // namespace

double string_overlap(const std::string& a, const std::string& b) {
  auto ma = content_word_multiset(a);
  auto mb = content_word_multiset(b);
  std::size_t ca = 0, cb = 0, shared = 0;
  for (const auto& [w, n] : ma) ca += static_cast<std::size_t>(n);
  for (const auto& [w, n] : mb) cb += static_cast<std::size_t>(n);
  if (ca == 0 || cb == 0) return 0.0;
  for (const auto& [w, n] : ma) {
    auto it = mb.find(w);
    if (it != mb.end()) shared += static_cast<std::size_t>(std::min(n, it->second));
  }
  return static_cast<double>(shared) / static_cast<double>(std::min(ca, cb));
}

std::vector<double> HttpEmbedder::embed(const std::string& text) {
  httplib::Client client(endpoint_);
  client.set_read_timeout(timeout_sec_, 0);
  client.set_connection_timeout(timeout_sec_, 0);
  nlohmann::json req{{"text", text}};
  auto res = client.Post("/embed", req.dump(), "application/json");
  if (!res) throw IoError("embedder endpoint unreachable: " + endpoint_);
  if (res->status != 200)
    throw IoError("embedder endpoint returned status " + std::to_string(res->status));
  auto body = nlohmann::json::parse(res->body);
  if (!body.contains("vector") || !body["vector"].is_array())
    throw ParseError("embedder response missing 'vector'");
  return body["vector"].get<std::vector<double>>();
}

std::unique_ptr<Embedder> make_embedder(const GroundingConfig& cfg) {
  if (cfg.embedder == GroundingConfig::Embedder::external)
    return std::make_unique<HttpEmbedder>(cfg.endpoint);
  return std::make_unique<HashedNgramEmbedder>(cfg.dim);
}

NodeScore score_node(const std::string& query, const OntologyNode& node,
                     const GroundingConfig& cfg, Embedder& embedder) {
  auto qv = embedder.embed(query);
  NodeScore best;
  bool first = true;
  std::vector<std::string> names{node.name};
  names.insert(names.end(), node.aliases.begin(), node.aliases.end());
  for (const auto& name : names) {
    double c = cosine(qv, embedder.embed(name));
    double o = string_overlap(query, name);
    double s = cfg.embed_weight * c + cfg.string_weight() * o;
    if (first || s > best.score || (s == best.score && o > best.best_overlap)) {
      best = {s, o};
      first = false;
    }
  }
  return best;
}

bool compatible_with_node(const IdentifierValuePair& pair, const OntologyNode& node) {
  const Fragment& v = pair.value;
  switch (node.value_type) {
    case ValueType::boolean_:
      return v.kind == FragmentKind::boolean_value;
    case ValueType::quantitative: {
      if (v.kind != FragmentKind::quantitative_value && v.kind != FragmentKind::compound_value)
        return false;
      // A positive unit mismatch fails; a missing unit stays optional.
      if (v.unit && !node.expected_units.empty() && !node.expected_units.count(to_lower(*v.unit)))
        return false;
      return true;
    }
    case ValueType::categorical: {
      if (v.kind != FragmentKind::categorical_value) return false;
      if (node.expected_units.empty()) return true;
      return node.expected_units.count(to_lower(trim(v.text))) > 0;
    }
  }
  return false;
}

std::optional<GroundedRecord> ground_pair(const IdentifierValuePair& pair, const Ontology& o,
                                          const GroundingConfig& cfg, Embedder& embedder) {
  const OntologyNode* best_node = nullptr;
  NodeScore best;
  for (const auto& node : o.nodes) {
    if (!compatible_with_node(pair, node)) continue;
    NodeScore s = score_node(pair.identifier.text, node, cfg, embedder);
    if (!best_node || s.score > best.score ||
        (s.score == best.score &&
         (s.best_overlap > best.best_overlap ||
          (s.best_overlap == best.best_overlap && node.node_id < best_node->node_id)))) {
      best_node = &node;
      best = s;
    }
  }
  if (!best_node || best.score < cfg.accept_threshold) return std::nullopt;

  GroundedRecord rec;
  rec.grounding = best_node->name;
  rec.grounding_id = best_node->node_id;
  rec.backend = Backend::ns;
  rec.score = best.score;
  const Fragment& v = pair.value;
  if (v.kind == FragmentKind::boolean_value) {
    rec.value = v.bool_value.value_or(true);
  } else if (v.kind == FragmentKind::categorical_value) {
    rec.value = to_lower(trim(v.text));
  } else {
    if (!v.numeric_value) throw ValidationError("quantitative fragment without numeric value");
    if (v.numeric_integer)
      rec.value = static_cast<std::int64_t>(*v.numeric_value);
    else
      rec.value = *v.numeric_value;
  }
  rec.unit = v.unit;
  if (pair.link_kind == LinkKind::windowed)
    rec.provenance.push_back({pair.identifier.turn_index, pair.identifier.turn_index,
                              pair.identifier.char_begin, pair.identifier.char_end});
  rec.provenance.push_back({v.turn_index, v.turn_index, v.char_begin, v.char_end});
  return rec;
}

}  // namespace agex
