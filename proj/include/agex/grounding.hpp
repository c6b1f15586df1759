#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agex/assembly.hpp"
#include "agex/ontology.hpp"

namespace agex {

struct GroundingConfig {
  double embed_weight = 0.5;     // w_e; string weight is 1 - w_e
  double accept_threshold = 0.5; // tau
  enum class Embedder { hashed_ngram, external } embedder = Embedder::hashed_ngram;
  std::string endpoint;  // external embedder address
  int dim = 256;

  double string_weight() const { return 1.0 - embed_weight; }
};

// Character-trigram hashing embedder: lowercase, hash each trigram into dim
// buckets, count, L2-normalize. Deterministic; dim must be >= 16. Throws on
// empty text.
std::vector<double> hashed_ngram_embed(const std::string& text, int dim);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Shared stemmed content-word count over the smaller side, stopwords
// ("of", "those", "the", "a", "an") excluded. Range [0, 1].
double string_overlap(const std::string& a, const std::string& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> embed(const std::string& text) = 0;
};

class HashedNgramEmbedder : public Embedder {
 public:
  explicit HashedNgramEmbedder(int dim) : dim_(dim) {}
  std::vector<double> embed(const std::string& text) override {
    return hashed_ngram_embed(text, dim_);
  }

 private:
  int dim_;
};

// Vector provider over a local HTTP socket: POST /embed {"text": ...} ->
// {"vector": [...]}.
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(std::string endpoint, int timeout_sec = 30)
      : endpoint_(std::move(endpoint)), timeout_sec_(timeout_sec) {}
  std::vector<double> embed(const std::string& text) override;

 private:
  std::string endpoint_;
  int timeout_sec_;
};

std::unique_ptr<Embedder> make_embedder(const GroundingConfig& cfg);

struct NodeScore {
  double score = 0.0;
  double best_overlap = 0.0;
};

// w_e * cosine + w_s * overlap, best over the node name and its aliases.
NodeScore score_node(const std::string& query, const OntologyNode& node,
                     const GroundingConfig& cfg, Embedder& embedder);

// True when the pair's value could live under this node: value kind matches
// the node's value_type and, when the node lists expected units/values, the
// value's unit or text is among them.
bool compatible_with_node(const IdentifierValuePair& pair, const OntologyNode& node);

// Grounds a pair to the best-scoring compatible node at or above the accept
// threshold; nullopt when nothing clears it. Ties break on higher string
// overlap, then lexicographic node_id.
std::optional<GroundedRecord> ground_pair(const IdentifierValuePair& pair, const Ontology& o,
                                          const GroundingConfig& cfg, Embedder& embedder);

}  // namespace agex
