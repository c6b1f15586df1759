#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace agex {

enum class ValueType { quantitative, categorical, boolean_ };

std::string value_type_name(ValueType v);
std::optional<ValueType> parse_value_type(const std::string& s);

struct OntologyNode {
  std::string node_id;
  std::string name;
  std::vector<std::string> aliases;
  ValueType value_type = ValueType::quantitative;
  std::set<std::string> expected_units;  // unit names, or expected categorical values
};

struct Ontology {
  std::vector<OntologyNode> nodes;

  const OntologyNode* find(const std::string& node_id) const;
  const OntologyNode* find_by_name(const std::string& name) const;
};

// Delimited text: `node_id, name, value_type, expected_units(;), aliases(;)`.
Ontology load_ontology(const std::string& content);

enum class Backend { ns, llm };
std::string backend_name(Backend b);

struct SourceSpan {
  int turn_begin = 0;
  int turn_end = 0;  // inclusive
  std::size_t char_begin = 0;
  std::size_t char_end = 0;
};

// Final normalized output of either backend.
struct GroundedRecord {
  std::string grounding;     // ontology node name
  std::string grounding_id;  // ontology node id
  nlohmann::json value;      // number, string, or boolean
  std::optional<std::string> unit;
  std::vector<SourceSpan> provenance;
  Backend backend = Backend::ns;
  std::optional<double> score;  // similarity score for NS groundings
};

nlohmann::ordered_json grounded_record_to_json(const GroundedRecord& r);
std::string serialize_grounded_records(const std::vector<GroundedRecord>& records);

// True when the record's value JSON type is legal for the node's value_type.
bool value_type_matches(const nlohmann::json& value, ValueType type);

}  // namespace agex
