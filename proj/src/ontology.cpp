#include "agex/ontology.hpp"

#include <set>

#include "agex/error.hpp"
#include "agex/io_util.hpp"
#include "agex/text_util.hpp"

namespace agex {

using nlohmann::ordered_json;

std::string value_type_name(ValueType v) {
  switch (v) {
    case ValueType::quantitative: return "quantitative";
    case ValueType::categorical: return "categorical";
    case ValueType::boolean_: return "boolean";
  }
  return "quantitative";
}

std::optional<ValueType> parse_value_type(const std::string& s) {
  if (s == "quantitative") return ValueType::quantitative;
  if (s == "categorical") return ValueType::categorical;
  if (s == "boolean") return ValueType::boolean_;
  return std::nullopt;
}

const OntologyNode* Ontology::find(const std::string& node_id) const {
  for (const auto& n : nodes)
    if (n.node_id == node_id) return &n;
  return nullptr;
}

const OntologyNode* Ontology::find_by_name(const std::string& name) const {
  for (const auto& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

Ontology load_ontology(const std::string& content) {
  Ontology o;
  std::set<std::string> ids;
  for (const auto& [line_no, line] : config_lines(content)) {
    auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw ParseError("expected: node_id, name, value_type, expected_units(;), aliases(;)",
                       line_no);
    OntologyNode n;
    n.node_id = fields[0];
    n.name = fields[1];
    if (n.node_id.empty()) throw ParseError("empty node_id", line_no);
    if (n.name.empty()) throw ParseError("empty node name", line_no);
    if (!ids.insert(n.node_id).second)
      throw ValidationError("duplicate ontology node_id: " + n.node_id);
    auto vt = parse_value_type(fields[2]);
    if (!vt) throw ParseError("unknown value_type: " + fields[2], line_no);
    n.value_type = *vt;
    for (const auto& u : split_trim(fields[3], ';'))
      if (!u.empty()) n.expected_units.insert(to_lower(u));
    for (const auto& a : split_trim(fields[4], ';'))
      if (!a.empty()) n.aliases.push_back(a);
    o.nodes.push_back(std::move(n));
  }
  return o;
}

std::string backend_name(Backend b) { return b == Backend::ns ? "ns" : "llm"; }

bool value_type_matches(const nlohmann::json& value, ValueType type) {
  switch (type) {
    case ValueType::quantitative: return value.is_number();
    case ValueType::categorical: return value.is_string();
    case ValueType::boolean_: return value.is_boolean();
  }
  return false;
}

ordered_json grounded_record_to_json(const GroundedRecord& r) {
  ordered_json j;
  j["grounding"] = r.grounding;
  j["grounding_id"] = r.grounding_id;
  j["value"] = r.value;
  if (r.unit) j["unit"] = *r.unit;
  j["backend"] = backend_name(r.backend);
  if (r.score) j["score"] = *r.score;
  auto spans = ordered_json::array();
  for (const auto& s : r.provenance)
    spans.push_back({{"turn_begin", s.turn_begin},
                     {"turn_end", s.turn_end},
                     {"char_begin", s.char_begin},
                     {"char_end", s.char_end}});
  j["provenance"] = spans;
  return j;
}

std::string serialize_grounded_records(const std::vector<GroundedRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) arr.push_back(grounded_record_to_json(r));
  return arr.dump(2) + "\n";
}

}  // namespace agex
