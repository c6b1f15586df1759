#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace agex {

enum class FieldType { integer, number, boolean_, string_, string_list };

std::string field_type_name(FieldType t);
std::optional<FieldType> parse_field_type(const std::string& s);

struct SchemaField {
  std::string name;
  FieldType type = FieldType::string_;
  bool optional = true;
  std::string guideline;
};

struct WorkedExample {
  std::string input;
  nlohmann::ordered_json output;  // array of records
};

// A target-information definition driving one extraction prompt.
struct ExtractionSchema {
  std::string name;
  std::string description;
  std::vector<SchemaField» fields;
  WorkedExample example;
  std::set<std::string> topic_labels;

  const SchemaField* find_field(const std::string& name) const;
};

// JSON schema file; the worked example must conform to the declared types.
ExtractionSchema load_schema(const std::string& content);
std::vector<ExtractionSchema> load_schemas_dir(const std::string& dir);

// JSON-schema-style structural description substituted into the prompt.
std::string render_schema_description(const ExtractionSchema& s);
std::string render_example(const ExtractionSchema& s);

// Instantiates the extraction prompt for one text block. The schema and
// example land inside the template's two backtick fences; any 3+ backtick run
// in substituted content is broken so the fence count stays stable.
std::string build_prompt(const ExtractionSchema& s, const std::string& block_text);

}  // namespace agex
