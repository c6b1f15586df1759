#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace agex {

enum class RuleKind { token_pattern, dependency_pattern };

enum class FragmentKind {
  identifier,
  quantitative_value,
  categorical_value,
  boolean_value,
  compound_value
};

std::string fragment_kind_name(FragmentKind k);
std::optional<FragmentKind> parse_fragment_kind(const std::string& s);

// One bracketed token constraint: [word=/.../ & pos=/.../ & ner=/.../].
// Word regexes are case-insensitive; pos and ner are exact-case.
struct TokenConstraint {
  std::optional<std::regex> word, pos, ner;
  std::string word_src, pos_src, ner_src;

  bool matches(const std::string& token, const std::string& pos_tag,
               const std::string& ner_tag) const;
};

struct TokenPatternElem {
  TokenConstraint constraint;
  char quant = 0;  // 0, '?', '*', '+'
};

// A flat token-sequence pattern; a named item is a capture group.
struct TokenPattern {
  struct Item {
    std::optional<std::string> capture_name;
    std::vector<TokenPatternElem> elems;
  };
  std::vector<Item> items;
};

// Named constraint on a dependency capture target.
enum class TargetConstraint { any, noun_phrase, number, word };

std::string target_constraint_name(TargetConstraint c);
bool target_constraint_ok(TargetConstraint c, const std::string& pos_tag);

struct DepCapture {
  std::string name;
  TargetConstraint constraint = TargetConstraint::any;
  std::vector<std::string> path;  // relation labels, followed in order
};

struct DepPattern {
  TokenConstraint trigger;
  std::vector<DepCapture> captures;
};

struct Rule {
  std::string name;
  std::string label;
  std::string example;
  RuleKind kind = RuleKind::dependency_pattern;
  FragmentKind produces = FragmentKind::identifier;
  std::optional<bool> bool_value;  // for boolean cue rules
  int priority = 1;

  TokenPattern token_pattern;  // when kind == token_pattern
  DepPattern dep_pattern;      // when kind == dependency_pattern
};

struct RuleSet {
  std::vector<Rule> rules;
};

// Compiles the structured rule text (one dashed record per rule with keys
// name, label, example, type, priority, produces, value, pattern). Throws
// ParseError with the rule name and line on any syntax problem, duplicate
// rule name, invalid regex, or unknown key.
RuleSet compile_rules(const std::string& source);

// Canonical text form; compile(serialize(compile(x))) == compile(x).
std::string serialize_rules(const RuleSet& rules);

}  // namespace agex
