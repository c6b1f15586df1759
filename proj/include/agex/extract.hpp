#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agex/annotation.hpp"
#include "agex/knowledge_base.hpp"
#include "agex/rules.hpp"

namespace agex {

// A standalone extracted mention, before assembly into a relation.
struct Fragment {
  std::string label;
  FragmentKind kind = FragmentKind::identifier;
  std::string text;
  int turn_index = 0;
  std::size_t char_begin = 0;
  std::size_t char_end = 0;
  std::map<std::string, std::string> fields;  // capture name -> captured text

  std::optional<std::string> unit;      // unit name for measured values
  std::optional<double> numeric_value;  // quantitative and compound values
  bool numeric_integer = false;
  std::optional<std::string> category;  // KB category, unit name, or "boolean"
  std::optional<bool> bool_value;

  bool operator==(const Fragment&) const = default;
};

// Runs token rules, then dependency rules, then knowledge-base value
// extraction over each sentence. Dependency captures project to the maximal
// subtree of the reached token. Number tokens adjacent to KB category/unit
// surfaces become compound/measured values; other number tokens become bare
// quantitative values. Overlapping fragments with the same label are reduced
// leftmost-longest. Output is sorted by span.
std::vector<Fragment> extract_fragments(const std::vector<SentenceAnnotation>& annos,
                                        const RuleSet& rules, const KnowledgeBase& kb);

// Single-sentence worker, exposed for tests.
std::vector<Fragment> extract_from_sentence(const SentenceAnnotation& anno,
                                            const std::string& turn_text, const RuleSet& rules,
                                            const KnowledgeBase& kb);

}  // namespace agex
