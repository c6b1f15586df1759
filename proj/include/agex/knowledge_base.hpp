#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agex/transcript.hpp"

namespace agex {

// Domain lexicon backing fragment extraction: categorical surface forms
// (barn types, crop names, ...) and unit vocabularies with the identifier
// categories they pair with.
struct KnowledgeBase {
  Domain domain = Domain::unknown;

  struct Surface {
    std::vector<std::string> words;  // lowercased word sequence
  };

  // category name -> surface forms
  std::map<std::string, std::vector<Surface>> categories;

  struct Unit {
    std::vector<Surface> surfaces;
    std::vector<std::string> compatible_identifiers;
  };
  // unit name -> vocabulary
  std::map<std::string, Unit> units;

  struct Hit {
    std::string name;        // category or unit name
    std::size_t word_count;  // surface length in words
  };

  // Longest category/unit surface starting at token index i (lowercased tokens).
  std::optional<Hit> match_category(const std::vector<std::string>& lower_tokens,
                                    std::size_t i) const;
  std::optional<Hit> match_unit(const std::vector<std::string>& lower_tokens,
                                std::size_t i) const;
};

// Delimited text, one entry per line: `category, surface_form`.
void load_kb_categories(const std::string& content, KnowledgeBase& kb);
// Delimited text: `unit, surface_form, compatible_identifier_categories(;)`.
void load_kb_units(const std::string& content, KnowledgeBase& kb);

}  // namespace agex
