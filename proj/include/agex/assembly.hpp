#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agex/extract.hpp"
#include "agex/transcript.hpp"

namespace agex {

struct AssemblyConfig {
  int default_window = 3;  // turns
  std::map<std::string, int> per_identifier_window;
  std::set<std::string> unitless_allowlist;  // identifier categories taking bare numbers
  std::map<std::string, std::set<std::string>> compatibility;  // category -> unit/category names

  int window_for(const std::string& category) const {
    auto it = per_identifier_window.find(category);
    return it != per_identifier_window.end() ? it->second : default_window;
  }
  // Every category name the config knows about.
  std::set<std::string> known_categories() const;
};

// Directive lines: `default_window, N` / `window, category, N` /
// `unitless, category` / `compatible, category, unit_or_category`.
AssemblyConfig load_assembly_config(const std::string& content);

enum class LinkKind { windowed, fallback };

struct IdentifierValuePair {
  Fragment identifier;
  Fragment value;
  LinkKind link_kind = LinkKind::windowed;
  int distance = 0;  // turns between identifier and value
  std::string identifier_category;
};

struct AssemblyResult {
  std::vector<IdentifierValuePair> pairs;
  std::vector<Fragment> residual_values;  // unlinked, for the fallback pass
};

// Assigns an identifier fragment to a config category by stemmed-word
// containment: every word of the category name must occur in the fragment
// text. The most specific (longest) category wins; nullopt when none match.
std::optional<std::string> categorize_identifier(const std::string& identifier_text,
                                                 const AssemblyConfig& cfg);

// The unit/category key a value fragment brings to compatibility checks:
// unit name, KB category, or "boolean"; nullopt for bare numbers.
std::optional<std::string> value_key(const Fragment& value);

// Links each value fragment to the nearest compatible identifier looking
// backward up to the identifier category's window. Bare numbers link only to
// allowlisted categories. Ties at equal distance prefer the more specific
// category (fewer compatible units). Unlinked values land in residual_values.
AssemblyResult assemble(const std::vector<Fragment>& fragments, const Transcript& t,
                        const AssemblyConfig& cfg);

// Assigns a residual value to the single identifier category its key is
// compatible with, synthesizing the identifier. Values with zero or several
// candidate categories stay unassigned.
std::vector<IdentifierValuePair> fallback_assign(const std::vector<Fragment>& residual_values,
                                                 const AssemblyConfig& cfg);

}  // namespace agex
