#include "agex/knowledge_base.hpp"

#include <set>

#include "agex/error.hpp"
#include "agex/io_util.hpp"
#include "agex/text_util.hpp"

namespace agex {

namespace {

KnowledgeBase::Surface make_surface(const std::string& text, int line_no) {
  KnowledgeBase::Surface s;
  for (const auto& w : word_spans(text)) s.words.push_back(to_lower(w.word));
  if (s.words.empty()) throw ParseError("empty surface form", line_no);
  return s;
}

bool surface_matches(const KnowledgeBase::Surface& s, const std::vector<std::string>& toks,
                     std::size_t i) {
  if (i + s.words.size() > toks.size()) return false;
  for (std::size_t k = 0; k < s.words.size(); ++k)
    if (toks[i + k] != s.words[k]) return false;
  return true;
}

}  // namespace

void load_kb_categories(const std::string& content, KnowledgeBase& kb) {
  // Surface -> category uniqueness within the domain.
  std::map<std::string, std::string> owners;
  for (const auto& [cat, surfaces] : kb.categories)
    for (const auto& s : surfaces) {
      std::string key;
      for (const auto& w : s.words) key += w + " ";
      owners[key] = cat;
    }

  for (const auto& [line_no, line] : config_lines(content)) {
    auto fields = split_csv_line(line);
    if (fields.size() != 2) throw ParseError("expected: category, surface_form", line_no);
    if (fields[0].empty()) throw ParseError("empty category name", line_no);
    KnowledgeBase::Surface s = make_surface(fields[1], line_no);
    std::string key;
    for (const auto& w : s.words) key += w + " ";
    auto [it, inserted] = owners.insert({key, fields[0]});
    if (!inserted && it->second != fields[0])
      throw ValidationError("surface form '" + trim(key) + "' maps to both '" + it->second +
                            "' and '" + fields[0] + "'");
    if (!inserted) continue;  // exact duplicate line, harmless
    kb.categories[fields[0]].push_back(std::move(s));
  }
}

void load_kb_units(const std::string& content, KnowledgeBase& kb) {
  for (const auto& [line_no, line] : config_lines(content)) {
    auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw ParseError("expected: unit, surface_form, compatible_identifiers(;)", line_no);
    if (fields[0].empty()) throw ParseError("empty unit name", line_no);
    auto& unit = kb.units[fields[0]];
    unit.surfaces.push_back(make_surface(fields[1], line_no));
    for (const auto& c : split_trim(fields[2], ';')) {
      if (c.empty()) continue;
      bool known = false;
      for (const auto& existing : unit.compatible_identifiers) known |= existing == c;
      if (!known) unit.compatible_identifiers.push_back(c);
    }
  }
}

std::optional<KnowledgeBase::Hit> KnowledgeBase::match_category(
    const std::vector<std::string>& lower_tokens, std::size_t i) const {
  std::optional<Hit> best;
  for (const auto& [cat, surfaces] : categories)
    for (const auto& s : surfaces)
      if (surface_matches(s, lower_tokens, i))
        if (!best || s.words.size() > best->word_count) best = Hit{cat, s.words.size()};
  return best;
}

std::optional<KnowledgeBase::Hit> KnowledgeBase::match_unit(
    const std::vector<std::string>& lower_tokens, std::size_t i) const {
  std::optional<Hit> best;
  for (const auto& [name, unit] : units)
    for (const auto& s : unit.surfaces)
      if (surface_matches(s, lower_tokens, i))
        if (!best || s.words.size() > best->word_count) best = Hit{name, s.words.size()};
  return best;
}

}  // namespace agex
