#include "agex/assembly.hpp"

#include <algorithm>

#include "agex/error.hpp"
#include "agex/io_util.hpp"
#include "agex/text_util.hpp"

namespace agex {

std::set<std::string> AssemblyConfig::known_categories() const {
  std::set<std::string> out = unitless_allowlist;
  for (const auto& [cat, _] : per_identifier_window) out.insert(cat);
  for (const auto& [cat, _] : compatibility) out.insert(cat);
  return out;
}

AssemblyConfig load_assembly_config(const std::string& content) {
  AssemblyConfig cfg;
  for (const auto& [line_no, line] : config_lines(content)) {
    auto fields = split_csv_line(line);
    const std::string& directive = fields[0];
    auto need = [&](std::size_t n) {
      if (fields.size() != n)
        throw ParseError("directive '" + directive + "' takes " + std::to_string(n - 1) +
                             " arguments",
                         line_no);
    };
    auto parse_window = [&](const std::string& s) {
      int w = 0;
      try {
        w = std::stoi(s);
      } catch (const std::exception&) {
        throw ParseError("window must be an integer: " + s, line_no);
      }
      if (w < 1) throw ValidationError("window must be >= 1, got " + s);
      return w;
    };
    if (directive == "default_window") {
      need(2);
      cfg.default_window = parse_window(fields[1]);
    } else if (directive == "window") {
      need(3);
      cfg.per_identifier_window[fields[1]] = parse_window(fields[2]);
    } else if (directive == "unitless") {
      need(2);
      cfg.unitless_allowlist.insert(fields[1]);
    } else if (directive == "compatible") {
      need(3);
      cfg.compatibility[fields[1]].insert(fields[2]);
    } else {
      throw ParseError("unknown assembly directive '" + directive + "'", line_no);
    }
  }
  return cfg;
}

std::optional<std::string> categorize_identifier(const std::string& identifier_text,
                                                 const AssemblyConfig& cfg) {
  std::set<std::string> stems;
  for (const auto& w : content_tokens(identifier_text)) stems.insert(stem(w));

  std::optional<std::string> best;
  std::size_t best_words = 0;
  for (const auto& cat : cfg.known_categories()) {
    auto cat_words = content_tokens(cat);
    bool all = !cat_words.empty();
    for (const auto& w : cat_words) all = all && stems.count(stem(w)) > 0;
    if (!all) continue;
    if (!best || cat_words.size() > best_words ||
        (cat_words.size() == best_words && cat < *best)) {
      best = cat;
      best_words = cat_words.size();
    }
  }
  return best;
}

std::optional<std::string> value_key(const Fragment& value) {
  if (value.kind == FragmentKind::boolean_value) return "boolean";
  if (value.category) return value.category;
  return std::nullopt;  // bare number
}

namespace {

struct IdentifierSite {
  const Fragment* fragment;
  std::string category;
  std::size_t compat_size;
};

bool is_value_kind(FragmentKind k) { return k != FragmentKind::identifier; }

}  // namespace

AssemblyResult assemble(const std::vector<Fragment>& fragments, const Transcript& t,
                        const AssemblyConfig& cfg) {
  AssemblyResult res;

  std::vector<IdentifierSite> identifiers;
  for (const auto& f : fragments) {
    if (f.kind != FragmentKind::identifier) continue;
    auto cat = categorize_identifier(f.text, cfg);
    if (!cat) continue;  // uncategorized identifiers cannot pass any gate
    auto compat = cfg.compatibility.find(*cat);
    identifiers.push_back(
        {&f, *cat, compat == cfg.compatibility.end() ? 0 : compat->second.size()});
  }

  for (const auto& f : fragments) {
    if (!is_value_kind(f.kind)) continue;
    if (static_cast<std::size_t>(f.turn_index) >= t.turns.size())
      throw ValidationError("fragment references missing turn " + std::to_string(f.turn_index));

    auto key = value_key(f);
    const IdentifierSite* best = nullptr;
    int best_distance = 0;
    for (const auto& site : identifiers) {
      if (site.fragment->turn_index > f.turn_index) continue;  // backward-only
      int d = f.turn_index - site.fragment->turn_index;
      if (d > cfg.window_for(site.category)) continue;
      if (key) {
        auto compat = cfg.compatibility.find(site.category);
        if (compat == cfg.compatibility.end() || !compat->second.count(*key)) continue;
      } else {
        if (!cfg.unitless_allowlist.count(site.category)) continue;
      }
      if (!best) {
        best = &site;
        best_distance = d;
        continue;
      }
      // Nearest wins; at equal distance the more specific category (fewer
      // compatible units), then the closest preceding span.
      bool better = false;
      if (d != best_distance) {
        better = d < best_distance;
      } else if (site.compat_size != best->compat_size) {
        better = site.compat_size < best->compat_size;
      } else if (site.fragment->char_begin != best->fragment->char_begin) {
        better = site.fragment->char_begin > best->fragment->char_begin;
      } else if (site.fragment->char_end != best->fragment->char_end) {
        better = site.fragment->char_end > best->fragment->char_end;
      } else {
        better = site.fragment->label < best->fragment->label;
      }
      if (better) {
        best = &site;
        best_distance = d;
      }
    }
    if (best) {
      res.pairs.push_back({*best->fragment, f, LinkKind::windowed, best_distance, best->category});
    } else {
      res.residual_values.push_back(f);
    }
  }
  return res;
}

std::vector<IdentifierValuePair> fallback_assign(const std::vector<Fragment>& residual_values,
                                                 const AssemblyConfig& cfg) {
  std::vector<IdentifierValuePair> out;
  for (const auto& f : residual_values) {
    auto key = value_key(f);
    if (!key) continue;  // bare numbers are never unambiguous
    std::vector<std::string> candidates;
    for (const auto& [cat, compat] : cfg.compatibility)
      if (compat.count(*key)) candidates.push_back(cat);
    if (candidates.size() != 1) continue;

    Fragment synthesized;
    synthesized.label = "FallbackIdentifier";
    synthesized.kind = FragmentKind::identifier;
    synthesized.text = candidates.front();
    synthesized.turn_index = f.turn_index;
    synthesized.char_begin = f.char_begin;
    synthesized.char_end = f.char_begin;  // zero-width: nothing in the text says it
    out.push_back({std::move(synthesized), f, LinkKind::fallback, 0, candidates.front()});
  }
  return out;
}

}  // namespace agex
