#include "agex/rules.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "agex/error.hpp"
#include "agex/text_util.hpp"

namespace agex {

std::string fragment_kind_name(FragmentKind k) {
  switch (k) {
    case FragmentKind::identifier: return "identifier";
    case FragmentKind::quantitative_value: return "quantitative_value";
    case FragmentKind::categorical_value: return "categorical_value";
    case FragmentKind::boolean_value: return "boolean_value";
    case FragmentKind::compound_value: return "compound_value";
  }
  return "identifier";
}

std::optional<FragmentKind> parse_fragment_kind(const std::string& s) {
  if (s == "identifier") return FragmentKind::identifier;
  if (s == "quantitative_value") return FragmentKind::quantitative_value;
  if (s == "categorical_value") return FragmentKind::categorical_value;
  if (s == "boolean_value") return FragmentKind::boolean_value;
  if (s == "compound_value") return FragmentKind::compound_value;
  return std::nullopt;
}

bool TokenConstraint::matches(const std::string& token, const std::string& pos_tag,
                              const std::string& ner_tag) const {
  if (word && !std::regex_search(token, *word)) return false;
  if (pos && !std::regex_search(pos_tag, *pos)) return false;
  if (ner && !std::regex_search(ner_tag, *ner)) return false;
  return true;
}

std::string target_constraint_name(TargetConstraint c) {
  switch (c) {
    case TargetConstraint::any: return "Any";
    case TargetConstraint::noun_phrase: return "NounPhrase";
    case TargetConstraint::number: return "Number";
    case TargetConstraint::word: return "Word";
  }
  return "Any";
}

bool target_constraint_ok(TargetConstraint c, const std::string& pos_tag) {
  switch (c) {
    case TargetConstraint::any:
      return true;
    case TargetConstraint::noun_phrase:
      return pos_tag.rfind("NN", 0) == 0 || pos_tag == "PRP";
    case TargetConstraint::number:
      return pos_tag == "CD";
    case TargetConstraint::word:
      return !pos_tag.empty() && std::isalpha(static_cast<unsigned char>(pos_tag[0]));
  }
  return true;
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  std::string rule_name;
  int line;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("rule '" + rule_name + "': " + msg, line);
  }
  bool eof() const { return i >= s.size(); }
  char peek() const { return eof() ? '\0' : s[i]; }
  void skip_ws() {
    while (!eof() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool consume(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "' at pattern offset " +
                          std::to_string(i));
  }
  std::string ident() {
    skip_ws();
    std::size_t start = i;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (i == start) fail("expected identifier at pattern offset " + std::to_string(i));
    return s.substr(start, i - start);
  }
};

std::regex compile_regex(const std::string& src, bool icase, Cursor& cur) {
  try {
    auto flags = std::regex::ECMAScript;
    if (icase) flags |= std::regex::icase;
    return std::regex(src, flags);
  } catch (const std::regex_error& e) {
    cur.fail("invalid regex /" + src + "/: " + e.what());
  }
}

// Parses /regex/ with \/ escapes.
std::string parse_regex_body(Cursor& cur) {
  cur.skip_ws();
  cur.expect('/');
  std::string out;
  while (!cur.eof() && cur.peek() != '/') {
    char c = cur.s[cur.i++];
    if (c == '\\' && cur.peek() == '/') {
      out.push_back('/');
      ++cur.i;
    } else {
      out.push_back(c);
    }
  }
  cur.expect('/');
  return out;
}

TokenConstraint parse_token_constraint(Cursor& cur) {
  TokenConstraint tc;
  cur.expect('[');
  cur.skip_ws();
  bool first = true;
  while (!cur.eof() && cur.peek() != ']') {
    if (!first) {
      cur.skip_ws();
      cur.expect('&');
    }
    first = false;
    std::string field = cur.ident();
    cur.skip_ws();
    cur.expect('=');
    std::string body = parse_regex_body(cur);
    if (field == "word") {
      tc.word_src = body;
      tc.word = compile_regex(body, /*icase=*/true, cur);
    } else if (field == "pos") {
      tc.pos_src = body;
      tc.pos = compile_regex(body, /*icase=*/false, cur);
    } else if (field == "ner") {
      tc.ner_src = body;
      tc.ner = compile_regex(body, /*icase=*/false, cur);
    } else {
      cur.fail("unknown field key '" + field + "' in token constraint");
    }
    cur.skip_ws();
  }
  cur.expect(']');
  return tc;
}

char parse_quantifier(Cursor& cur) {
  char c = cur.peek();
  if (c == '?' || c == '*' || c == '+') {
    ++cur.i;
    return c;
  }
  return 0;
}

TokenPattern parse_token_pattern(const std::string& src, const std::string& rule_name, int line) {
  Cursor cur{src, 0, rule_name, line};
  TokenPattern pat;
  cur.skip_ws();
  while (!cur.eof()) {
    if (cur.peek() == '(') {
      // (?<name> [..] [..] ...)
      ++cur.i;
      cur.expect('?');
      cur.expect('<');
      std::string name = cur.ident();
      cur.expect('>');
      TokenPattern::Item item;
      item.capture_name = name;
      cur.skip_ws();
      while (!cur.eof() && cur.peek() != ')') {
        TokenPatternElem e;
        e.constraint = parse_token_constraint(cur);
        e.quant = parse_quantifier(cur);
        item.elems.push_back(std::move(e));
        cur.skip_ws();
      }
      cur.expect(')');
      if (item.elems.empty()) cur.fail("empty capture group");
      pat.items.push_back(std::move(item));
    } else if (cur.peek() == '[') {
      TokenPattern::Item item;
      TokenPatternElem e;
      e.constraint = parse_token_constraint(cur);
      e.quant = parse_quantifier(cur);
      item.elems.push_back(std::move(e));
      pat.items.push_back(std::move(item));
    } else {
      cur.fail(std::string("unexpected character '") + cur.peek() + "' in token pattern");
    }
    cur.skip_ws();
  }
  if (pat.items.empty()) Cursor{src, 0, rule_name, line}.fail("empty token pattern");
  return pat;
}

bool valid_relation_label(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

DepPattern parse_dep_pattern(const std::vector<std::pair<int, std::string>>& logical_lines,
                             const std::string& rule_name) {
  DepPattern pat;
  bool have_trigger = false;
  for (const auto& [line_no, line] : logical_lines) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("trigger", 0) == 0) {
      std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ParseError("rule '" + rule_name + "': trigger line needs '='", line_no);
      std::string rhs = trim(t.substr(eq + 1));
      Cursor cur{rhs, 0, rule_name, line_no};
      pat.trigger = parse_token_constraint(cur);
      cur.skip_ws();
      if (!cur.eof())
        cur.fail("trailing content after trigger constraint");
      have_trigger = true;
    } else {
      // capture: "name: Constraint = rel rel ..." or "name = rel ..."
      std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ParseError("rule '" + rule_name + "': capture line needs '='", line_no);
      std::string lhs = trim(t.substr(0, eq));
      std::string rhs = trim(t.substr(eq + 1));
      DepCapture cap;
      std::size_t colon = lhs.find(':');
      if (colon != std::string::npos) {
        cap.name = trim(lhs.substr(0, colon));
        std::string cname = trim(lhs.substr(colon + 1));
        if (cname == "NounPhrase")
          cap.constraint = TargetConstraint::noun_phrase;
        else if (cname == "Number")
          cap.constraint = TargetConstraint::number;
        else if (cname == "Word")
          cap.constraint = TargetConstraint::word;
        else if (cname == "Any" || cname.empty())
          cap.constraint = TargetConstraint::any;
        else
          throw ParseError("rule '" + rule_name + "': unknown capture constraint '" + cname + "'",
                           line_no);
      } else {
        cap.name = lhs;
      }
      if (cap.name.empty())
        throw ParseError("rule '" + rule_name + "': capture needs a name", line_no);
      for (const auto& rel : split_trim(rhs, ' ')) {
        if (rel.empty()) continue;
        if (!valid_relation_label(rel))
          throw ParseError("rule '" + rule_name + "': invalid relation label '" + rel + "'",
                           line_no);
        cap.path.push_back(rel);
      }
      if (cap.path.empty())
        throw ParseError("rule '" + rule_name + "': capture path is empty", line_no);
      pat.captures.push_back(std::move(cap));
    }
  }
  if (!have_trigger)
    throw ParseError("rule '" + rule_name + "': dependency pattern needs a trigger line");
  return pat;
}

struct RawRule {
  std::map<std::string, std::pair<int, std::string>> keys;  // key -> (line, value)
  std::vector<std::pair<int, std::string>> pattern_lines;
  int first_line = 0;
};

std::string unquote(const std::string& s) {
  std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
  return t;
}

std::size_t indent_of(const std::string& line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == ' ') ++n;
  return n;
}

}  // namespace

RuleSet compile_rules(const std::string& source) {
  static const std::set<std::string> known_keys = {"name",     "label", "example", "type",
                                                   "priority", "produces", "value", "pattern"};

  // Split the dashed-record outer layer first.
  std::vector<RawRule> raw_rules;
  std::istringstream in(source);
  std::string line;
  int line_no = 0;
  bool in_pattern = false;
  std::size_t pattern_indent = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);

    if (in_pattern) {
      if (t.empty()) continue;
      std::size_t ind = indent_of(line);
      if (ind > pattern_indent) {
        raw_rules.back().pattern_lines.emplace_back(line_no, line.substr(pattern_indent + 1));
        continue;
      }
      in_pattern = false;  // fall through to normal handling
    }

    if (t.empty() || t[0] == '#') continue;

    if (t.rfind("- ", 0) == 0) {
      raw_rules.push_back({});
      raw_rules.back().first_line = line_no;
      t = trim(t.substr(2));
    } else if (raw_rules.empty()) {
      throw ParseError("expected '- name: ...' to start a rule", line_no);
    }

    std::size_t colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", line_no);
    std::string key = trim(t.substr(0, colon));
    std::string value = trim(t.substr(colon + 1));
    if (!known_keys.count(key)) throw ParseError("unknown field key '" + key + "'", line_no);

    if (key == "pattern") {
      if (value != "|")
        throw ParseError("pattern must be a '|' block", line_no);
      in_pattern = true;
      pattern_indent = indent_of(line);
      raw_rules.back().keys[key] = {line_no, ""};
    } else {
      if (raw_rules.back().keys.count(key))
        throw ParseError("duplicate key '" + key + "'", line_no);
      raw_rules.back().keys[key] = {line_no, unquote(value)};
    }
  }

  RuleSet rs;
  std::set<std::string> names;
  for (auto& raw : raw_rules) {
    auto get = [&](const std::string& key) -> std::optional<std::pair<int, std::string>> {
      auto it = raw.keys.find(key);
      if (it == raw.keys.end()) return std::nullopt;
      return it->second;
    };

    Rule rule;
    auto name = get("name");
    if (!name) throw ParseError("rule missing 'name'", raw.first_line);
    rule.name = name->second;
    if (rule.name.empty()) throw ParseError("rule has empty name", name->first);
    if (!names.insert(rule.name).second)
      throw ParseError("duplicate rule name '" + rule.name + "'", name->first);

    auto label = get("label");
    if (!label) throw ParseError("rule '" + rule.name + "' missing 'label'", raw.first_line);
    rule.label = label->second;

    if (auto ex = get("example")) rule.example = ex->second;

    auto type = get("type");
    if (!type) throw ParseError("rule '" + rule.name + "' missing 'type'", raw.first_line);
    if (type->second == "dependency")
      rule.kind = RuleKind::dependency_pattern;
    else if (type->second == "token")
      rule.kind = RuleKind::token_pattern;
    else
      throw ParseError("rule '" + rule.name + "': type must be token or dependency",
                       type->first);

    if (auto prio = get("priority")) {
      try {
        rule.priority = std::stoi(prio->second);
      } catch (const std::exception&) {
        throw ParseError("rule '" + rule.name + "': priority must be an integer", prio->first);
      }
    }

    if (auto produces = get("produces")) {
      auto kind = parse_fragment_kind(produces->second);
      if (!kind)
        throw ParseError("rule '" + rule.name + "': unknown produces '" + produces->second + "'",
                         produces->first);
      rule.produces = *kind;
    }

    if (auto value = get("value")) {
      if (value->second == "true")
        rule.bool_value = true;
      else if (value->second == "false")
        rule.bool_value = false;
      else
        throw ParseError("rule '" + rule.name + "': value must be true or false", value->first);
    }
    if (rule.produces == FragmentKind::boolean_value && !rule.bool_value)
      throw ParseError("rule '" + rule.name + "': boolean_value rules need a value key",
                       raw.first_line);

    if (!raw.keys.count("pattern") || raw.pattern_lines.empty())
      throw ParseError("rule '" + rule.name + "' missing 'pattern' block", raw.first_line);

    if (rule.kind == RuleKind::dependency_pattern) {
      // Re-join physical continuation lines: a logical line starts with
      // "trigger" or "name:"; anything else continues the previous line with
      // its indentation stripped, so regexes may wrap.
      std::vector<std::pair<int, std::string>> logical;
      for (const auto& [ln, text] : raw.pattern_lines) {
        std::string t = trim(text);
        if (t.empty()) continue;
        bool starts_logical = t.rfind("trigger", 0) == 0;
        if (!starts_logical) {
          std::size_t colon = t.find(':');
          std::size_t eq = t.find('=');
          starts_logical = colon != std::string::npos && (eq == std::string::npos || colon < eq);
        }
        if (starts_logical || logical.empty())
          logical.emplace_back(ln, t);
        else
          logical.back().second += t;
      }
      rule.dep_pattern = parse_dep_pattern(logical, rule.name);
      std::set<std::string> capture_names;
      for (const auto& cap : rule.dep_pattern.captures)
        if (!capture_names.insert(cap.name).second)
          throw ParseError("rule '" + rule.name + "': duplicate capture name '" + cap.name + "'");
    } else {
      std::string joined;
      for (const auto& [ln, text] : raw.pattern_lines) joined += trim(text) + " ";
      rule.token_pattern =
          parse_token_pattern(joined, rule.name, raw.keys.at("pattern").first);
      std::set<std::string> capture_names;
      for (const auto& item : rule.token_pattern.items)
        if (item.capture_name && !capture_names.insert(*item.capture_name).second)
          throw ParseError("rule '" + rule.name + "': duplicate capture name '" +
                           *item.capture_name + "'");
    }

    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

namespace {

std::string constraint_text(const TokenConstraint& tc) {
  std::string out = "[";
  bool first = true;
  auto add = [&](const std::string& field, const std::string& src) {
    if (src.empty()) return;
    if (!first) out += " & ";
    first = false;
    std::string escaped;
    for (char c : src) {
      if (c == '/') escaped += "\\/";
      else escaped.push_back(c);
    }
    out += field + "=/" + escaped + "/";
  };
  add("word", tc.word_src);
  add("pos", tc.pos_src);
  add("ner", tc.ner_src);
  out += "]";
  return out;
}

}  // namespace

std::string serialize_rules(const RuleSet& rules) {
  std::string out;
  for (const auto& r : rules.rules) {
    out += "- name: " + r.name + "\n";
    out += "  label: " + r.label + "\n";
    if (!r.example.empty()) out += "  example: \"" + r.example + "\"\n";
    out += std::string("  type: \"") +
           (r.kind == RuleKind::dependency_pattern ? "dependency" : "token") + "\"\n";
    if (r.priority != 1) out += "  priority: " + std::to_string(r.priority) + "\n";
    if (r.produces != FragmentKind::identifier)
      out += "  produces: " + fragment_kind_name(r.produces) + "\n";
    if (r.bool_value) out += std::string("  value: ") + (*r.bool_value ? "true" : "false") + "\n";
    out += "  pattern: |\n";
    if (r.kind == RuleKind::dependency_pattern) {
      out += "    trigger = " + constraint_text(r.dep_pattern.trigger) + "\n";
      for (const auto& cap : r.dep_pattern.captures) {
        out += "    " + cap.name + ": " + target_constraint_name(cap.constraint) + " =";
        for (const auto& rel : cap.path) out += " " + rel;
        out += "\n";
      }
    } else {
      std::string line;
      for (const auto& item : r.token_pattern.items) {
        if (!line.empty()) line += " ";
        if (item.capture_name) line += "(?<" + *item.capture_name + "> ";
        for (std::size_t k = 0; k < item.elems.size(); ++k) {
          if (k) line += " ";
          line += constraint_text(item.elems[k].constraint);
          if (item.elems[k].quant) line += item.elems[k].quant;
        }
        if (item.capture_name) line += ")";
      }
      out += "    " + line + "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace agex
