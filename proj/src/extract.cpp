#include "agex/extract.hpp"

#include <algorithm>
#include <set>

#include "agex/error.hpp"
#include "agex/text_util.hpp"

namespace agex {

namespace {

struct SentenceView {
  const SentenceAnnotation& anno;
  std::vector<std::string> lower_tokens;

  explicit SentenceView(const SentenceAnnotation& a) : anno(a) {
    for (const auto& tok : a.tokens) lower_tokens.push_back(to_lower(tok));
  }

  // Text slice covering tokens [first, last], inclusive.
  std::string span_text(std::size_t first, std::size_t last) const {
    std::size_t b = anno.token_begins[first];
    std::size_t e = anno.token_end(last);
    return anno.text.substr(b - anno.char_begin, e - b);
  }
};

Fragment base_fragment(const SentenceView& sv, std::size_t first, std::size_t last) {
  Fragment f;
  f.turn_index = sv.anno.turn_index;
  f.char_begin = sv.anno.token_begins[first];
  f.char_end = sv.anno.token_end(last);
  f.text = sv.span_text(first, last);
  return f;
}

bool constraint_matches(const TokenConstraint& tc, const SentenceAnnotation& a, std::size_t i) {
  return tc.matches(a.tokens[i], a.pos_tags[i], a.ner_tags[i]);
}

// --- token pattern matching -------------------------------------------------

struct TokenMatch {
  std::size_t begin = 0, end = 0;                             // token range
  std::map<std::string, std::pair<std::size_t, std::size_t>> captures;  // name -> range
};

struct FlatElem {
  const TokenPatternElem* elem;
  const std::string* capture;  // nullptr outside groups
};

// Greedy match with backtracking over quantified elements.
bool match_from(const std::vector<FlatElem>& elems, std::size_t ei, const SentenceAnnotation& a,
                std::size_t ti, TokenMatch& out) {
  if (ei == elems.size()) {
    out.end = ti;
    return true;
  }
  const FlatElem& fe = elems[ei];
  auto ok = [&](std::size_t k) {
    return k < a.size() && constraint_matches(fe.elem->constraint, a, k);
  };
  auto record = [&](std::size_t from, std::size_t to) {
    if (!fe.capture || to <= from) return;
    auto it = out.captures.find(*fe.capture);
    if (it == out.captures.end())
      out.captures.emplace(*fe.capture, std::make_pair(from, to));
    else
      it->second = {std::min(it->second.first, from), std::max(it->second.second, to)};
  };

  char q = fe.elem->quant;
  std::size_t max_take = 0;
  while (ok(ti + max_take)) ++max_take;
  std::size_t min_take = (q == '+' || q == 0) ? 1 : 0;
  std::size_t cap_take = (q == '?' || q == 0) ? std::min<std::size_t>(1, max_take) : max_take;
  if (cap_take < min_take) return false;
  for (std::size_t take = cap_take + 1; take-- > min_take;) {
    TokenMatch saved = out;
    record(ti, ti + take);
    if (match_from(elems, ei + 1, a, ti + take, out)) return true;
    out = saved;
    if (take == 0) break;
  }
  return false;
}

void run_token_rule(const Rule& rule, const SentenceView& sv, std::vector<Fragment>& out) {
  std::vector<FlatElem> elems;
  for (const auto& item : rule.token_pattern.items)
    for (const auto& e : item.elems)
      elems.push_back({&e, item.capture_name ? &*item.capture_name : nullptr});

  const SentenceAnnotation& a = sv.anno;
  std::size_t start = 0;
  while (start < a.size()) {
    TokenMatch m;
    m.begin = start;
    if (match_from(elems, 0, a, start, m) && m.end > m.begin) {
      Fragment f = base_fragment(sv, m.begin, m.end - 1);
      f.label = rule.label;
      f.kind = rule.produces;
      f.bool_value = rule.bool_value;
      if (rule.produces == FragmentKind::boolean_value) f.category = "boolean";
      for (const auto& [name, range] : m.captures)
        f.fields[name] = sv.span_text(range.first, range.second - 1);
      out.push_back(std::move(f));
      start = m.end;  // non-overlapping matches per rule
    } else {
      ++start;
    }
  }
}

// --- dependency pattern matching ---------------------------------------------

std::vector<int> follow_path(const SentenceAnnotation& a, int from,
                             const std::vector<std::string>& path) {
  std::vector<int> frontier{from};
  for (const auto& rel : path) {
    std::vector<int> next;
    for (int node : frontier)
      for (const auto& e : a.dep_edges)
        if (e.governor == node && e.relation == rel) next.push_back(e.dependent);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return frontier;
}

void run_dep_rule(const Rule& rule, const SentenceView& sv, std::vector<Fragment>& out) {
  const SentenceAnnotation& a = sv.anno;
  const DepPattern& pat = rule.dep_pattern;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (!constraint_matches(pat.trigger, a, t)) continue;

    // Resolve every capture path; all must land somewhere.
    std::vector<std::vector<int>> targets;
    bool dead = false;
    for (const auto& cap : pat.captures) {
      std::vector<int> reached;
      for (int node : follow_path(a, static_cast<int>(t), cap.path))
        if (target_constraint_ok(cap.constraint, a.pos_tags[static_cast<std::size_t>(node)]))
          reached.push_back(node);
      if (reached.empty()) {
        dead = true;
        break;
      }
      targets.push_back(std::move(reached));
    }
    if (dead) continue;

    // One fragment per capture assignment combination.
    std::vector<std::size_t> idx(targets.size(), 0);
    for (;;) {
      std::size_t lo = t, hi = t;
      Fragment f;
      f.label = rule.label;
      f.kind = rule.produces;
      f.bool_value = rule.bool_value;
      for (std::size_t c = 0; c < targets.size(); ++c) {
        int head = targets[c][idx[c]];
        auto sub = subtree_tokens(a, head);
        std::size_t sb = static_cast<std::size_t>(sub.front());
        std::size_t se = static_cast<std::size_t>(sub.back());
        lo = std::min(lo, sb);
        hi = std::max(hi, se);
        f.fields[pat.captures[c].name] = sv.span_text(sb, se);
      }
      Fragment base = base_fragment(sv, lo, hi);
      f.turn_index = base.turn_index;
      f.char_begin = base.char_begin;
      f.char_end = base.char_end;
      f.text = base.text;
      out.push_back(std::move(f));

      std::size_t c = 0;
      for (; c < idx.size(); ++c) {
        if (++idx[c] < targets[c].size()) break;
        idx[c] = 0;
      }
      if (c == idx.size()) break;  // also covers capture-less rules: one fragment
    }
  }
}

// --- knowledge-base value extraction ------------------------------------------

void run_kb_pass(const SentenceView& sv, const KnowledgeBase& kb, std::vector<Fragment>& out) {
  const SentenceAnnotation& a = sv.anno;
  std::vector<bool> claimed(a.size(), false);

  // Numbers first: compound (number + category form), measured (number + unit
  // form), bare quantitative otherwise.
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto parsed = parse_number_token(a.tokens[i]);
    if (!parsed) continue;
    if (auto cat = kb.match_category(sv.lower_tokens, i + 1)) {
      Fragment f = base_fragment(sv, i, i + cat->word_count);
      f.label = "CompoundValue";
      f.kind = FragmentKind::compound_value;
      f.numeric_value = parsed->value;
      f.numeric_integer = parsed->is_integer;
      f.category = cat->name;
      f.fields["category"] = sv.span_text(i + 1, i + cat->word_count);
      out.push_back(std::move(f));
      for (std::size_t k = i; k <= i + cat->word_count; ++k) claimed[k] = true;
      i += cat->word_count;
    } else if (auto unit = kb.match_unit(sv.lower_tokens, i + 1)) {
      Fragment f = base_fragment(sv, i, i + unit->word_count);
      f.label = "MeasuredValue";
      f.kind = FragmentKind::quantitative_value;
      f.numeric_value = parsed->value;
      f.numeric_integer = parsed->is_integer;
      f.unit = unit->name;
      f.category = unit->name;
      out.push_back(std::move(f));
      for (std::size_t k = i; k <= i + unit->word_count; ++k) claimed[k] = true;
      i += unit->word_count;
    } else {
      Fragment f = base_fragment(sv, i, i);
      f.label = "NumericValue";
      f.kind = FragmentKind::quantitative_value;
      f.numeric_value = parsed->value;
      f.numeric_integer = parsed->is_integer;
      out.push_back(std::move(f));
      claimed[i] = true;
    }
  }

  // Standalone categorical surface forms.
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (claimed[i]) continue;
    auto cat = kb.match_category(sv.lower_tokens, i);
    if (!cat) continue;
    bool free = true;
    for (std::size_t k = i; k < i + cat->word_count; ++k) free = free && !claimed[k];
    if (!free) continue;
    Fragment f = base_fragment(sv, i, i + cat->word_count - 1);
    f.label = cat->name;
    f.kind = FragmentKind::categorical_value;
    f.category = cat->name;
    out.push_back(std::move(f));
    for (std::size_t k = i; k < i + cat->word_count; ++k) claimed[k] = true;
    i += cat->word_count - 1;
  }
}

bool span_order(const Fragment& x, const Fragment& y) {
  if (x.turn_index != y.turn_index) return x.turn_index < y.turn_index;
  if (x.char_begin != y.char_begin) return x.char_begin < y.char_begin;
  if (x.char_end != y.char_end) return x.char_end > y.char_end;  // longest first
  return x.label < y.label;
}

std::vector<Fragment> run_sentence(const SentenceAnnotation& anno, const RuleSet& rules,
                                   const KnowledgeBase& kb) {
  SentenceView sv(anno);
  std::vector<Fragment> out;
  std::vector<const Rule*> token_rules, dep_rules;
  for (const auto& r : rules.rules)
    (r.kind == RuleKind::token_pattern ? token_rules : dep_rules).push_back(&r);
  auto by_priority = [](const Rule* x, const Rule* y) { return x->priority < y->priority; };
  std::stable_sort(token_rules.begin(), token_rules.end(), by_priority);
  std::stable_sort(dep_rules.begin(), dep_rules.end(), by_priority);

  for (const Rule* r : token_rules) run_token_rule(*r, sv, out);
  for (const Rule* r : dep_rules) run_dep_rule(*r, sv, out);
  run_kb_pass(sv, kb, out);
  return out;
}

}  // namespace

std::vector<Fragment> extract_from_sentence(const SentenceAnnotation& anno,
                                            const std::string& turn_text, const RuleSet& rules,
                                            const KnowledgeBase& kb) {
  SentenceAnnotation local = anno;
  if (local.token_begins.size() != local.tokens.size()) validate_annotation(local, turn_text);
  return run_sentence(local, rules, kb);
}

std::vector<Fragment> extract_fragments(const std::vector<SentenceAnnotation>& annos,
                                        const RuleSet& rules, const KnowledgeBase& kb) {
  std::vector<Fragment> all;
  for (const auto& anno : annos) {
    if (anno.token_begins.size() != anno.tokens.size())
      throw ValidationError("annotation not validated before extraction");
    auto out = run_sentence(anno, rules, kb);
    all.insert(all.end(), out.begin(), out.end());
  }

  // Leftmost-longest within each label: after span-sorting (begin asc, end
  // desc) the first fragment of an overlap cluster wins.
  std::stable_sort(all.begin(), all.end(), span_order);
  std::vector<Fragment> kept;
  for (auto& f : all) {
    bool drop = false;
    for (const auto& k : kept) {
      if (k.label != f.label || k.turn_index != f.turn_index) continue;
      if (k.char_begin < f.char_end && f.char_begin < k.char_end) {
        drop = true;
        break;
      }
    }
    if (!drop) kept.push_back(std::move(f));
  }
  return kept;
}

}  // namespace agex
