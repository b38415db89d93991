#include "tnli/registry.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "json.hpp"
#include "text_util.hpp"
#include "tnli/rng.hpp"
#include "tnli/tokenize.hpp"

namespace tnli {

struct Registry::State {
  std::vector<Template> templates;
  std::map<std::string, std::size_t, std::less<>> by_id;
  std::map<Heuristic, SubcaseIndex> by_heuristic;
  std::optional<std::size_t> expected_count;
  TemplateMatcher matcher;
};

// ------------------------------------------------------------- validation

namespace {

bool is_slot_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) != 0 || c == '_';
  });
}

std::set<std::string> slots_in(const Pattern& p) {
  std::set<std::string> out;
  for (const auto& e : p.elements) {
    if (const auto* ref = std::get_if<SlotRef>(&e)) out.insert(ref->slot);
  }
  return out;
}

// Literal tokens with every slot replaced by a placeholder that cannot
// collide with a word.
Tokens literal_view(const Pattern& p) {
  Tokens out;
  for (const auto& e : p.elements) {
    if (const auto* lit = std::get_if<std::string>(&e)) {
      out.push_back(*lit);
    } else {
      out.push_back("{" + std::get<SlotRef>(e).slot + "}");
    }
  }
  return out;
}

}  // namespace

std::vector<Issue> validate_template(const Template& tmpl, const Lexicon& lexicon) {
  std::vector<Issue> issues;
  auto fail = [&](std::string rule, std::string detail) {
    issues.push_back({tmpl.id, std::move(rule), std::move(detail)});
  };

  for (std::size_t i = 0; i < tmpl.slots.size(); ++i) {
    const auto& spec = tmpl.slots[i];
    if (i > 0 && tmpl.slots[i - 1].name >= spec.name) {
      fail("slot-declaration", "slots must be unique and sorted by name (" + spec.name + ")");
    }
    if (is_noun(spec.pos_class) != (spec.number == Feature::singular || spec.number == Feature::plural)) {
      fail("slot-number", "slot " + spec.name + ": nouns declare singular/plural, other classes nothing");
    }
    for (Partition p : {Partition::ind, Partition::ood}) {
      if (lexicon.members(spec.pos_class, p).empty()) {
        fail("slot-class", "slot " + spec.name + ": lexicon has no " +
                               std::string(to_string(spec.pos_class)) + " entries in the " +
                               std::string(to_string(p)) + " partition");
      }
    }
  }

  const std::pair<const char*, const Pattern*> patterns[] = {
      {"premise", &tmpl.premise}, {"hypothesis", &tmpl.hypothesis}, {"explanation", &tmpl.explanation}};
  for (const auto& [name, pattern] : patterns) {
    const auto& elements = pattern->elements;
    const auto* last = elements.empty() ? nullptr : std::get_if<std::string>(&elements.back());
    if (last == nullptr || *last != ".") {
      fail("terminal-period", std::string(name) + " must end with the token '.'");
    }
    for (const auto& e : elements) {
      if (const auto* lit = std::get_if<std::string>(&e)) {
        if (!detail::is_clean_token(*lit)) {
          fail("literal", std::string(name) + ": literal '" + *lit + "' must be lowercase, no whitespace");
        }
        continue;
      }
      const auto& ref = std::get<SlotRef>(e);
      const SlotSpec* spec = tmpl.slot(ref.slot);
      if (spec == nullptr) {
        fail("undeclared-slot", std::string(name) + " references undeclared slot " + ref.slot);
        continue;
      }
      if (!feature_allowed(spec->pos_class, ref.feature) ||
          (is_noun(spec->pos_class) && ref.feature != spec->number)) {
        fail("feature", std::string(name) + ": {" + ref.slot + ":" +
                            std::string(to_string(ref.feature)) + "} does not fit " +
                            std::string(to_string(spec->pos_class)) +
                            (is_noun(spec->pos_class) ? " declared " + std::string(to_string(spec->number)) : ""));
      }
    }
  }

  std::set<std::string> observed = slots_in(tmpl.premise);
  observed.merge(slots_in(tmpl.hypothesis));
  const auto explained = slots_in(tmpl.explanation);
  for (const auto& s : explained) {
    if (!observed.count(s) && tmpl.slot(s) != nullptr) {
      fail("no-new-content", "explanation slot " + s + " appears in neither premise nor hypothesis");
    }
  }
  for (const auto& spec : tmpl.slots) {
    if (!observed.count(spec.name) && !explained.count(spec.name)) {
      fail("unobservable-slot", "slot " + spec.name + " is never rendered in premise or hypothesis");
    }
  }

  const bool has_phrase = contains_indicator(literal_view(tmpl.explanation));
  if (has_phrase != (tmpl.label == Label::non_entailment)) {
    fail("indicator-phrase", tmpl.label == Label::non_entailment
                                 ? "violates the indicator-phrase rule: non_entailment explanation lacks 'we do not know'"
                                 : "violates the indicator-phrase rule: entailment explanation contains 'we do not know'");
  }
  return issues;
}

// ----------------------------------------------------------------- Registry

Registry Registry::from_templates(std::vector<Template> templates, const Lexicon& lexicon,
                                  std::optional<std::size_t> expected_count,
                                  RegistryOptions options) {
  std::vector<Issue> issues;
  auto state = std::make_shared<State>();
  for (std::size_t i = 0; i < templates.size(); ++i) {
    auto& t = templates[i];
    std::sort(t.slots.begin(), t.slots.end(),
              [](const SlotSpec& a, const SlotSpec& b) { return a.name < b.name; });
    if (!state->by_id.emplace(t.id, i).second) {
      issues.push_back({t.id, "duplicate-id", "template id declared more than once"});
    }
    auto more = validate_template(t, lexicon);
    issues.insert(issues.end(), more.begin(), more.end());
  }
  if (expected_count && *expected_count != templates.size()) {
    issues.push_back({"registry", "template-count",
                      "expected " + std::to_string(*expected_count) + " templates, found " +
                          std::to_string(templates.size())});
  }
  // Pairwise checks assume individually valid templates.
  if (issues.empty() && options.check_ambiguity) {
    issues = find_ambiguities(templates, lexicon);
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  for (const auto& t : templates) state->by_heuristic[t.heuristic][t.subcase].push_back(t.id);
  state->expected_count = expected_count;
  state->templates = std::move(templates);
  state->matcher = TemplateMatcher(state->templates);

  Registry r;
  r.state_ = std::move(state);
  return r;
}

std::span<const Template> Registry::templates() const {
  if (!state_) return {};
  return state_->templates;
}

const Template* Registry::find(std::string_view id) const {
  if (!state_) return nullptr;
  auto it = state_->by_id.find(id);
  return it == state_->by_id.end() ? nullptr : &state_->templates[it->second];
}

const Template& Registry::at(std::string_view id) const {
  if (const auto* t = find(id)) return *t;
  throw Error("unknown template id '" + std::string(id) + "'");
}

const std::map<Heuristic, Registry::SubcaseIndex>& Registry::by_heuristic() const {
  static const std::map<Heuristic, SubcaseIndex> empty;
  return state_ ? state_->by_heuristic : empty;
}

std::optional<std::size_t> Registry::expected_count() const {
  return state_ ? state_->expected_count : std::nullopt;
}

bool Registry::has_both_labels() const {
  bool e = false, n = false;
  for (const auto& t : templates()) (t.label == Label::entailment ? e : n) = true;
  return e && n;
}

const TemplateMatcher& Registry::matcher() const {
  static const TemplateMatcher empty;
  return state_ ? state_->matcher : empty;
}

std::optional<Match> Registry::parse(std::string_view premise, std::string_view hypothesis,
                                     const Lexicon& lexicon) const {
  const Tokens p = tokenize(premise);
  const Tokens h = tokenize(hypothesis);
  return matcher().match(p, h, lexicon);
}

std::optional<Match> parse(std::string_view premise, std::string_view hypothesis,
                           const Registry& registry, const Lexicon& lexicon) {
  return registry.parse(premise, hypothesis, lexicon);
}

// ------------------------------------------------------------ file format

namespace {

Pattern parse_pattern(std::string_view text, const std::vector<SlotSpec>& slots,
                      const std::string& src, std::size_t line_no) {
  Pattern p;
  for (auto token : detail::split_ws(text)) {
    if (token.front() != '{') {
      if (token.find_first_of("{}") != std::string_view::npos) {
        throw ParseError(src, line_no, "stray brace in '" + std::string(token) + "'");
      }
      p.elements.emplace_back(std::string(token));
      continue;
    }
    if (token.back() != '}' || token.size() < 3) {
      throw ParseError(src, line_no, "malformed slot reference '" + std::string(token) + "'");
    }
    const auto inner = token.substr(1, token.size() - 2);
    const auto colon = inner.find(':');
    SlotRef ref;
    ref.slot = std::string(inner.substr(0, colon));
    if (!is_slot_name(ref.slot)) {
      throw ParseError(src, line_no, "bad slot name in '" + std::string(token) + "'");
    }
    auto spec = std::find_if(slots.begin(), slots.end(),
                             [&](const SlotSpec& s) { return s.name == ref.slot; });
    if (colon != std::string_view::npos) {
      const auto fname = inner.substr(colon + 1);
      auto f = parse_feature(fname);
      if (!f) throw ParseError(src, line_no, "unknown feature '" + std::string(fname) + "'");
      ref.feature = *f;
    } else if (spec != slots.end()) {
      // Default form: declared number for nouns, past for verbs, base otherwise.
      ref.feature = is_noun(spec->pos_class) ? spec->number
                    : is_verb(spec->pos_class) ? Feature::past
                                               : Feature::base;
    }
    p.elements.emplace_back(std::move(ref));
  }
  return p;
}

std::vector<SlotSpec> parse_slots(std::string_view text, const std::string& src,
                                  std::size_t line_no) {
  std::vector<SlotSpec> slots;
  for (auto decl : detail::split_ws(text)) {
    const auto eq = decl.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(src, line_no, "slot declaration '" + std::string(decl) + "' lacks '='");
    }
    SlotSpec spec;
    spec.name = std::string(decl.substr(0, eq));
    if (!is_slot_name(spec.name)) {
      throw ParseError(src, line_no, "bad slot name '" + spec.name + "'");
    }
    auto rest = decl.substr(eq + 1);
    const auto colon = rest.find(':');
    const auto cname = rest.substr(0, colon);
    auto c = parse_pos_class(cname);
    if (!c) throw ParseError(src, line_no, "unknown pos_class '" + std::string(cname) + "'");
    spec.pos_class = *c;
    if (colon != std::string_view::npos) {
      const auto nname = rest.substr(colon + 1);
      auto n = parse_feature(nname);
      if (!n || (*n != Feature::singular && *n != Feature::plural)) {
        throw ParseError(src, line_no, "slot number must be singular or plural, got '" +
                                           std::string(nname) + "'");
      }
      spec.number = *n;
    }
    if (std::any_of(slots.begin(), slots.end(),
                    [&](const SlotSpec& s) { return s.name == spec.name; })) {
      throw ParseError(src, line_no, "slot " + spec.name + " declared twice");
    }
    slots.push_back(std::move(spec));
  }
  return slots;
}

}  // namespace

Registry parse_registry(std::string_view text, const Lexicon& lexicon, std::string_view source,
                        RegistryOptions options) {
  const std::string src(source);
  std::vector<Template> templates;
  std::optional<std::size_t> expected;

  struct Pending {
    Template tmpl;
    std::size_t line = 0;
    std::optional<std::string> premise, hypothesis, explanation;
    std::size_t premise_line = 0, hypothesis_line = 0, explanation_line = 0;
    bool has_slots = false;
  };
  std::optional<Pending> current;

  auto finish = [&]() {
    if (!current) return;
    auto& c = *current;
    if (!c.has_slots) throw ParseError(src, c.line, "template " + c.tmpl.id + " lacks 'slots:'");
    if (!c.premise) throw ParseError(src, c.line, "template " + c.tmpl.id + " lacks 'premise:'");
    if (!c.hypothesis) throw ParseError(src, c.line, "template " + c.tmpl.id + " lacks 'hypothesis:'");
    if (!c.explanation) throw ParseError(src, c.line, "template " + c.tmpl.id + " lacks 'explanation:'");
    c.tmpl.premise = parse_pattern(*c.premise, c.tmpl.slots, src, c.premise_line);
    c.tmpl.hypothesis = parse_pattern(*c.hypothesis, c.tmpl.slots, src, c.hypothesis_line);
    c.tmpl.explanation = parse_pattern(*c.explanation, c.tmpl.slots, src, c.explanation_line);
    templates.push_back(std::move(c.tmpl));
    current.reset();
  };

  const auto all = detail::lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    const std::size_t line_no = n + 1;
    const std::string_view raw = all[n];
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const bool indented = detail::is_blank(raw.front());

    if (!indented) {
      const auto words = detail::split_ws(line);
      if (words.front() == "expect_templates") {
        if (!templates.empty() || current) {
          throw ParseError(src, line_no, "expect_templates must precede the first template");
        }
        std::size_t value = 0;
        if (words.size() != 2 || words[1].find_first_not_of("0123456789") != std::string_view::npos) {
          throw ParseError(src, line_no, "expect_templates takes one nonnegative integer");
        }
        value = std::stoul(std::string(words[1]));
        expected = value;
        continue;
      }
      if (words.front() != "template") {
        throw ParseError(src, line_no, "expected 'template' or 'expect_templates'");
      }
      finish();
      const auto fields = detail::split(line.substr(std::string_view("template").size()), '|');
      if (fields.size() != 4) {
        throw ParseError(src, line_no, "template header needs 4 '|'-separated fields");
      }
      Pending p;
      p.line = line_no;
      p.tmpl.id = std::string(detail::trim(fields[0]));
      if (p.tmpl.id.empty() || p.tmpl.id.find_first_of(" \t:") != std::string::npos) {
        throw ParseError(src, line_no, "template id must be nonempty without spaces or ':'");
      }
      const auto h = detail::trim(fields[1]);
      const auto label = detail::trim(fields[3]);
      auto heuristic = parse_heuristic(h);
      if (!heuristic) throw ParseError(src, line_no, "unknown heuristic '" + std::string(h) + "'");
      p.tmpl.heuristic = *heuristic;
      p.tmpl.subcase = std::string(detail::trim(fields[2]));
      if (p.tmpl.subcase.empty()) throw ParseError(src, line_no, "empty subcase");
      auto l = parse_label(label);
      if (!l) throw ParseError(src, line_no, "unknown label '" + std::string(label) + "'");
      p.tmpl.label = *l;
      current = std::move(p);
      continue;
    }

    if (!current) throw ParseError(src, line_no, "indented line outside a template");
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(src, line_no, "expected 'key: value'");
    const auto key = line.substr(0, colon);
    const auto value = detail::trim(line.substr(colon + 1));
    auto& c = *current;
    auto once = [&](std::optional<std::string>& slot, std::size_t& at) {
      if (slot) throw ParseError(src, line_no, "duplicate '" + std::string(key) + ":'");
      slot = std::string(value);
      at = line_no;
    };
    if (key == "slots") {
      if (c.has_slots) throw ParseError(src, line_no, "duplicate 'slots:'");
      c.tmpl.slots = parse_slots(value, src, line_no);
      c.has_slots = true;
    } else if (key == "premise") {
      once(c.premise, c.premise_line);
    } else if (key == "hypothesis") {
      once(c.hypothesis, c.hypothesis_line);
    } else if (key == "explanation") {
      once(c.explanation, c.explanation_line);
    } else {
      throw ParseError(src, line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  finish();
  if (templates.empty()) throw ParseError(src, 0, "no templates");
  return Registry::from_templates(std::move(templates), lexicon, expected, options);
}

Registry load_registry(const std::filesystem::path& path, const Lexicon& lexicon,
                       RegistryOptions options) {
  return parse_registry(detail::read_file(path), lexicon, path.string(), options);
}

// ------------------------------------------------------------------ folds

std::vector<std::string> FoldSplit::training_ids(std::size_t held_out) const {
  std::vector<std::string> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f == held_out) continue;
    out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  return out;
}

std::optional<std::size_t> FoldSplit::fold_of(std::string_view id) const {
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (std::find(folds[f].begin(), folds[f].end(), id) != folds[f].end()) return f;
  }
  return std::nullopt;
}

FoldSplit split_folds(const Registry& registry, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& t : registry.templates()) ids.push_back(t.id);
  Rng rng(stream_seed(seed, "folds"));
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[rng.below(i)]);
  }
  FoldSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < ids.size(); ++i) split.folds[i % kFoldCount].push_back(ids[i]);
  return split;
}

// ------------------------------------------------------------------ stats

RegistryStats registry_stats(const Registry& registry, const Lexicon& lexicon,
                             std::size_t samples_per_template, Partition partition,
                             std::uint64_t seed) {
  if (samples_per_template == 0) throw Error("sample count must be positive");
  RegistryStats stats;
  stats.templates = registry.size();
  double premise = 0, hypothesis = 0, explanation = 0;
  for (const auto& t : registry.templates()) {
    ++stats.per_heuristic[std::string(to_string(t.heuristic))];
    ++stats.per_subcase[std::string(to_string(t.heuristic)) + "/" + t.subcase];
    ++stats.per_label[std::string(to_string(t.label))];

    BindingSpace space(t, lexicon, partition);
    if (space.size() == 0) continue;
    LazyShuffle draws(space.size(), stream_seed(seed, "stats/" + t.id));
    for (std::size_t i = 0; i < samples_per_template; ++i) {
      const Binding b = space.at(draws.next());
      premise += static_cast<double>(content_length(render_tokens(t.premise, t, b, lexicon)));
      hypothesis += static_cast<double>(content_length(render_tokens(t.hypothesis, t, b, lexicon)));
      explanation += static_cast<double>(content_length(render_tokens(t.explanation, t, b, lexicon)));
      ++stats.samples;
    }
  }
  if (stats.samples > 0) {
    const auto n = static_cast<double>(stats.samples);
    stats.mean_length = {premise / n, hypothesis / n, explanation / n};
  }
  return stats;
}

std::string stats_to_json(const RegistryStats& stats) {
  nlohmann::json j;
  j["templates"] = stats.templates;
  j["per_heuristic"] = stats.per_heuristic;
  j["per_subcase"] = stats.per_subcase;
  j["per_label"] = stats.per_label;
  j["samples"] = stats.samples;
  j["mean_length"] = {{"premise", stats.mean_length.premise},
                      {"hypothesis", stats.mean_length.hypothesis},
                      {"explanation", stats.mean_length.explanation}};
  return j.dump(2) + "\n";
}

}  // namespace tnli
