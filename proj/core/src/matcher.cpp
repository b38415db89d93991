#include "tnli/matcher.hpp"

#include <algorithm>

#include "tnli/error.hpp"

namespace tnli {
namespace {

// Narrows each slot's candidate lexemes against one pattern/token alignment.
bool constrain(const Pattern& pattern, std::span<const std::string> tokens, const Template& tmpl,
               const Lexicon& lexicon, std::map<std::string, std::vector<LexemeId>>& candidates) {
  for (std::size_t i = 0; i < pattern.elements.size(); ++i) {
    const auto& element = pattern.elements[i];
    if (const auto* literal = std::get_if<std::string>(&element)) {
      if (*literal != tokens[i]) return false;
      continue;
    }
    const auto& ref = std::get<SlotRef>(element);
    const SlotSpec* spec = tmpl.slot(ref.slot);
    std::vector<LexemeId> here;
    for (const auto& form : lexicon.lookup(tokens[i])) {
      if (form.feature == ref.feature && lexicon.entry(form.lexeme).pos_class == spec->pos_class) {
        here.push_back(form.lexeme);
      }
    }
    std::sort(here.begin(), here.end());
    auto [it, fresh] = candidates.try_emplace(ref.slot, here);
    if (!fresh) {
      std::vector<LexemeId> both;
      std::set_intersection(it->second.begin(), it->second.end(), here.begin(), here.end(),
                            std::back_inserter(both));
      it->second = std::move(both);
    }
    if (it->second.empty()) return false;
  }
  return true;
}

void expand(const std::vector<std::pair<std::string, std::vector<LexemeId>>>& slots,
            std::size_t depth, Binding& current, std::vector<Binding>& out) {
  if (depth == slots.size()) {
    out.push_back(current);
    return;
  }
  const auto& [name, options] = slots[depth];
  for (LexemeId id : options) {
    const bool taken = std::any_of(current.assignments.begin(), current.assignments.end(),
                                   [&](const auto& kv) { return kv.second == id; });
    if (taken) continue;
    current.assignments[name] = id;
    expand(slots, depth + 1, current, out);
    current.assignments.erase(name);
  }
}

}  // namespace

TemplateMatcher::TemplateMatcher(std::span<const Template> templates) : templates_(templates) {
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const auto key = std::make_pair(templates[i].premise.elements.size(),
                                    templates[i].hypothesis.elements.size());
    by_length_[key].push_back(i);
  }
}

std::vector<Match> TemplateMatcher::all_matches(std::span<const std::string> premise,
                                                std::span<const std::string> hypothesis,
                                                const Lexicon& lexicon) const {
  std::vector<Match> out;
  auto bucket = by_length_.find({premise.size(), hypothesis.size()});
  if (bucket == by_length_.end()) return out;

  for (std::size_t index : bucket->second) {
    const Template& tmpl = templates_[index];
    std::map<std::string, std::vector<LexemeId>> candidates;
    if (!constrain(tmpl.premise, premise, tmpl, lexicon, candidates)) continue;
    if (!constrain(tmpl.hypothesis, hypothesis, tmpl, lexicon, candidates)) continue;
    if (candidates.size() != tmpl.slots.size()) continue;  // slot not observable

    std::vector<std::pair<std::string, std::vector<LexemeId>>> slots(candidates.begin(),
                                                                     candidates.end());
    std::vector<Binding> bindings;
    Binding current;
    expand(slots, 0, current, bindings);
    for (auto& b : bindings) out.push_back({tmpl.id, std::move(b)});
  }
  std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
    if (a.template_id != b.template_id) return a.template_id < b.template_id;
    return a.binding < b.binding;
  });
  return out;
}

std::optional<Match> TemplateMatcher::match(std::span<const std::string> premise,
                                            std::span<const std::string> hypothesis,
                                            const Lexicon& lexicon) const {
  auto matches = all_matches(premise, hypothesis, lexicon);
  if (matches.empty()) return std::nullopt;
  if (matches.size() == 1) return std::move(matches.front());

  auto find_template = [&](const std::string& id) -> const Template& {
    for (const auto& t : templates_) {
      if (t.id == id) return t;
    }
    throw Error("template " + id + " vanished from matcher");
  };
  const Template& first = find_template(matches.front().template_id);
  const Tokens reference = render_tokens(first.explanation, first, matches.front().binding, lexicon);
  bool agree = true;
  for (std::size_t i = 1; i < matches.size() && agree; ++i) {
    const Template& other = find_template(matches[i].template_id);
    agree = other.label == first.label &&
            render_tokens(other.explanation, other, matches[i].binding, lexicon) == reference;
  }
  if (!agree) {
    std::vector<std::string> ids;
    for (const auto& m : matches) {
      if (ids.empty() || ids.back() != m.template_id) ids.push_back(m.template_id);
    }
    throw AmbiguityError(std::move(ids));
  }
  return std::move(matches.front());
}

}  // namespace tnli
