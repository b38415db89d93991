#include "tnli/template.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "tnli/error.hpp"

namespace tnli {

const SlotSpec* Template::slot(std::string_view name) const {
  auto it = std::lower_bound(slots.begin(), slots.end(), name,
                             [](const SlotSpec& s, std::string_view n) { return s.name < n; });
  if (it != slots.end() && it->name == name) return &*it;
  return nullptr;
}

void check_binding(const Template& tmpl, const Binding& binding, const Lexicon& lexicon) {
  std::vector<Issue> issues;
  for (const auto& spec : tmpl.slots) {
    auto it = binding.assignments.find(spec.name);
    if (it == binding.assignments.end()) {
      issues.push_back({tmpl.id, "binding", "slot " + spec.name + " is unbound"});
      continue;
    }
    if (it->second >= lexicon.size()) {
      issues.push_back({tmpl.id, "binding", "slot " + spec.name + " bound to unknown lexeme"});
      continue;
    }
    const auto& entry = lexicon.entry(it->second);
    if (entry.pos_class != spec.pos_class) {
      issues.push_back({tmpl.id, "binding",
                        "slot " + spec.name + " expects " + std::string(to_string(spec.pos_class)) +
                            ", got " + std::string(to_string(entry.pos_class)) + " '" +
                            entry.lemma + "'"});
    }
  }
  for (const auto& [name, id] : binding.assignments) {
    if (tmpl.slot(name) == nullptr) {
      issues.push_back({tmpl.id, "binding", "binding names undeclared slot " + name});
    }
  }
  if (issues.empty()) {
    std::set<LexemeId> used;
    for (const auto& [name, id] : binding.assignments) {
      if (!used.insert(id).second) {
        issues.push_back({tmpl.id, "binding",
                          "lexeme '" + lexicon.entry(id).lemma + "' bound to more than one slot"});
      }
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

Tokens render_tokens(const Pattern& pattern, const Template& tmpl, const Binding& binding,
                     const Lexicon& lexicon) {
  Tokens out;
  out.reserve(pattern.elements.size());
  for (const auto& element : pattern.elements) {
    if (const auto* literal = std::get_if<std::string>(&element)) {
      out.push_back(*literal);
      continue;
    }
    const auto& ref = std::get<SlotRef>(element);
    auto it = binding.assignments.find(ref.slot);
    if (it == binding.assignments.end()) {
      throw ValidationError({{tmpl.id, "binding", "slot " + ref.slot + " is unbound"}});
    }
    out.push_back(inflect(lexicon.entry(it->second), ref.feature));
  }
  return out;
}

Rendering render(const Template& tmpl, const Binding& binding, const Lexicon& lexicon) {
  check_binding(tmpl, binding, lexicon);
  return Rendering{
      join_tokens(render_tokens(tmpl.premise, tmpl, binding, lexicon)),
      join_tokens(render_tokens(tmpl.hypothesis, tmpl, binding, lexicon)),
      join_tokens(render_tokens(tmpl.explanation, tmpl, binding, lexicon)),
  };
}

std::map<std::string, std::string> binding_lemmas(const Binding& binding, const Lexicon& lexicon) {
  std::map<std::string, std::string> out;
  for (const auto& [slot, id] : binding.assignments) out.emplace(slot, lexicon.entry(id).lemma);
  return out;
}

Binding resolve_binding(const Template& tmpl, const std::map<std::string, std::string>& lemmas,
                        const Lexicon& lexicon) {
  Binding b;
  std::vector<Issue> issues;
  for (const auto& [slot, lemma] : lemmas) {
    const SlotSpec* spec = tmpl.slot(slot);
    if (spec == nullptr) {
      issues.push_back({tmpl.id, "binding", "binding names undeclared slot " + slot});
      continue;
    }
    auto id = lexicon.find(lemma, spec->pos_class);
    if (!id) {
      issues.push_back({tmpl.id, "binding",
                        "no " + std::string(to_string(spec->pos_class)) + " '" + lemma + "'"});
      continue;
    }
    b.assignments.emplace(slot, *id);
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  check_binding(tmpl, b, lexicon);
  return b;
}

// ------------------------------------------------------------ BindingSpace

BindingSpace::BindingSpace(const Template& tmpl, const Lexicon& lexicon, Partition partition) {
  pools_.reserve(tmpl.slots.size());
  std::map<PosClass, std::size_t> class_count;
  for (const auto& spec : tmpl.slots) {
    const auto members = lexicon.members(spec.pos_class, partition);
    if (members.empty()) {
      throw ValidationError({{tmpl.id, "empty-class",
                              "no " + std::string(to_string(spec.pos_class)) + " entries in the " +
                                  std::string(to_string(partition)) + " partition"}});
    }
    pools_.emplace_back(members.begin(), members.end());
  }
  for (std::size_t i = 0; i < tmpl.slots.size(); ++i) {
    const auto& spec = tmpl.slots[i];
    const std::size_t before = class_count[spec.pos_class]++;
    const std::size_t available = pools_[i].size();
    const std::uint64_t radix = available > before ? available - before : 0;
    digits_.push_back({spec.name, &pools_[i], before, radix});
    if (radix != 0 && size_ > std::numeric_limits<std::uint64_t>::max() / radix) {
      throw Error("binding space of template " + tmpl.id + " overflows 64 bits");
    }
    size_ *= radix;
  }
}

Binding BindingSpace::at(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("binding index out of range");
  // Mixed-radix decode, least significant digit last.
  std::vector<std::uint64_t> choice(digits_.size());
  for (std::size_t i = digits_.size(); i-- > 0;) {
    choice[i] = index % digits_[i].radix;
    index /= digits_[i].radix;
  }
  Binding b;
  std::vector<LexemeId> used;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    const auto& d = digits_[i];
    std::uint64_t skip = choice[i];
    for (LexemeId id : *d.candidates) {
      if (std::find(used.begin(), used.end(), id) != used.end()) continue;
      if (skip-- == 0) {
        b.assignments.emplace(d.slot, id);
        used.push_back(id);
        break;
      }
    }
  }
  return b;
}

std::string pattern_to_string(const Pattern& pattern) {
  std::string out;
  for (const auto& element : pattern.elements) {
    if (!out.empty()) out += ' ';
    if (const auto* literal = std::get_if<std::string>(&element)) {
      out += *literal;
    } else {
      const auto& ref = std::get<SlotRef>(element);
      out += '{' + ref.slot + ':' + std::string(to_string(ref.feature)) + '}';
    }
  }
  return out;
}

}  // namespace tnli
