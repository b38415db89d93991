#include "tnli/types.hpp"

#include <array>
#include <sstream>
#include <utility>

#include "tnli/error.hpp"

namespace tnli {
namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<PosClass, 9> kPosNames{{
    {PosClass::profession, "profession"},
    {PosClass::location, "location"},
    {PosClass::transitive_verb, "transitive_verb"},
    {PosClass::intransitive_verb, "intransitive_verb"},
    {PosClass::adverb, "adverb"},
    {PosClass::adjective, "adjective"},
    {PosClass::preposition, "preposition"},
    {PosClass::relativizer, "relativizer"},
    {PosClass::connective, "connective"},
}};

constexpr NameTable<Partition, 2> kPartitionNames{{
    {Partition::ind, "ind"},
    {Partition::ood, "ood"},
}};

constexpr NameTable<Feature, 5> kFeatureNames{{
    {Feature::base, "base"},
    {Feature::singular, "singular"},
    {Feature::plural, "plural"},
    {Feature::past, "past"},
    {Feature::passive_participle, "passive_participle"},
}};

constexpr NameTable<Label, 2> kLabelNames{{
    {Label::entailment, "entailment"},
    {Label::non_entailment, "non_entailment"},
}};

constexpr NameTable<Heuristic, 3> kHeuristicNames{{
    {Heuristic::lexical_overlap, "lexical_overlap"},
    {Heuristic::subsequence, "subsequence"},
    {Heuristic::constituent, "constituent"},
}};

constexpr NameTable<Split, 3> kSplitNames{{
    {Split::train, "train"},
    {Split::dev, "dev"},
    {Split::test, "test"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view s) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(PosClass c) { return name_of(kPosNames, c); }
std::string_view to_string(Partition p) { return name_of(kPartitionNames, p); }
std::string_view to_string(Feature f) { return name_of(kFeatureNames, f); }
std::string_view to_string(Label l) { return name_of(kLabelNames, l); }
std::string_view to_string(Heuristic h) { return name_of(kHeuristicNames, h); }
std::string_view to_string(Split s) { return name_of(kSplitNames, s); }

std::optional<PosClass> parse_pos_class(std::string_view s) { return value_of(kPosNames, s); }
std::optional<Partition> parse_partition(std::string_view s) { return value_of(kPartitionNames, s); }
std::optional<Feature> parse_feature(std::string_view s) { return value_of(kFeatureNames, s); }
std::optional<Label> parse_label(std::string_view s) { return value_of(kLabelNames, s); }
std::optional<Heuristic> parse_heuristic(std::string_view s) { return value_of(kHeuristicNames, s); }
std::optional<Split> parse_split(std::string_view s) { return value_of(kSplitNames, s); }

bool is_noun(PosClass c) { return c == PosClass::profession || c == PosClass::location; }

bool is_verb(PosClass c) {
  return c == PosClass::transitive_verb || c == PosClass::intransitive_verb;
}

bool is_entity_class(PosClass c) { return is_noun(c); }

bool feature_allowed(PosClass c, Feature f) {
  switch (c) {
    case PosClass::profession:
    case PosClass::location:
      return f == Feature::singular || f == Feature::plural;
    case PosClass::transitive_verb:
      return f == Feature::past || f == Feature::passive_participle;
    case PosClass::intransitive_verb:
      return f == Feature::past;
    default:
      return f == Feature::base;
  }
}

// ---------------------------------------------------------------- errors

namespace {

std::string located(const std::string& source, std::size_t line, const std::string& message) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ':' << line;
  os << ": " << message;
  return os.str();
}

std::string describe(const std::vector<Issue>& issues) {
  std::ostringstream os;
  os << issues.size() << " validation error" << (issues.size() == 1 ? "" : "s");
  for (const auto& issue : issues) {
    os << "\n  [" << issue.rule << "] " << issue.subject << ": " << issue.detail;
  }
  return os.str();
}

std::string joined(std::string prefix, const std::vector<std::string>& ids) {
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < ids.size() && i < kShown; ++i) {
    prefix += (i == 0 ? " " : ", ");
    prefix += ids[i];
  }
  if (ids.size() > kShown) prefix += ", ... (" + std::to_string(ids.size()) + " total)";
  return prefix;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, const std::string& message)
    : Error(located(source, line, message)), source_(std::move(source)), line_(line) {}

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(describe(issues)), issues_(std::move(issues)) {}

bool ValidationError::has_rule(const std::string& rule) const {
  for (const auto& issue : issues_) {
    if (issue.rule == rule) return true;
  }
  return false;
}

AmbiguityError::AmbiguityError(std::vector<std::string> template_ids)
    : Error(joined("ambiguous parse; matching templates:", template_ids)),
      ids_(std::move(template_ids)) {}

JoinError::JoinError(std::vector<std::string> unmatched_ids)
    : Error(joined("predictions without a gold example:", unmatched_ids)),
      ids_(std::move(unmatched_ids)) {}

}  // namespace tnli
