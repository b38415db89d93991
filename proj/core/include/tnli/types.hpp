#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tnli {

enum class PosClass {
  profession,
  location,
  transitive_verb,
  intransitive_verb,
  adverb,
  adjective,
  preposition,
  relativizer,
  connective,
};

enum class Partition { ind, ood };

// Inflectional feature of a surface form. Nouns use singular/plural, verbs
// past/passive_participle, all other classes a single base form.
enum class Feature { base, singular, plural, past, passive_participle };

enum class Label { entailment, non_entailment };

enum class Heuristic { lexical_overlap, subsequence, constituent };

enum class Split { train, dev, test };

std::string_view to_string(PosClass c);
std::string_view to_string(Partition p);
std::string_view to_string(Feature f);
std::string_view to_string(Label l);
std::string_view to_string(Heuristic h);
std::string_view to_string(Split s);

std::optional<PosClass> parse_pos_class(std::string_view s);
std::optional<Partition> parse_partition(std::string_view s);
std::optional<Feature> parse_feature(std::string_view s);
std::optional<Label> parse_label(std::string_view s);
std::optional<Heuristic> parse_heuristic(std::string_view s);
std::optional<Split> parse_split(std::string_view s);

bool is_noun(PosClass c);
bool is_verb(PosClass c);
// Professions and locations; the classes the hallucination metric counts.
bool is_entity_class(PosClass c);

// Whether `f` is a legal inflection for words of class `c`.
bool feature_allowed(PosClass c, Feature f);

}  // namespace tnli
