#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tnli/lexicon.hpp"
#include "tnli/template.hpp"

namespace tnli {

struct Match {
  std::string template_id;
  Binding binding;

  friend bool operator==(const Match&, const Match&) = default;
};

// Recovers (template, binding) pairs from rendered premise/hypothesis tokens.
// Holds indices into the template list it was built from; the list must
// outlive the matcher and stay unchanged.
class TemplateMatcher {
 public:
  TemplateMatcher() = default;
  explicit TemplateMatcher(std::span<const Template> templates);

  // Every (template, binding) whose premise and hypothesis render exactly to
  // the given tokens, sorted by template id then binding.
  std::vector<Match> all_matches(std::span<const std::string> premise,
                                 std::span<const std::string> hypothesis,
                                 const Lexicon& lexicon) const;

  // The unique reading, or the lexicographically smallest template id when
  // all readings agree on label and explanation. Throws AmbiguityError
  // otherwise. Empty when nothing matches.
  std::optional<Match> match(std::span<const std::string> premise,
                             std::span<const std::string> hypothesis,
                             const Lexicon& lexicon) const;

 private:
  std::span<const Template> templates_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_length_;
};

}  // namespace tnli
