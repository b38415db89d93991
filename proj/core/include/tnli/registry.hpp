#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnli/error.hpp"
#include "tnli/lexicon.hpp"
#include "tnli/matcher.hpp"
#include "tnli/template.hpp"

namespace tnli {

inline constexpr std::size_t kFoldCount = 5;

struct RegistryOptions {
  // The pairwise ambiguity check is the only superlinear validation step.
  bool check_ambiguity = true;
};

// Validated template inventory. Immutable; copies share state.
class Registry {
 public:
  using SubcaseIndex = std::map<std::string, std::vector<std::string>>;

  static Registry from_templates(std::vector<Template> templates, const Lexicon& lexicon,
                                 std::optional<std::size_t> expected_count = std::nullopt,
                                 RegistryOptions options = {});

  std::span<const Template> templates() const;
  std::size_t size() const { return templates().size(); }
  const Template* find(std::string_view id) const;
  // Throws Error for unknown ids.
  const Template& at(std::string_view id) const;

  // heuristic -> subcase -> template ids (file order).
  const std::map<Heuristic, SubcaseIndex>& by_heuristic() const;

  // The `expect_templates` directive of the source file, if any.
  std::optional<std::size_t> expected_count() const;

  bool covers_all_heuristics() const { return by_heuristic().size() == 3; }
  bool has_both_labels() const;

  // Parses a rendered premise/hypothesis pair (tokenized internally).
  std::optional<Match> parse(std::string_view premise, std::string_view hypothesis,
                             const Lexicon& lexicon) const;
  const TemplateMatcher& matcher() const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

Registry parse_registry(std::string_view text, const Lexicon& lexicon,
                        std::string_view source = "<memory>", RegistryOptions options = {});
Registry load_registry(const std::filesystem::path& path, const Lexicon& lexicon,
                       RegistryOptions options = {});

// Per-template rule checks (slot classes, features, terminal period,
// no-new-content, indicator biconditional). Returns every failure.
std::vector<Issue> validate_template(const Template& tmpl, const Lexicon& lexicon);

// Pairs of templates that can render an identical premise/hypothesis pair
// over one vocabulary partition while disagreeing on label or explanation.
std::vector<Issue> find_ambiguities(std::span<const Template> templates, const Lexicon& lexicon);

// Free-function form of Registry::parse.
std::optional<Match> parse(std::string_view premise, std::string_view hypothesis,
                           const Registry& registry, const Lexicon& lexicon);

struct FoldSplit {
  std::array<std::vector<std::string>, kFoldCount> folds;
  std::uint64_t seed = 0;

  // Ids of every fold except `held_out`, in fold order.
  std::vector<std::string> training_ids(std::size_t held_out) const;
  std::optional<std::size_t> fold_of(std::string_view id) const;

  friend bool operator==(const FoldSplit&, const FoldSplit&) = default;
};

// Seeded shuffle of the template ids followed by round-robin assignment.
FoldSplit split_folds(const Registry& registry, std::uint64_t seed);

struct LengthStats {
  double premise = 0;
  double hypothesis = 0;
  double explanation = 0;
};

struct RegistryStats {
  std::size_t templates = 0;
  std::map<std::string, std::size_t> per_heuristic;
  std::map<std::string, std::size_t> per_subcase;  // "heuristic/subcase"
  std::map<std::string, std::size_t> per_label;
  std::size_t samples = 0;
  // Mean token counts over the rendered sample, terminal period excluded.
  LengthStats mean_length;
};

// Throws Error("sample count must be positive") when samples_per_template
// is zero.
RegistryStats registry_stats(const Registry& registry, const Lexicon& lexicon,
                             std::size_t samples_per_template, Partition partition,
                             std::uint64_t seed);

std::string stats_to_json(const RegistryStats& stats);

}  // namespace tnli
