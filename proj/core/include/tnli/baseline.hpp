#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnli/corpus.hpp"
#include "tnli/lexicon.hpp"
#include "tnli/metrics.hpp"
#include "tnli/registry.hpp"

namespace tnli {

enum class Scope {
  restricted,   // match training templates only
  closed_book,  // match the whole registry
};

enum class Fallback {
  abstain_non_entailment,  // "we do not know ."
  majority_entailment,     // "the hypothesis follows ."
};

std::string_view to_string(Scope s);
std::string_view to_string(Fallback f);
std::optional<Scope> parse_scope(std::string_view s);
// Accepts "abstain" / "majority" as well as the full names.
std::optional<Fallback> parse_fallback(std::string_view s);

inline constexpr std::string_view kAbstainExplanation = "we do not know .";
inline constexpr std::string_view kMajorityExplanation = "the hypothesis follows .";

std::string_view fallback_explanation(Fallback f);

struct BaselineConfig {
  std::set<std::string> training_template_ids;
  Scope scope = Scope::restricted;
  Fallback fallback = Fallback::abstain_non_entailment;
  bool log_fallbacks = true;
};

// Throws ValidationError when a training id is not in the registry.
void validate_config(const BaselineConfig& config, const Registry& registry);

struct Explanation {
  std::string text;
  bool matched = false;
  std::optional<std::string> template_id;
};

// Total: inputs that parse to no in-scope template, or to in-scope
// templates that disagree, get the fallback explanation.
Explanation explain(std::string_view premise, std::string_view hypothesis,
                    const BaselineConfig& config, const Registry& registry, const Lexicon& lexicon);

// non_entailment iff the explanation contains "we do not know".
Label predict(std::string_view explanation);

struct BaselineRun {
  std::vector<Prediction> predictions;  // input order
  std::vector<std::string> fallback_ids;
};

BaselineRun run_baseline(std::span<const Example> examples, const BaselineConfig& config,
                         const Registry& registry, const Lexicon& lexicon, unsigned threads = 0);

// Reads examples, writes predictions and, when config.log_fallbacks is set
// and `fallback_log` is given, the JSON-lines fallback log.
BaselineRun run_baseline_file(const std::filesystem::path& examples_path,
                              const BaselineConfig& config, const Registry& registry,
                              const Lexicon& lexicon, const std::filesystem::path& out_path,
                              const std::optional<std::filesystem::path>& fallback_log = std::nullopt,
                              unsigned threads = 0);

std::string format_fallback_log(const std::vector<std::string>& example_ids);
std::vector<std::string> parse_fallback_log(std::string_view text, std::string_view source = "<memory>");

}  // namespace tnli
