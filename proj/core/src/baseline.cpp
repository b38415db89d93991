#include "tnli/baseline.hpp"

#include <algorithm>

#include "json.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace tnli {

std::string_view to_string(Scope s) {
  return s == Scope::restricted ? "restricted" : "closed-book";
}

std::string_view to_string(Fallback f) {
  return f == Fallback::abstain_non_entailment ? "abstain" : "majority";
}

std::optional<Scope> parse_scope(std::string_view s) {
  if (s == "restricted") return Scope::restricted;
  if (s == "closed-book" || s == "closed_book") return Scope::closed_book;
  return std::nullopt;
}

std::optional<Fallback> parse_fallback(std::string_view s) {
  if (s == "abstain" || s == "abstain_non_entailment") return Fallback::abstain_non_entailment;
  if (s == "majority" || s == "majority_entailment") return Fallback::majority_entailment;
  return std::nullopt;
}

std::string_view fallback_explanation(Fallback f) {
  return f == Fallback::abstain_non_entailment ? kAbstainExplanation : kMajorityExplanation;
}

void validate_config(const BaselineConfig& config, const Registry& registry) {
  std::vector<Issue> issues;
  for (const auto& id : config.training_template_ids) {
    if (registry.find(id) == nullptr) {
      issues.push_back({id, "training-template", "not a registry template"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

Explanation explain(std::string_view premise, std::string_view hypothesis,
                    const BaselineConfig& config, const Registry& registry, const Lexicon& lexicon) {
  const Tokens p = tokenize(premise);
  const Tokens h = tokenize(hypothesis);
  auto matches = registry.matcher().all_matches(p, h, lexicon);
  if (config.scope == Scope::restricted) {
    std::erase_if(matches, [&](const Match& m) {
      return config.training_template_ids.count(m.template_id) == 0;
    });
  }
  Explanation fallback{std::string(fallback_explanation(config.fallback)), false, std::nullopt};
  if (matches.empty()) return fallback;

  // Matches are sorted, so the first one carries the smallest template id.
  const Template& first = registry.at(matches.front().template_id);
  std::string text = join_tokens(render_tokens(first.explanation, first, matches.front().binding, lexicon));
  for (std::size_t i = 1; i < matches.size(); ++i) {
    const Template& t = registry.at(matches[i].template_id);
    if (t.label != first.label ||
        join_tokens(render_tokens(t.explanation, t, matches[i].binding, lexicon)) != text) {
      return fallback;
    }
  }
  return {std::move(text), true, first.id};
}

Label predict(std::string_view explanation) {
  return contains_indicator(explanation) ? Label::non_entailment : Label::entailment;
}

BaselineRun run_baseline(std::span<const Example> examples, const BaselineConfig& config,
                         const Registry& registry, const Lexicon& lexicon, unsigned threads) {
  validate_config(config, registry);
  std::vector<Explanation> results(examples.size());
  detail::parallel_for(examples.size(), threads, [&](std::size_t i) {
    results[i] = explain(examples[i].premise, examples[i].hypothesis, config, registry, lexicon);
  });
  BaselineRun run;
  run.predictions.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Label label = predict(results[i].text);
    run.predictions.push_back({examples[i].id, std::move(results[i].text), label});
    if (!results[i].matched) run.fallback_ids.push_back(examples[i].id);
  }
  return run;
}

BaselineRun run_baseline_file(const std::filesystem::path& examples_path,
                              const BaselineConfig& config, const Registry& registry,
                              const Lexicon& lexicon, const std::filesystem::path& out_path,
                              const std::optional<std::filesystem::path>& fallback_log,
                              unsigned threads) {
  const auto examples = read_examples(examples_path);
  auto run = run_baseline(examples, config, registry, lexicon, threads);
  write_predictions(run.predictions, out_path);
  if (config.log_fallbacks && fallback_log) {
    detail::write_file(*fallback_log, format_fallback_log(run.fallback_ids));
  }
  return run;
}

std::string format_fallback_log(const std::vector<std::string>& example_ids) {
  std::string out;
  for (const auto& id : example_ids) {
    out += nlohmann::json{{"example_id", id}}.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::string> parse_fallback_log(std::string_view text, std::string_view source) {
  std::vector<std::string> ids;
  const auto all = detail::lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    if (detail::trim(all[n]).empty()) continue;
    try {
      ids.push_back(nlohmann::json::parse(all[n]).at("example_id").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string(source), n + 1, e.what());
    }
  }
  return ids;
}

}  // namespace tnli
