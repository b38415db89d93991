#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnli/lexicon.hpp"
#include "tnli/registry.hpp"
#include "tnli/types.hpp"

namespace tnli {

enum class Quadrant {
  indvocab_indtemplate,
  indvocab_oodtemplate,
  oodvocab_indtemplate,
  oodvocab_oodtemplate,
};

inline constexpr std::array<Quadrant, 4> kQuadrants{
    Quadrant::indvocab_indtemplate, Quadrant::indvocab_oodtemplate,
    Quadrant::oodvocab_indtemplate, Quadrant::oodvocab_oodtemplate};

std::string_view to_string(Quadrant q);
std::optional<Quadrant> parse_quadrant(std::string_view s);
Quadrant make_quadrant(Partition vocab, Partition templates);
Partition vocab_of(Quadrant q);
Partition template_condition_of(Quadrant q);
// "test_indvocab_indtemplate.jsonl" etc.
std::string quadrant_file_name(Quadrant q);

struct Example {
  std::string id;
  std::string premise;
  std::string hypothesis;
  std::string explanation;
  Label label = Label::entailment;
  std::string template_id;
  std::map<std::string, std::string> binding;  // slot -> lemma
  Partition vocab_condition = Partition::ind;
  Partition template_condition = Partition::ind;
  Split split = Split::train;

  Quadrant quadrant() const { return make_quadrant(vocab_condition, template_condition); }

  friend bool operator==(const Example&, const Example&) = default;
};

struct ExperimentPlan {
  FoldSplit fold_split;
  std::size_t held_out_fold = 0;
  std::size_t k = 1;
  std::uint64_t master_seed = 0;

  std::vector<std::string> training_template_ids() const {
    return fold_split.training_ids(held_out_fold);
  }
  const std::vector<std::string>& ood_template_ids() const {
    return fold_split.folds.at(held_out_fold);
  }
};

// Throws Error for k == 0 or fold >= kFoldCount.
ExperimentPlan make_plan(const Registry& registry, std::uint64_t master_seed, std::size_t fold,
                         std::size_t k);

// Dev examples per training template: max(1, round(0.2k)).
std::size_t dev_count(std::size_t k);

inline constexpr std::size_t kTestPerTemplate = 300;

struct GenerationOptions {
  // 0 picks the hardware concurrency. Output does not depend on it.
  unsigned threads = 0;
  std::size_t test_per_template = kTestPerTemplate;
};

struct GenerationWarning {
  // "replacement_fallback": bindings ran out and sampling continued with
  // replacement. "train_overlap": an IND/IND test set could not exclude the
  // train/dev bindings of its template.
  std::string kind;
  std::string template_id;
  std::string scope;  // "train_dev" or a quadrant name
  std::uint64_t available = 0;
  std::uint64_t requested = 0;

  friend bool operator==(const GenerationWarning&, const GenerationWarning&) = default;
};

struct GenerationReport {
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::size_t fold = 0;
  std::size_t training_templates = 0;
  std::size_t ood_templates = 0;
  std::map<std::string, std::size_t> counts;  // "train", "dev", quadrant names
  std::vector<GenerationWarning> warnings;

  bool has_warning(std::string_view kind, std::string_view scope) const;
};

std::string report_to_json(const GenerationReport& report);

struct TrainDev {
  std::vector<Example> train;
  std::vector<Example> dev;
  std::vector<GenerationWarning> warnings;
};

struct TestQuadrants {
  std::map<Quadrant, std::vector<Example>> quadrants;
  std::vector<GenerationWarning> warnings;
};

// Per training template: draws [0, k) of the template's train/dev stream are
// train examples, draws [max(16, k), max(16, k) + dev_count(k)) are dev.
// The gap keeps train nested across k and dev fixed for k <= 16.
TrainDev generate_train_dev(const ExperimentPlan& plan, const Registry& registry,
                            const Lexicon& lexicon, const GenerationOptions& options = {});

// Test streams depend on the master seed and template only, never on k.
TestQuadrants generate_test_quadrants(const ExperimentPlan& plan, const Registry& registry,
                                      const Lexicon& lexicon,
                                      const GenerationOptions& options = {});

struct Corpus {
  std::vector<Example> train;
  std::vector<Example> dev;
  std::map<Quadrant, std::vector<Example>> test;
  GenerationReport report;
};

Corpus generate_corpus(const ExperimentPlan& plan, const Registry& registry, const Lexicon& lexicon,
                       const GenerationOptions& options = {});

// Writes train.jsonl, dev.jsonl, the four quadrant files and report.json.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// JSON-lines serialization, one object per line.
std::string format_example(const Example& example);
std::string format_examples(const std::vector<Example>& examples);
std::vector<Example> parse_examples(std::string_view text, std::string_view source = "<memory>");
void write_examples(const std::vector<Example>& examples, const std::filesystem::path& path);
std::vector<Example> read_examples(const std::filesystem::path& path);

}  // namespace tnli
