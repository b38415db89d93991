#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnli/corpus.hpp"
#include "tnli/lexicon.hpp"
#include "tnli/tokenize.hpp"
#include "tnli/types.hpp"

namespace tnli {

struct Prediction {
  std::string example_id;
  std::optional<std::string> generated_explanation;
  std::optional<Label> predicted_label;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// JSON-lines; a record with neither payload is rejected with its line number.
std::string format_prediction(const Prediction& p);
std::string format_predictions(const std::vector<Prediction>& predictions);
std::vector<Prediction> parse_predictions(std::string_view text, std::string_view source = "<memory>");
void write_predictions(const std::vector<Prediction>& predictions, const std::filesystem::path& path);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

// ------------------------------------------------------------------- BLEU

inline constexpr std::size_t kBleuOrder = 4;

// Pooled corpus-BLEU sufficient statistics. Merging is exact integer
// addition, so sharded accumulation equals sequential accumulation.
struct BleuStats {
  std::array<std::uint64_t, kBleuOrder> matches{};
  std::array<std::uint64_t, kBleuOrder> totals{};
  std::uint64_t candidate_length = 0;
  std::uint64_t reference_length = 0;

  void add(std::span<const std::string> candidate, std::span<const std::string> reference);
  void merge(const BleuStats& other);
  // 0 when any pooled precision is 0 (including an empty denominator).
  double score() const;

  friend bool operator==(const BleuStats&, const BleuStats&) = default;
};

// Corpus BLEU in [0, 100]. Throws Error on length mismatch or an empty
// reference.
double bleu(std::span<const Tokens> candidates, std::span<const Tokens> references);

// Add-one smoothed sentence BLEU. Diagnostics only; reports never use it.
double sentence_bleu_smoothed(std::span<const std::string> candidate,
                              std::span<const std::string> reference);

// ---------------------------------------------------------- hallucination

// Entity tokens of `explanation` whose lexemes (any number) occur in
// neither premise nor hypothesis. Tokens unknown to the lexicon never count.
std::vector<std::string> hallucinated_entities(std::span<const std::string> explanation,
                                               std::span<const std::string> premise,
                                               std::span<const std::string> hypothesis,
                                               const Lexicon& lexicon);

struct HallucinationResult {
  std::vector<std::string> flagged_ids;  // in prediction order
  std::size_t flagged = 0;
  std::size_t scored = 0;  // predictions carrying an explanation

  std::optional<double> rate() const;
};

// Joins by example id; throws JoinError listing unmatched ids.
HallucinationResult hallucination(std::span<const Prediction> predictions,
                                  std::span<const Example> gold, const Lexicon& lexicon);

// -------------------------------------------------------------- indicator

struct IndicatorCounts {
  std::size_t generated = 0;  // generated explanations containing the phrase
  std::size_t gold = 0;       // gold explanations containing the phrase
  std::size_t both = 0;
  std::size_t scored = 0;

  // Absent when the denominator is zero.
  std::optional<double> precision() const;
  std::optional<double> recall() const;
  void merge(const IndicatorCounts& other);

  friend bool operator==(const IndicatorCounts&, const IndicatorCounts&) = default;
};

IndicatorCounts indicator_stats(std::span<const Prediction> predictions, std::span<const Example> gold);

// --------------------------------------------------------------- accuracy

struct AccuracyCounts {
  std::size_t correct = 0;
  std::size_t scored = 0;
  std::size_t gold_entailment = 0;
  std::size_t gold_non_entailment = 0;

  std::optional<double> accuracy() const;
  // Accuracy of always predicting the more frequent gold label.
  std::optional<double> majority_rate() const;
  void merge(const AccuracyCounts& other);

  friend bool operator==(const AccuracyCounts&, const AccuracyCounts&) = default;
};

// Throws Error when a scored prediction lacks a label.
AccuracyCounts accuracy(std::span<const Prediction> predictions, std::span<const Example> gold);

// ------------------------------------------------------------- evaluation

struct GroupMetrics {
  std::size_t gold_examples = 0;
  std::size_t predictions = 0;
  BleuStats bleu;
  std::size_t explanations = 0;
  std::size_t hallucinated = 0;
  IndicatorCounts indicator;
  AccuracyCounts accuracy;

  std::optional<double> bleu_score() const;
  std::optional<double> hallucination_rate() const;
  void merge(const GroupMetrics& other);

  friend bool operator==(const GroupMetrics&, const GroupMetrics&) = default;
};

struct EvalReport {
  std::map<std::string, GroupMetrics> per_quadrant;  // quadrants present in gold
  GroupMetrics overall;
  std::vector<std::string> unmatched_ids;  // predictions without gold
  std::size_t coverage_gaps = 0;           // gold examples without predictions

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct EvalOptions {
  // Throw JoinError on unmatched prediction ids instead of listing them.
  bool strict = false;
};

// Duplicate ids in either input are an Error.
EvalReport evaluate(std::span<const Prediction> predictions, std::span<const Example> gold,
                    const Lexicon& lexicon, const EvalOptions& options = {});
EvalReport evaluate_files(const std::filesystem::path& predictions_path,
                          const std::vector<std::filesystem::path>& gold_paths,
                          const Lexicon& lexicon, const EvalOptions& options = {});

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

}  // namespace tnli
