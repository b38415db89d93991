#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "metrics_join.hpp"
#include "tnli/metrics.hpp"

namespace tnli {

std::optional<double> GroupMetrics::bleu_score() const {
  if (explanations == 0) return std::nullopt;
  return bleu.score();
}

std::optional<double> GroupMetrics::hallucination_rate() const {
  if (explanations == 0) return std::nullopt;
  return static_cast<double>(hallucinated) / static_cast<double>(explanations);
}

void GroupMetrics::merge(const GroupMetrics& o) {
  gold_examples += o.gold_examples;
  predictions += o.predictions;
  bleu.merge(o.bleu);
  explanations += o.explanations;
  hallucinated += o.hallucinated;
  indicator.merge(o.indicator);
  accuracy.merge(o.accuracy);
}

EvalReport evaluate(std::span<const Prediction> predictions, std::span<const Example> gold,
                    const Lexicon& lexicon, const EvalOptions& options) {
  const auto index = detail::index_gold(gold);
  EvalReport report;

  for (const auto& g : gold) {
    auto& m = report.per_quadrant[std::string(to_string(g.quadrant()))];
    ++m.gold_examples;
    (g.label == Label::entailment ? m.accuracy.gold_entailment : m.accuracy.gold_non_entailment) += 1;
  }

  std::unordered_map<std::string_view, bool> seen;
  seen.reserve(predictions.size());
  for (const auto& p : predictions) {
    if (!seen.emplace(p.example_id, true).second) {
      throw Error("duplicate prediction for example " + p.example_id);
    }
    auto it = index.find(p.example_id);
    if (it == index.end()) {
      report.unmatched_ids.push_back(p.example_id);
      continue;
    }
    const Example& g = *it->second;
    auto& m = report.per_quadrant[std::string(to_string(g.quadrant()))];
    ++m.predictions;
    if (p.generated_explanation) {
      const Tokens cand = tokenize(*p.generated_explanation);
      const Tokens ref = tokenize(g.explanation);
      ++m.explanations;
      m.bleu.add(cand, ref);
      if (!hallucinated_entities(cand, tokenize(g.premise), tokenize(g.hypothesis), lexicon).empty()) {
        ++m.hallucinated;
      }
      const bool gen = contains_indicator(cand);
      const bool gold_has = contains_indicator(ref);
      ++m.indicator.scored;
      m.indicator.generated += gen;
      m.indicator.gold += gold_has;
      m.indicator.both += gen && gold_has;
    }
    if (p.predicted_label) {
      ++m.accuracy.scored;
      m.accuracy.correct += *p.predicted_label == g.label;
    }
  }
  if (options.strict && !report.unmatched_ids.empty()) throw JoinError(report.unmatched_ids);

  for (const auto& [name, m] : report.per_quadrant) {
    report.overall.merge(m);
    report.coverage_gaps += m.gold_examples - m.predictions;
  }
  return report;
}

EvalReport evaluate_files(const std::filesystem::path& predictions_path,
                          const std::vector<std::filesystem::path>& gold_paths,
                          const Lexicon& lexicon, const EvalOptions& options) {
  const auto predictions = read_predictions(predictions_path);
  std::vector<Example> gold;
  for (const auto& path : gold_paths) {
    auto part = read_examples(path);
    std::move(part.begin(), part.end(), std::back_inserter(gold));
  }
  return evaluate(predictions, gold, lexicon, options);
}

namespace {

nlohmann::ordered_json group_json(const GroupMetrics& m) {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, std::optional<double> v) {
    if (v) j[key] = *v;
  };
  put("accuracy", m.accuracy.accuracy());
  put("majority_rate", m.accuracy.majority_rate());
  put("bleu", m.bleu_score());
  put("hallucination_rate", m.hallucination_rate());
  put("indicator_precision", m.indicator.precision());
  put("indicator_recall", m.indicator.recall());
  j["counts"] = {
      {"gold_examples", m.gold_examples},
      {"predictions", m.predictions},
      {"labels_scored", m.accuracy.scored},
      {"labels_correct", m.accuracy.correct},
      {"gold_entailment", m.accuracy.gold_entailment},
      {"gold_non_entailment", m.accuracy.gold_non_entailment},
      {"explanations", m.explanations},
      {"hallucinated", m.hallucinated},
      {"indicator_generated", m.indicator.generated},
      {"indicator_gold", m.indicator.gold},
      {"indicator_both", m.indicator.both},
  };
  return j;
}

std::string cell(std::optional<double> v, const char* fmt) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["overall"] = group_json(report.overall);
  j["per_quadrant"] = nlohmann::ordered_json::object();
  for (const auto& [name, m] : report.per_quadrant) j["per_quadrant"][name] = group_json(m);
  j["unmatched_ids"] = report.unmatched_ids;
  j["coverage_gaps"] = report.coverage_gaps;
  return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %7s %7s %8s %8s %8s %8s %8s\n", "group", "n", "acc",
                "majority", "bleu", "halluc", "ind_p", "ind_r");
  out += line;
  auto row = [&](const std::string& name, const GroupMetrics& m) {
    std::snprintf(line, sizeof line, "%-22s %7zu %7s %8s %8s %8s %8s %8s\n", name.c_str(),
                  m.predictions, cell(m.accuracy.accuracy(), "%.4f").c_str(),
                  cell(m.accuracy.majority_rate(), "%.4f").c_str(),
                  cell(m.bleu_score(), "%.2f").c_str(), cell(m.hallucination_rate(), "%.4f").c_str(),
                  cell(m.indicator.precision(), "%.4f").c_str(),
                  cell(m.indicator.recall(), "%.4f").c_str());
    out += line;
  };
  for (const auto& [name, m] : report.per_quadrant) row(name, m);
  row("overall", report.overall);
  if (!report.unmatched_ids.empty()) {
    out += "unmatched prediction ids: " + std::to_string(report.unmatched_ids.size()) + "\n";
  }
  if (report.coverage_gaps != 0) {
    out += "gold examples without predictions: " + std::to_string(report.coverage_gaps) + "\n";
  }
  return out;
}

}  // namespace tnli
