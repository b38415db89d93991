#include "tnli/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "metrics_join.hpp"
#include "text_util.hpp"

namespace tnli {

// -------------------------------------------------------------- predictions

std::string format_prediction(const Prediction& p) {
  nlohmann::ordered_json j;
  j["example_id"] = p.example_id;
  if (p.generated_explanation) j["generated_explanation"] = *p.generated_explanation;
  if (p.predicted_label) j["predicted_label"] = to_string(*p.predicted_label);
  return j.dump();
}

std::string format_predictions(const std::vector<Prediction>& predictions) {
  std::string out;
  for (const auto& p : predictions) {
    out += format_prediction(p);
    out += '\n';
  }
  return out;
}

std::vector<Prediction> parse_predictions(std::string_view text, std::string_view source) {
  const std::string src(source);
  std::vector<Prediction> out;
  const auto all = detail::lines(text);
  for (std::size_t n = 0; n < all.size(); ++n) {
    const std::size_t line_no = n + 1;
    if (detail::trim(all[n]).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(all[n]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(src, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(src, line_no, "record must be a JSON object");
    Prediction p;
    auto id = j.find("example_id");
    if (id == j.end() || !id->is_string()) {
      throw ParseError(src, line_no, "missing string field \"example_id\"");
    }
    p.example_id = id->get<std::string>();
    if (auto e = j.find("generated_explanation"); e != j.end() && !e->is_null()) {
      if (!e->is_string()) throw ParseError(src, line_no, "\"generated_explanation\" must be a string");
      p.generated_explanation = e->get<std::string>();
    }
    if (auto l = j.find("predicted_label"); l != j.end() && !l->is_null()) {
      auto label = l->is_string() ? parse_label(l->get<std::string>()) : std::nullopt;
      if (!label) throw ParseError(src, line_no, "bad \"predicted_label\"");
      p.predicted_label = *label;
    }
    if (!p.generated_explanation && !p.predicted_label) {
      throw ParseError(src, line_no, "prediction carries neither explanation nor label");
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_predictions(const std::vector<Prediction>& predictions, const std::filesystem::path& path) {
  detail::write_file(path, format_predictions(predictions));
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  return parse_predictions(detail::read_file(path), path.string());
}

// --------------------------------------------------------------------- BLEU

namespace {

using NgramCounts = std::unordered_map<std::string, std::uint64_t>;

NgramCounts ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) {
      if (j) key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

std::uint64_t clipped_matches(const NgramCounts& cand, const NgramCounts& ref) {
  std::uint64_t m = 0;
  for (const auto& [gram, c] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) m += std::min(c, it->second);
  }
  return m;
}

}  // namespace

void BleuStats::add(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (reference.empty()) throw Error("BLEU reference must be nonempty");
  candidate_length += candidate.size();
  reference_length += reference.size();
  for (std::size_t n = 1; n <= kBleuOrder; ++n) {
    if (candidate.size() < n) continue;
    totals[n - 1] += candidate.size() - n + 1;
    matches[n - 1] += clipped_matches(ngrams(candidate, n), ngrams(reference, n));
  }
}

void BleuStats::merge(const BleuStats& o) {
  for (std::size_t i = 0; i < kBleuOrder; ++i) {
    matches[i] += o.matches[i];
    totals[i] += o.totals[i];
  }
  candidate_length += o.candidate_length;
  reference_length += o.reference_length;
}

double BleuStats::score() const {
  double log_sum = 0;
  for (std::size_t i = 0; i < kBleuOrder; ++i) {
    if (matches[i] == 0 || totals[i] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[i]) / static_cast<double>(totals[i]));
  }
  const double c = static_cast<double>(candidate_length);
  const double r = static_cast<double>(reference_length);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * bp * std::exp(log_sum / static_cast<double>(kBleuOrder));
}

double bleu(std::span<const Tokens> candidates, std::span<const Tokens> references) {
  if (candidates.size() != references.size()) {
    throw Error("BLEU needs one reference per candidate (" + std::to_string(candidates.size()) +
                " vs " + std::to_string(references.size()) + ")");
  }
  BleuStats stats;
  for (std::size_t i = 0; i < candidates.size(); ++i) stats.add(candidates[i], references[i]);
  return stats.score();
}

double sentence_bleu_smoothed(std::span<const std::string> candidate,
                              std::span<const std::string> reference) {
  if (reference.empty()) throw Error("BLEU reference must be nonempty");
  if (candidate.empty()) return 0.0;
  double log_sum = 0;
  for (std::size_t n = 1; n <= kBleuOrder; ++n) {
    const std::uint64_t total = candidate.size() >= n ? candidate.size() - n + 1 : 0;
    const std::uint64_t match = clipped_matches(ngrams(candidate, n), ngrams(reference, n));
    log_sum += std::log((static_cast<double>(match) + 1.0) / (static_cast<double>(total) + 1.0));
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * bp * std::exp(log_sum / static_cast<double>(kBleuOrder));
}

// ------------------------------------------------------------ hallucination

std::vector<std::string> hallucinated_entities(std::span<const std::string> explanation,
                                               std::span<const std::string> premise,
                                               std::span<const std::string> hypothesis,
                                               const Lexicon& lexicon) {
  std::set<std::string_view> input_tokens;
  std::set<LexemeId> input_lexemes;
  for (auto part : {premise, hypothesis}) {
    for (const auto& t : part) {
      input_tokens.insert(t);
      for (LexemeId id : lexicon.entity_lexemes(t)) input_lexemes.insert(id);
    }
  }
  std::vector<std::string> out;
  for (const auto& t : explanation) {
    if (input_tokens.count(t)) continue;
    const auto ids = lexicon.entity_lexemes(t);
    if (ids.empty()) continue;
    const bool grounded = std::any_of(ids.begin(), ids.end(),
                                      [&](LexemeId id) { return input_lexemes.count(id) > 0; });
    if (!grounded) out.push_back(t);
  }
  return out;
}

std::optional<double> HallucinationResult::rate() const {
  if (scored == 0) return std::nullopt;
  return static_cast<double>(flagged) / static_cast<double>(scored);
}

HallucinationResult hallucination(std::span<const Prediction> predictions,
                                  std::span<const Example> gold, const Lexicon& lexicon) {
  const auto joined = detail::join_strict(predictions, gold);
  HallucinationResult r;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    if (!p.generated_explanation) continue;
    ++r.scored;
    const Example& g = *joined[i];
    if (!hallucinated_entities(tokenize(*p.generated_explanation), tokenize(g.premise),
                               tokenize(g.hypothesis), lexicon)
             .empty()) {
      ++r.flagged;
      r.flagged_ids.push_back(p.example_id);
    }
  }
  return r;
}

// ---------------------------------------------------------------- indicator

std::optional<double> IndicatorCounts::precision() const {
  if (generated == 0) return std::nullopt;
  return static_cast<double>(both) / static_cast<double>(generated);
}

std::optional<double> IndicatorCounts::recall() const {
  if (gold == 0) return std::nullopt;
  return static_cast<double>(both) / static_cast<double>(gold);
}

void IndicatorCounts::merge(const IndicatorCounts& o) {
  generated += o.generated;
  gold += o.gold;
  both += o.both;
  scored += o.scored;
}

IndicatorCounts indicator_stats(std::span<const Prediction> predictions, std::span<const Example> gold) {
  const auto joined = detail::join_strict(predictions, gold);
  IndicatorCounts c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!predictions[i].generated_explanation) continue;
    const bool gen = contains_indicator(std::string_view(*predictions[i].generated_explanation));
    const bool ref = contains_indicator(std::string_view(joined[i]->explanation));
    ++c.scored;
    c.generated += gen;
    c.gold += ref;
    c.both += gen && ref;
  }
  return c;
}

// ----------------------------------------------------------------- accuracy

std::optional<double> AccuracyCounts::accuracy() const {
  if (scored == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(scored);
}

std::optional<double> AccuracyCounts::majority_rate() const {
  const std::size_t n = gold_entailment + gold_non_entailment;
  if (n == 0) return std::nullopt;
  return static_cast<double>(std::max(gold_entailment, gold_non_entailment)) / static_cast<double>(n);
}

void AccuracyCounts::merge(const AccuracyCounts& o) {
  correct += o.correct;
  scored += o.scored;
  gold_entailment += o.gold_entailment;
  gold_non_entailment += o.gold_non_entailment;
}

AccuracyCounts accuracy(std::span<const Prediction> predictions, std::span<const Example> gold) {
  const auto joined = detail::join_strict(predictions, gold);
  AccuracyCounts c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    if (!p.predicted_label) throw Error("prediction " + p.example_id + " has no predicted_label");
    ++c.scored;
    c.correct += *p.predicted_label == joined[i]->label;
  }
  for (const auto& g : gold) (g.label == Label::entailment ? c.gold_entailment : c.gold_non_entailment) += 1;
  return c;
}

}  // namespace tnli
