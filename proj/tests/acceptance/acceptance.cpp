// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "tnli/baseline.hpp"
#include "tnli/corpus.hpp"
#include "tnli/metrics.hpp"

namespace fs = std::filesystem;
using namespace tnli;
using tnli::testing::data_dir;
using tnli::testing::read_text;
using tnli::testing::scratch;
using tnli::testing::starter_lexicon;
using tnli::testing::starter_registry;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr std::size_t kK = 16;
constexpr std::size_t kFold = 0;

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_text(e.path());
  }
  return out;
}

void determinism() {
  const auto a = scratch("acceptance_gen_a"), b = scratch("acceptance_gen_b");
  auto gen = [](const fs::path& dir) {
    std::ostringstream out, err;
    return cli::run({"generate", "--k", std::to_string(kK), "--fold", std::to_string(kFold), "--seed",
                     std::to_string(kSeed), "--lexicon", (data_dir() / "starter.lexicon").string(),
                     "--registry", (data_dir() / "starter.templates").string(), "--out", dir.string()},
                    out, err);
  };
  const auto start = std::chrono::steady_clock::now();
  const int ra = gen(a);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int rb = gen(b);
  const auto ta = tree(a), tb = tree(b);
  const bool ok = ra == 0 && rb == 0 && ta == tb && ta.size() == 7 && seconds < 60.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu files identical=%s, first run %.2fs", ta.size(), ta == tb ? "yes" : "no",
                seconds);
  report("determinism", ok, buf);
}

void golden() {
  const auto& lex = starter_lexicon();
  const auto& reg = starter_registry();
  std::size_t good = 0;
  std::string first_bad;
  const auto& all = tnli::testing::golden_examples();
  for (const auto& g : all) {
    try {
      const auto& t = reg.at(g.template_id);
      const auto r = render(t, resolve_binding(t, g.binding, lex), lex);
      if (r.premise == g.premise && r.hypothesis == g.hypothesis && r.explanation == g.explanation) {
        ++good;
        continue;
      }
    } catch (const std::exception&) {
    }
    if (first_bad.empty()) first_bad = " first mismatch " + g.template_id;
  }
  report("golden_fixtures", good == all.size() && !all.empty(),
         std::to_string(good) + "/" + std::to_string(all.size()) + " triples verbatim" + first_bad);
}

void round_trip(const Corpus& c) {
  const auto& lex = starter_lexicon();
  const auto& reg = starter_registry();
  std::size_t total = 0, recovered = 0;
  auto check = [&](const Example& e) {
    ++total;
    const auto& t = reg.at(e.template_id);
    const auto m = reg.parse(e.premise, e.hypothesis, lex);
    if (m && m->template_id == e.template_id && m->binding == resolve_binding(t, e.binding, lex)) ++recovered;
  };
  for (const auto& e : c.train) check(e);
  for (const auto& e : c.dev) check(e);
  for (const auto& [q, examples] : c.test) {
    for (const auto& e : examples) check(e);
  }
  report("round_trip", total >= 10000 && recovered == total,
         std::to_string(recovered) + "/" + std::to_string(total) + " recovered");
}

void split_arithmetic(const Corpus& c, const ExperimentPlan& plan) {
  std::vector<std::size_t> sizes;
  for (const auto& f : plan.fold_split.folds) sizes.push_back(f.size());
  const std::size_t n_train = plan.training_template_ids().size();
  const std::size_t n_ood = plan.ood_template_ids().size();
  bool ok = starter_registry().size() == 118 && sizes == std::vector<std::size_t>{24, 24, 24, 23, 23};
  ok = ok && c.train.size() == kK * n_train;
  std::map<std::string, std::size_t> dev_per;
  for (const auto& e : c.dev) ++dev_per[e.template_id];
  const std::size_t want_dev = static_cast<std::size_t>(std::lround(0.2 * static_cast<double>(kK)));
  ok = ok && dev_per.size() == n_train && dev_count(kK) == std::max<std::size_t>(1, want_dev);
  for (const auto& [id, n] : dev_per) ok = ok && n == dev_count(kK);
  ok = ok && c.report.warnings.empty();
  for (const auto& [q, ex] : c.test) {
    ok = ok && ex.size() == kTestPerTemplate * (template_condition_of(q) == Partition::ind ? n_train : n_ood);
  }
  // dev(k) for every allowed k.
  for (std::size_t k : {1, 2, 4, 8, 16}) {
    ok = ok && dev_count(k) == std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.2 * k)));
  }
  report("split_arithmetic", ok,
         "folds 24/24/24/23/23, train " + std::to_string(c.train.size()) + ", dev " + std::to_string(c.dev.size()) +
             ", " + std::to_string(kTestPerTemplate) + " test examples per template");
}

void metric_identities(const Corpus& c) {
  bool ok = true;
  for (const auto& [q, gold] : c.test) {
    std::vector<Prediction> p;
    for (const auto& e : gold) p.push_back({e.id, e.explanation, e.label});
    const auto r = evaluate(p, gold, starter_lexicon(), {true});
    const auto& m = r.per_quadrant.at(std::string(to_string(q)));
    ok = ok && m.accuracy.accuracy() == 1.0 && m.bleu_score() == 100.0 && m.hallucination_rate() == 0.0 &&
         m.indicator.precision() == 1.0 && m.indicator.recall() == 1.0;
  }
  const std::vector<Tokens> cand{tokenize("the psychologist saw the essayist ."), tokenize("the cat .")};
  const std::vector<Tokens> ref{tokenize("the psychologist saw the essayist ."), tokenize("the dog .")};
  const double oracle = 100.0 * std::pow(160.0 / 315.0, 0.25);
  const double got = bleu(cand, ref);
  ok = ok && std::fabs(got - oracle) < 1e-6 && std::fabs(got - 84.42136252749054) < 1e-6;
  char buf[128];
  std::snprintf(buf, sizeof buf, "gold-as-prediction exact in 4 quadrants, hand BLEU %.8f vs %.8f", got, oracle);
  report("metric_identities", ok, buf);
}

void indicator(const Corpus& c) {
  std::size_t total = 0, agree = 0;
  auto check = [&](const Example& e) {
    ++total;
    agree += contains_indicator(std::string_view(e.explanation)) == (e.label == Label::non_entailment);
  };
  for (const auto& e : c.train) check(e);
  for (const auto& e : c.dev) check(e);
  for (const auto& [q, ex] : c.test) {
    for (const auto& e : ex) check(e);
  }
  report("indicator_biconditional", total > 0 && agree == total,
         std::to_string(agree) + "/" + std::to_string(total) + " examples agree");
}

void baseline_separation(const Corpus& c, const ExperimentPlan& plan) {
  BaselineConfig config;
  for (const auto& id : plan.training_template_ids()) config.training_template_ids.insert(id);
  bool ok = true;
  std::string detail;
  for (const auto& [q, gold] : c.test) {
    const auto run = run_baseline(gold, config, starter_registry(), starter_lexicon());
    const auto r = evaluate(run.predictions, gold, starter_lexicon(), {true});
    const auto& m = r.per_quadrant.at(std::string(to_string(q)));
    char buf[160];
    if (template_condition_of(q) == Partition::ind) {
      ok = ok && m.accuracy.correct == m.accuracy.scored && m.bleu_score() == 100.0;
      std::snprintf(buf, sizeof buf, "%s acc %.4f bleu %.2f; ", std::string(to_string(q)).c_str(),
                    *m.accuracy.accuracy(), *m.bleu_score());
    } else {
      // Abstaining predicts non_entailment everywhere.
      ok = ok && m.accuracy.correct == m.accuracy.gold_non_entailment && m.accuracy.scored == gold.size();
      std::snprintf(buf, sizeof buf, "%s acc %.4f base %.4f; ", std::string(to_string(q)).c_str(),
                    *m.accuracy.accuracy(),
                    static_cast<double>(m.accuracy.gold_non_entailment) / static_cast<double>(gold.size()));
    }
    detail += buf;
  }
  report("baseline_separation", ok, detail);
}

void lengths() {
  const auto s = registry_stats(starter_registry(), starter_lexicon(), kTestPerTemplate, Partition::ind, kSeed);
  const double h = s.mean_length.hypothesis, e = s.mean_length.explanation;
  const bool ok = std::fabs(h - 4.4) <= 1.5 && std::fabs(e - 13.3) <= 4.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "hypothesis %.3f (4.4 +/- 1.5), explanation %.3f (13.3 +/- 4)", h, e);
  report("length_statistic", ok, buf);
}

}  // namespace

int main() {
  try {
    determinism();
    golden();
    const auto plan = make_plan(starter_registry(), kSeed, kFold, kK);
    const auto corpus = generate_corpus(plan, starter_registry(), starter_lexicon());
    round_trip(corpus);
    split_arithmetic(corpus, plan);
    metric_identities(corpus);
    indicator(corpus);
    baseline_separation(corpus, plan);
    lengths();
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance: " << e.what() << std::endl;
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
