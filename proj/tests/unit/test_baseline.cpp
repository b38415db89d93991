#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tnli/baseline.hpp"
#include "tnli/error.hpp"

using namespace tnli;
using tnli::testing::scratch;
using tnli::testing::starter_lexicon;
using tnli::testing::starter_registry;

namespace {

BaselineConfig config_for(const ExperimentPlan& plan, Scope scope = Scope::restricted,
                          Fallback fallback = Fallback::abstain_non_entailment) {
  BaselineConfig c;
  const auto ids = plan.training_template_ids();
  c.training_template_ids = {ids.begin(), ids.end()};
  c.scope = scope;
  c.fallback = fallback;
  return c;
}

TestQuadrants small_test(const ExperimentPlan& plan) {
  GenerationOptions o;
  o.test_per_template = 10;
  return generate_test_quadrants(plan, starter_registry(), starter_lexicon(), o);
}

}  // namespace

TEST(Names, ScopeAndFallbackRoundTrip) {
  for (auto s : {Scope::restricted, Scope::closed_book}) EXPECT_EQ(parse_scope(to_string(s)), s);
  for (auto f : {Fallback::abstain_non_entailment, Fallback::majority_entailment}) {
    EXPECT_EQ(parse_fallback(to_string(f)), f);
  }
  EXPECT_FALSE(parse_scope("open"));
  EXPECT_EQ(predict(fallback_explanation(Fallback::abstain_non_entailment)), Label::non_entailment);
  EXPECT_EQ(predict(fallback_explanation(Fallback::majority_entailment)), Label::entailment);
}

TEST(Explain, RecoversTrainingTemplateExplanation) {
  BaselineConfig c;
  c.training_template_ids = {"lo_pp_around_01"};
  const auto e = explain("the psychologist by the programmers saw the essayist .",
                         "the psychologist saw the essayist .", c, starter_registry(), starter_lexicon());
  EXPECT_TRUE(e.matched);
  EXPECT_EQ(e.template_id, "lo_pp_around_01");
  EXPECT_EQ(e.text, "the psychologist by the programmers is still the psychologist .");
  EXPECT_EQ(predict(e.text), Label::entailment);
}

TEST(Explain, OutOfScopeTemplatesFallBack) {
  BaselineConfig c;
  c.training_template_ids = {"con_if_01"};
  const auto e = explain("the psychologist by the programmers saw the essayist .",
                         "the psychologist saw the essayist .", c, starter_registry(), starter_lexicon());
  EXPECT_FALSE(e.matched);
  EXPECT_EQ(e.text, kAbstainExplanation);

  c.scope = Scope::closed_book;
  EXPECT_TRUE(explain("the psychologist by the programmers saw the essayist .",
                      "the psychologist saw the essayist .", c, starter_registry(), starter_lexicon())
                  .matched);
}

TEST(Explain, TotalOnArbitraryInput) {
  BaselineConfig c;
  c.fallback = Fallback::majority_entailment;
  for (const char* p : {"", ".", "hello world .", "the the the"}) {
    const auto e = explain(p, "", c, starter_registry(), starter_lexicon());
    EXPECT_FALSE(e.matched);
    EXPECT_EQ(e.text, kMajorityExplanation);
  }
}

TEST(Predict, IndicatorDecidesLabel) {
  EXPECT_EQ(predict(""), Label::entailment);
  EXPECT_EQ(predict("we do not know whether x ."), Label::non_entailment);
  EXPECT_EQ(predict("we do know ."), Label::entailment);
}

TEST(Config, UnknownTrainingTemplate) {
  BaselineConfig c;
  c.training_template_ids = {"nope"};
  try {
    validate_config(c, starter_registry());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has_rule("training-template"));
  }
}

TEST(Run, PerfectOnTrainingTemplatesAndFallsBackElsewhere) {
  const auto plan = make_plan(starter_registry(), 3, 1, 1);
  const auto test = small_test(plan);
  const auto config = config_for(plan);
  for (const auto& [q, examples] : test.quadrants) {
    const auto run = run_baseline(examples, config, starter_registry(), starter_lexicon());
    ASSERT_EQ(run.predictions.size(), examples.size());
    if (template_condition_of(q) == Partition::ind) {
      EXPECT_TRUE(run.fallback_ids.empty()) << to_string(q);
      for (std::size_t i = 0; i < examples.size(); ++i) {
        EXPECT_EQ(run.predictions[i].generated_explanation, examples[i].explanation);
        EXPECT_EQ(run.predictions[i].predicted_label, examples[i].label);
      }
    } else {
      EXPECT_EQ(run.fallback_ids.size(), examples.size()) << to_string(q);
      // Abstaining recovers exactly the non-entailment examples.
      const auto counts = indicator_stats(run.predictions, examples);
      EXPECT_DOUBLE_EQ(*counts.recall(), 1.0);
      std::size_t non = 0;
      for (const auto& e : examples) non += e.label == Label::non_entailment;
      EXPECT_DOUBLE_EQ(*accuracy(run.predictions, examples).accuracy(),
                       static_cast<double>(non) / static_cast<double>(examples.size()));
    }
  }
}

TEST(Run, ThreadCountDoesNotMatter) {
  const auto plan = make_plan(starter_registry(), 3, 2, 1);
  const auto test = small_test(plan);
  const auto& examples = test.quadrants.at(Quadrant::oodvocab_indtemplate);
  const auto config = config_for(plan);
  const auto a = run_baseline(examples, config, starter_registry(), starter_lexicon(), 1);
  const auto b = run_baseline(examples, config, starter_registry(), starter_lexicon(), 4);
  EXPECT_EQ(a.predictions, b.predictions);
}

TEST(RunFile, WritesPredictionsAndFallbackLog) {
  const auto dir = scratch("baseline_file");
  const auto plan = make_plan(starter_registry(), 3, 0, 1);
  const auto test = small_test(plan);
  const auto& examples = test.quadrants.at(Quadrant::indvocab_oodtemplate);
  write_examples(examples, dir / "in.jsonl");
  const auto run = run_baseline_file(dir / "in.jsonl", config_for(plan), starter_registry(), starter_lexicon(),
                                     dir / "out.jsonl", dir / "fb.jsonl");
  EXPECT_EQ(read_predictions(dir / "out.jsonl"), run.predictions);
  EXPECT_EQ(parse_fallback_log(tnli::testing::read_text(dir / "fb.jsonl")), run.fallback_ids);
}

TEST(RunFile, EmptyInputGivesEmptyOutput) {
  const auto dir = scratch("baseline_empty");
  write_examples({}, dir / "in.jsonl");
  BaselineConfig c;
  const auto run = run_baseline_file(dir / "in.jsonl", c, starter_registry(), starter_lexicon(), dir / "out.jsonl");
  EXPECT_TRUE(run.predictions.empty());
  EXPECT_TRUE(std::filesystem::exists(dir / "out.jsonl"));
  EXPECT_EQ(std::filesystem::file_size(dir / "out.jsonl"), 0u);
}

TEST(FallbackLog, RoundTripAndErrors) {
  const std::vector<std::string> ids{"a:test:ind:0", "b"};
  EXPECT_EQ(parse_fallback_log(format_fallback_log(ids)), ids);
  EXPECT_THROW(parse_fallback_log("{}\n"), ParseError);
}
