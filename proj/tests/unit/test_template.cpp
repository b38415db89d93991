#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tnli/error.hpp"
#include "tnli/registry.hpp"
#include "tnli/template.hpp"

using namespace tnli;
using tnli::testing::small_lexicon;
using tnli::testing::starter_lexicon;
using tnli::testing::starter_registry;

namespace {

Template one_template(const std::string& text, const Lexicon& lex) {
  const auto reg = parse_registry(text, lex, "inline", {false});
  return reg.templates().front();
}

Binding bind(const Template& t, std::map<std::string, std::string> lemmas, const Lexicon& lex) {
  return resolve_binding(t, lemmas, lex);
}

constexpr const char* kTwoProfessions = R"(template two | lexical_overlap | s | entailment
  slots: X=profession:singular Y=profession:singular
  premise: the {X} and the {Y} .
  hypothesis: the {X} .
  explanation: the {X} is the {X} .
)";

constexpr const char* kProfessionVerb = R"(template pv | lexical_overlap | s | entailment
  slots: X=profession:singular V=transitive_verb
  premise: the {X} {V} .
  hypothesis: the {X} {V} .
  explanation: the {X} {V} .
)";

}  // namespace

TEST(Render, PrepositionTemplateProducesExpectedStrings) {
  const auto& lex = starter_lexicon();
  const auto t = one_template(tnli::testing::kPpTemplate, lex);
  const auto b = bind(t, {{"X", "psychologist"}, {"Y", "programmer"}, {"Z", "essayist"}, {"P", "by"}, {"V", "see"}}, lex);
  const auto r = render(t, b, lex);
  EXPECT_EQ(r.premise, "the psychologist by the programmers saw the essayist .");
  EXPECT_EQ(r.hypothesis, "the psychologist saw the essayist .");
  EXPECT_EQ(r.explanation, "the psychologist by the programmers is still the psychologist .");
}

TEST(Render, OneSlotInTwoForms) {
  const auto& lex = starter_lexicon();
  const auto& t = starter_registry().at("lo_passive_01");
  const auto b = bind(t, {{"X", "scientist"}, {"Y", "psychotherapist"}, {"V", "address"}}, lex);
  EXPECT_EQ(render(t, b, lex).explanation,
            "addressed is the active form of was addressed by , so we swap the scientist and the psychotherapist .");
}

TEST(Render, ConditionalExplanationCarriesIndicator) {
  const auto& lex = starter_lexicon();
  const auto& t = starter_registry().at("con_if_01");
  const auto b = bind(t, {{"X", "psychologist"}, {"Y", "programmer"}, {"V1", "run"}, {"V2", "exist"}}, lex);
  EXPECT_EQ(render(t, b, lex).explanation,
            "the programmers existed if the psychologists ran , we do not know whether the psychologists ran .");
}

TEST(Render, RejectsBindingsThatDoNotFit) {
  const auto& lex = small_lexicon();
  const auto t = one_template(kTwoProfessions, lex);
  const auto psych = *lex.find("psychologist", PosClass::profession);
  const auto see = *lex.find("see", PosClass::transitive_verb);
  try {
    render(t, Binding{{{"X", psych}, {"Y", psych}}}, lex);
    FAIL() << "distinctness not enforced";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has_rule("binding"));
  }
  EXPECT_THROW(render(t, Binding{{{"X", psych}, {"Y", see}}}, lex), ValidationError);
  EXPECT_THROW(render(t, Binding{{{"X", psych}}}, lex), ValidationError);
  EXPECT_THROW(render(t, Binding{{{"X", psych}, {"Y", 999}}}, lex), ValidationError);
  EXPECT_THROW(bind(t, {{"X", "psychologist"}, {"Q", "baker"}}, lex), ValidationError);
  EXPECT_THROW(bind(t, {{"X", "psychologist"}, {"Y", "unicorn"}}, lex), ValidationError);
}

TEST(Render, MissingInflectionIsReported) {
  const auto& lex = small_lexicon();
  Template t;
  t.id = "broken";
  t.slots = {{"V", PosClass::intransitive_verb, Feature::base}};
  t.premise.elements = {SlotRef{"V", Feature::passive_participle}, std::string(".")};
  t.hypothesis = t.premise;
  t.explanation = t.premise;
  const Binding b{{{"V", *lex.find("run", PosClass::intransitive_verb)}}};
  EXPECT_THROW(render(t, b, lex), MissingFormError);
}

TEST(Render, BindingLemmasRoundTrip) {
  const auto& lex = starter_lexicon();
  const auto& t = starter_registry().at("lo_pp_around_01");
  BindingSpace space(t, lex, Partition::ood);
  for (std::uint64_t i = 0; i < space.size(); i += space.size() / 97 + 1) {
    const Binding b = space.at(i);
    EXPECT_EQ(resolve_binding(t, binding_lemmas(b, lex), lex), b);
  }
}

TEST(Enumerate, CountsMatchPermutationArithmetic) {
  const auto& lex = small_lexicon();
  EXPECT_EQ(BindingSpace(one_template(kTwoProfessions, lex), lex, Partition::ind).size(), 20u);
  EXPECT_EQ(BindingSpace(one_template(kProfessionVerb, lex), lex, Partition::ind).size(), 15u);
  EXPECT_EQ(BindingSpace(one_template(kTwoProfessions, lex), lex, Partition::ood).size(), 2u);
}

TEST(Enumerate, IteratorLengthEqualsCountAndOutOfRangeThrows) {
  const auto& lex = small_lexicon();
  const auto t = one_template(kTwoProfessions, lex);
  BindingSpace space(t, lex, Partition::ind);
  std::size_t n = 0;
  for (const Binding& b : space) {
    EXPECT_NO_THROW(check_binding(t, b, lex));
    ++n;
  }
  EXPECT_EQ(n, space.size());
  EXPECT_THROW(space.at(space.size()), std::out_of_range);
}

TEST(Enumerate, EmptyClassIsNamed) {
  const auto& lex = small_lexicon();
  Template t;
  t.id = "adj";
  t.slots = {{"A", PosClass::adjective, Feature::base}};
  try {
    BindingSpace space(t, lex, Partition::ind);
    FAIL() << "expected empty-class error";
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has_rule("empty-class"));
    EXPECT_NE(std::string(e.what()).find("adjective"), std::string::npos);
  }
}

// Independent nested loops over the slots in name order (P, V, X, Y, Z),
// lexemes in file order, professions pairwise distinct.
TEST(Enumerate, MatchesNestedLoopOracle) {
  const auto& lex = starter_lexicon();
  const auto& t = starter_registry().at("lo_pp_around_01");
  const auto preps = lex.members(PosClass::preposition, Partition::ind);
  const auto verbs = lex.members(PosClass::transitive_verb, Partition::ind);
  const auto profs = lex.members(PosClass::profession, Partition::ind);
  std::vector<Binding> oracle;
  for (auto p : preps)
    for (auto v : verbs)
      for (auto x : profs)
        for (auto y : profs)
          for (auto z : profs) {
            if (x == y || x == z || y == z) continue;
            oracle.push_back(Binding{{{"P", p}, {"V", v}, {"X", x}, {"Y", y}, {"Z", z}}});
          }
  BindingSpace space(t, lex, Partition::ind);
  ASSERT_EQ(space.size(), oracle.size());
  for (std::size_t i = 0; i < oracle.size(); i += 37) EXPECT_EQ(space.at(i), oracle[i]) << i;
  EXPECT_EQ(space.at(oracle.size() - 1), oracle.back());
}

TEST(Pattern, ToStringShowsFeatures) {
  const auto& lex = small_lexicon();
  const auto t = one_template(kProfessionVerb, lex);
  EXPECT_EQ(pattern_to_string(t.premise), "the {X:singular} {V:past} .");
}

// Copula agreement: "is still the N" takes a singular N, "are still" a plural.
TEST(RenderProperty, CopulaAgreesWithNumber) {
  const auto& lex = starter_lexicon();
  std::size_t checked = 0;
  for (const auto& t : starter_registry().templates()) {
    BindingSpace space(t, lex, Partition::ind);
    for (std::uint64_t i = 0; i < space.size(); i += space.size() / 5 + 1) {
      const auto tokens = tokenize(render(t, space.at(i), lex).explanation);
      for (std::size_t j = 0; j + 3 < tokens.size(); ++j) {
        if (tokens[j + 1] != "still" || tokens[j + 2] != "the") continue;
        if (tokens[j] != "is" && tokens[j] != "are") continue;
        const auto refs = lex.lookup(tokens[j + 3]);
        ASSERT_FALSE(refs.empty()) << tokens[j + 3];
        const Feature number = refs.front().feature;
        EXPECT_EQ(tokens[j] == "are", number == Feature::plural) << t.id;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

// Gold explanations mention only entities present in premise or hypothesis.
TEST(RenderProperty, ExplanationsIntroduceNoNewEntities) {
  const auto& lex = starter_lexicon();
  for (const auto& t : starter_registry().templates()) {
    for (auto part : {Partition::ind, Partition::ood}) {
      BindingSpace space(t, lex, part);
      for (std::uint64_t i = 0; i < space.size(); i += space.size() / 7 + 1) {
        const auto r = render(t, space.at(i), lex);
        const auto input = tokenize(r.premise + " " + r.hypothesis);
        for (const auto& tok : tokenize(r.explanation)) {
          if (!lex.is_entity_token(tok)) continue;
          EXPECT_NE(std::find(input.begin(), input.end(), tok), input.end()) << t.id << ": " << tok;
        }
      }
    }
  }
}
