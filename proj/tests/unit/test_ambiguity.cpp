#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tnli/error.hpp"
#include "tnli/registry.hpp"

using namespace tnli;
using tnli::testing::small_lexicon;

namespace {

std::string pp(const std::string& id, const std::string& label, const std::string& expl) {
  return "template " + id + " | lexical_overlap | s | " + label +
         "\n  slots: X=profession:singular Y=profession:plural Z=profession:singular P=preposition "
         "V=transitive_verb\n"
         "  premise: the {X} {P} the {Y} {V} the {Z} .\n"
         "  hypothesis: the {X} {V} the {Z} .\n"
         "  explanation: " + expl + "\n";
}

const std::string kYes = "the {X} {P} the {Y} is still the {X} .";
const std::string kNo = "we do not know whether the {Y} {V} the {Z} .";

std::vector<Issue> ambiguities(const std::string& text) {
  const auto reg = parse_registry(text, small_lexicon(), "inline", {false});
  return find_ambiguities(reg.templates(), small_lexicon());
}

}  // namespace

TEST(Ambiguity, OppositeLabelsOnOneShapeAreRejected) {
  const auto text = pp("a", "entailment", kYes) + pp("b", "non_entailment", kNo);
  const auto issues = ambiguities(text);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].rule, "ambiguity");
  EXPECT_EQ(issues[0].subject, "a,b");
  try {
    parse_registry(text, small_lexicon());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has_rule("ambiguity"));
  }
}

TEST(Ambiguity, IdenticalReadingsAreTolerated) {
  EXPECT_TRUE(ambiguities(pp("a", "entailment", kYes) + pp("b", "entailment", kYes)).empty());
}

TEST(Ambiguity, SameLabelDifferentExplanationIsRejected) {
  const auto issues = ambiguities(pp("a", "entailment", kYes) + pp("b", "entailment", "the {X} {V} the {Z} ."));
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].rule, "ambiguity");
}

TEST(Ambiguity, DifferentLiteralsNeverCollide) {
  auto other = pp("b", "non_entailment", kNo);
  other.replace(other.find("the {X} {P}"), 11, "a {X} {P}");
  EXPECT_TRUE(ambiguities(pp("a", "entailment", kYes) + other).empty());
}

TEST(Ambiguity, LiteralAgainstSlotCollidesOnlyWhenTheWordFits) {
  // "by" is an IND preposition, so the literal template overlaps the slotted one.
  auto lit = pp("b", "non_entailment", "we do not know whether the {Y} {V} the {Z} .");
  lit.replace(lit.find("P=preposition "), 14, "");
  lit.replace(lit.find("{X} {P}"), 7, "{X} by");
  EXPECT_EQ(ambiguities(pp("a", "entailment", kYes) + lit).size(), 1u);

  auto off = lit;
  off.replace(off.find("{X} by"), 6, "{X} with");
  EXPECT_TRUE(ambiguities(pp("a", "entailment", kYes) + off).empty());
}

TEST(Ambiguity, StarterRegistryIsClean) {
  const auto& reg = tnli::testing::starter_registry();
  EXPECT_TRUE(find_ambiguities(reg.templates(), tnli::testing::starter_lexicon()).empty());
}
