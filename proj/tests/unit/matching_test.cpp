#include "cdcoach/matching.hpp"

#include <gtest/gtest.h>

#include "cdcoach/cdx.hpp"
#include "test_support.hpp"

using namespace cdcoach;
using testing_support::makeClass;
using testing_support::makeRel;

namespace {

ClassDiagram wakaba() {
  return parseDiagram(testing_support::readFile(testing_support::sourcePath("data/wakaba/answer.json")));
}

}  // namespace

TEST(Matching, SelfMatchPairsEveryClass) {
  const ClassDiagram a = wakaba();
  const ClassMatching m = matchClasses(a, a, {});
  EXPECT_EQ(m.pairs.size(), 6u);
  EXPECT_EQ(m.nmc(), 0u);
  for (const ClassPair& p : m.pairs) {
    EXPECT_EQ(p.studentClassId, p.answerClassId);
    EXPECT_EQ(p.cns, 1.0);
  }
}

TEST(Matching, MisspelledClassStillPairs) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Customer"), makeClass("s2", "Oder")};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Customer"), makeClass("a2", "Order")};
  const ClassMatching m = matchClasses(s, a, {});
  ASSERT_EQ(m.pairs.size(), 2u);
  EXPECT_EQ(m.findByStudent("s2")->answerClassId, "a2");
  EXPECT_DOUBLE_EQ(m.findByStudent("s2")->cns, 4.0 / 7.0);
  EXPECT_EQ(m.nmc(), 0u);
}

TEST(Matching, ThresholdIsStrict) {
  // "aaaa" vs "aa" is exactly 0.5: not a pair at the default threshold.
  ClassDiagram s;
  s.classes = {makeClass("s", "aaaa")};
  ClassDiagram a;
  a.classes = {makeClass("a", "aa")};
  EXPECT_TRUE(matchClasses(s, a, {}).pairs.empty());
  MatchConfig looser;
  looser.nameThreshold = 0.49;
  EXPECT_EQ(matchClasses(s, a, looser).pairs.size(), 1u);
}

TEST(Matching, EachAnswerConsumedOnce) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Order"), makeClass("s2", "Orders")};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Order")};
  const ClassMatching m = matchClasses(s, a, {});
  ASSERT_EQ(m.pairs.size(), 1u);
  // "order" precedes "orders" canonically and takes the exact match.
  EXPECT_EQ(m.pairs[0].studentClassId, "s1");
  EXPECT_EQ(m.unmatchedStudentClassIds, std::vector<ElementId>{"s2"});
}

TEST(Matching, TiesPreferCanonicallyEarlierAnswer) {
  ClassDiagram s;
  s.classes = {makeClass("s", "Order")};
  ClassDiagram a;
  a.classes = {makeClass("z", "order"), makeClass("b", "ORDER")};
  const ClassMatching m = matchClasses(s, a, {});
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0].answerClassId, "b");
  EXPECT_EQ(m.missingAnswerClassIds, std::vector<ElementId>{"z"});
}

TEST(Matching, AttributesCountMissing) {
  const auto s = makeClass("s", "Order", {"order code"});
  const auto a = makeClass("a", "Order", {"order code", "order date"});
  const AttributeMatching m = matchAttributes(s, a, {});
  EXPECT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.nma(), 1u);
  EXPECT_EQ(m.ansSum(), 1.0);
  EXPECT_DOUBLE_EQ(pairwiseClassSimilarity(makeClass("s", "Oder", {"order code"}), a, {}),
                   (4.0 / 7.0 + 1.0) / 3.0);
}

TEST(Matching, RelationshipsFollowClassPairs) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Customer"), makeClass("s2", "Oder")};
  s.relationships = {makeRel("sr", "s1", "s2")};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Customer"), makeClass("a2", "Order")};
  a.relationships = {makeRel("ar", "a1", "a2")};
  const ClassMatching cm = matchClasses(s, a, {});
  const RelationshipMatching rm = matchRelationships(s, a, cm, {}, CaSTable::defaults());
  ASSERT_EQ(rm.pairs.size(), 1u);
  EXPECT_EQ(rm.pairs[0].answerRelId, "ar");
  EXPECT_EQ(rm.pairs[0].alignment, EndAlignment::kParallel);
  EXPECT_EQ(rm.nmr(), 0u);
}

TEST(Matching, ReversedRelationshipIsCrossed) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Customer"), makeClass("s2", "Order")};
  s.relationships = {makeRel("sr", "s2", "s1", "*", "1")};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Customer"), makeClass("a2", "Order")};
  a.relationships = {makeRel("ar", "a1", "a2", "1", "*")};
  const ClassMatching cm = matchClasses(s, a, {});
  const RelationshipMatching rm = matchRelationships(s, a, cm, {}, CaSTable::defaults());
  ASSERT_EQ(rm.pairs.size(), 1u);
  EXPECT_EQ(rm.pairs[0].alignment, EndAlignment::kCrossed);
}

TEST(Matching, RelationshipWithUnpairedEndIsUnmatched) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Customer"), makeClass("s2", "Basket")};
  s.relationships = {makeRel("sr", "s1", "s2")};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Customer"), makeClass("a2", "Order")};
  a.relationships = {makeRel("ar", "a1", "a2")};
  const ClassMatching cm = matchClasses(s, a, {});
  const RelationshipMatching rm = matchRelationships(s, a, cm, {}, CaSTable::defaults());
  EXPECT_TRUE(rm.pairs.empty());
  EXPECT_EQ(rm.unmatchedStudentRelIds, std::vector<ElementId>{"sr"});
  EXPECT_EQ(rm.missingAnswerRelIds, std::vector<ElementId>{"ar"});
}

TEST(Matching, ParallelCandidatesPickBestMultiplicity) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Customer"), makeClass("s2", "Order")};
  s.relationships = {makeRel("sr", "s1", "s2", "1", "*")};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Customer"), makeClass("a2", "Order")};
  a.relationships = {makeRel("a-first", "a1", "a2", "0..1", "1"),
                     makeRel("a-second", "a1", "a2", "1", "*")};
  const ClassMatching cm = matchClasses(s, a, {});
  const RelationshipMatching rm = matchRelationships(s, a, cm, {}, CaSTable::defaults());
  ASSERT_EQ(rm.pairs.size(), 1u);
  EXPECT_EQ(rm.pairs[0].answerRelId, "a-second");
  EXPECT_EQ(rm.missingAnswerRelIds, std::vector<ElementId>{"a-first"});
}

TEST(Matching, ConfigValidation) {
  MatchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.nameThreshold = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.correspondenceThreshold = -0.1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
