#include "cdcoach/layout.hpp"

#include <gtest/gtest.h>

#include "cdcoach/cdx.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace cdcoach;
using testing_support::makeClass;
using testing_support::makeRel;

namespace {

ClassDiagram load(const std::string& relative) {
  return parseDiagram(testing_support::readFile(testing_support::sourcePath(relative)));
}

}  // namespace

TEST(Layout, SelfTransformKeepsPositions) {
  const ClassDiagram a = load("data/wakaba/answer.json");
  const LayoutResult r = transformLayout(a, a, {});
  EXPECT_EQ(r.convertedDiagram, a);
  for (const ClassMove& m : r.moves) EXPECT_TRUE(m.corresponding);
  EXPECT_EQ(findCorrespondences(a, a, {}).entries.size(), 6u);
}

TEST(Layout, FourClassStudentLandsOnAnswerPositions) {
  const ClassDiagram a = load("data/wakaba/answer.json");
  const ClassDiagram s = load("data/wakaba/student-four-classes.json");
  const CorrespondenceSet cs = findCorrespondences(s, a, {});
  ASSERT_EQ(cs.entries.size(), 4u);
  EXPECT_TRUE(cs.nonCorrespondingStudentIds.empty());

  const LayoutResult r = transformLayout(s, a, {});
  for (const ClassNode& c : r.convertedDiagram.classes) {
    const ClassNode* target = a.findClass(cs.findByStudent(c.id)->answerClassId);
    EXPECT_EQ(c.x, target->x) << c.name;
    EXPECT_EQ(c.y, target->y) << c.name;
    EXPECT_EQ(target->name, c.name);
  }
  EXPECT_EQ(r.convertedDiagram.relationships, s.relationships);
  const LayoutResult again = transformLayout(r.convertedDiagram, a, {});
  EXPECT_EQ(again.moves, r.moves);
  EXPECT_EQ(again.convertedDiagram, r.convertedDiagram);
}

TEST(Layout, NonCorrespondingClassesParkAtOrigin) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Cart", {}, 300, 300), makeClass("s2", "Warehouse", {}, 500, 80)};
  s.relationships = {makeRel("r", "s1", "s2")};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Cart", {}, 40, 50)};
  const LayoutResult r = transformLayout(s, a, {});
  ASSERT_EQ(r.moves.size(), 2u);
  EXPECT_EQ(r.moves[0], (ClassMove{"s1", 40, 50, true}));
  EXPECT_EQ(r.moves[1], (ClassMove{"s2", 0, 0, false}));
  EXPECT_EQ(r.convertedDiagram.classes[1].x, 0);
  EXPECT_EQ(r.convertedDiagram.classes[1].width, s.classes[1].width);
  EXPECT_EQ(r.convertedDiagram.relationships, s.relationships);
}

TEST(Layout, CorrespondenceThresholdIsInclusive) {
  // Names share no bigram, both attributes match, two answer attributes
  // are missing: (0 + 1 + 1) / (1 + 2 + 2) = 0.4.
  ClassDiagram s;
  s.classes = {makeClass("s", "Basket", {"quantity", "price"})};
  ClassDiagram a;
  a.classes = {makeClass("a", "Order", {"quantity", "price", "tax", "date"})};
  const CorrespondenceSet cs = findCorrespondences(s, a, {});
  ASSERT_EQ(cs.entries.size(), 1u);
  EXPECT_DOUBLE_EQ(cs.entries[0].cs, 0.4);

  MatchConfig strict;
  strict.correspondenceThreshold = 0.41;
  EXPECT_TRUE(findCorrespondences(s, a, strict).entries.empty());
}

TEST(Layout, CorrespondencesMatchOracle) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 3000; ++i) {
    const ClassDiagram s = testing_support::randomDiagram(rng, "s");
    const ClassDiagram a = testing_support::randomDiagram(rng, "a");
    std::vector<std::pair<std::string, std::string>> got;
    for (const auto& e : findCorrespondences(s, a, {}).entries) {
      got.emplace_back(e.answerClassId, e.studentClassId);
    }
    ASSERT_EQ(got, oracle::correspondences(s, a)) << "case " << i;
  }
}

TEST(Layout, ApplyLayoutRejectsStaleMoves) {
  ClassDiagram s;
  s.classes = {makeClass("s1", "Cart", {}, 300, 300)};
  ClassDiagram a;
  a.classes = {makeClass("a1", "Cart", {}, 40, 50)};
  const LayoutResult r = transformLayout(s, a, {});
  EXPECT_EQ(applyLayout(s, r), r.convertedDiagram);

  ClassDiagram edited = s;
  edited.classes.push_back(makeClass("s2", "Order"));
  try {
    applyLayout(edited, r);
    FAIL();
  } catch (const StaleLayoutError& e) {
    EXPECT_EQ(e.id(), "s2");
  }
  EXPECT_THROW(applyLayout(ClassDiagram{}, r), StaleLayoutError);
}
