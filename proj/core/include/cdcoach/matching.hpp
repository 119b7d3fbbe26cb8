#pragma once

// Extraction of comparison-target pairs between a student diagram S and an
// answer diagram A.
//
// Every matcher is greedy: student elements are visited in canonical order
// (normalized name, then id) and each takes the still-unconsumed answer
// element with the highest score. Ties go to the answer element that is
// earlier in the same canonical order. Because the visiting order never
// depends on input list order, results are invariant under shuffling.

#include <optional>
#include <string_view>
#include <vector>

#include "cdcoach/cas_table.hpp"
#include "cdcoach/model.hpp"
#include "cdcoach/name_similarity.hpp"

namespace cdcoach {

// Scores closer than this are treated as equal when picking a maximum.
inline constexpr double kScoreTieTolerance = 1e-12;

struct MatchConfig {
  double nameThreshold = 0.5;            // pairs need nameSim > nameThreshold
  double correspondenceThreshold = 0.4;  // layout correspondence needs CS >= this
  SimilarityDenominator denominator = SimilarityDenominator::kBigramCount;

  /// Throws std::invalid_argument unless both thresholds lie in [0,1].
  void validate() const;

  friend bool operator==(const MatchConfig&, const MatchConfig&) = default;
};

struct ClassPair {
  ElementId studentClassId;
  ElementId answerClassId;
  double cns = 0.0;
};

struct ClassMatching {
  std::vector<ClassPair> pairs;  // in student canonical order
  std::vector<ElementId> missingAnswerClassIds;
  std::vector<ElementId> unmatchedStudentClassIds;

  std::size_t nmc() const { return missingAnswerClassIds.size(); }
  const ClassPair* findByStudent(std::string_view studentClassId) const;
  const ClassPair* findByAnswer(std::string_view answerClassId) const;
};

struct AttributePair {
  ElementId studentAttrId;
  ElementId answerAttrId;
  double ans = 0.0;
};

struct AttributeMatching {
  std::vector<AttributePair> pairs;
  std::vector<ElementId> missingAnswerAttrIds;
  std::vector<ElementId> unmatchedStudentAttrIds;

  std::size_t nma() const { return missingAnswerAttrIds.size(); }
  double ansSum() const;
};

enum class EndAlignment { kParallel, kCrossed };

struct RelationshipPair {
  ElementId studentRelId;
  ElementId answerRelId;
  EndAlignment alignment = EndAlignment::kParallel;
};

struct RelationshipMatching {
  std::vector<RelationshipPair> pairs;
  std::vector<ElementId> missingAnswerRelIds;
  std::vector<ElementId> unmatchedStudentRelIds;

  std::size_t nmr() const { return missingAnswerRelIds.size(); }
  const RelationshipPair* findByStudent(std::string_view studentRelId) const;
};

/// Classes sorted by (normalized name, id).
std::vector<const ClassNode*> canonicalClasses(const ClassDiagram& diagram);

/// Relationships sorted by (sorted pair of end-class normalized names, id).
std::vector<const Relationship*> canonicalRelationships(const ClassDiagram& diagram);

ClassMatching matchClasses(const ClassDiagram& student, const ClassDiagram& answer,
                           const MatchConfig& cfg);

AttributeMatching matchAttributes(const ClassNode& student, const ClassNode& answer,
                                  const MatchConfig& cfg);

/// CS for an arbitrary (student, answer) class pair:
/// (nameSim + sum ANS) / (1 + NA + NMA), NA = student attribute count.
/// The class-name term is not gated by the name threshold.
double pairwiseClassSimilarity(const ClassNode& student, const ClassNode& answer,
                               const MatchConfig& cfg);

/// Pairs relationships whose end classes correspond under `classes`, in
/// parallel or crossed orientation. Each student relationship takes the
/// candidate with the highest RS; ties go to the smaller answer id, and for
/// a candidate valid in both orientations the better one (parallel on a tie).
RelationshipMatching matchRelationships(const ClassDiagram& student, const ClassDiagram& answer,
                                        const ClassMatching& classes, const MatchConfig& cfg,
                                        const CaSTable& table);

}  // namespace cdcoach
