#pragma once

// Class diagram similarity between a student diagram S and an answer A.
//
//   CS_i   = (CNS + sum ANS) / (1 + NA + NMA)          0 for unpaired classes
//   CS_all = sum CS_i / (NC_s + NMC)
//   RS_i   = (RNS + CaS_endA + CaS_endB) / 3            0 for unpaired relationships
//   RS_all = sum RS_i / (NR_s + NMR)
//   CDS    = (CS_all + RS_all) / 2
//
// Aggregates whose denominator is zero (neither side has classes, or neither
// side has relationships) are 1.0. Positions and sizes never enter any score.

#include <optional>
#include <span>
#include <vector>

#include "cdcoach/cas_table.hpp"
#include "cdcoach/matching.hpp"
#include "cdcoach/model.hpp"

namespace cdcoach {

struct ClassScore {
  ElementId studentClassId;
  std::optional<ElementId> answerClassId;
  double cs = 0.0;

  friend bool operator==(const ClassScore&, const ClassScore&) = default;
};

struct RelationshipScore {
  ElementId studentRelId;
  std::optional<ElementId> answerRelId;
  double rs = 0.0;

  friend bool operator==(const RelationshipScore&, const RelationshipScore&) = default;
};

struct MissingAttributes {
  ElementId studentClassId;
  ElementId answerClassId;
  std::size_t count = 0;

  friend bool operator==(const MissingAttributes&, const MissingAttributes&) = default;
};

struct SimilarityReport {
  double cds = 0.0;
  double csAll = 0.0;
  double rsAll = 0.0;
  std::vector<ClassScore> perClass;              // student canonical order
  std::vector<RelationshipScore> perRelationship;  // student canonical order
  std::size_t nmc = 0;
  std::size_t nmr = 0;
  std::vector<MissingAttributes> nma;  // one entry per matched class pair

  friend bool operator==(const SimilarityReport&, const SimilarityReport&) = default;
};

double classSimilarity(const ClassNode& student, const ClassMatching& classes,
                       const AttributeMatching& attributes);

double overallClassSimilarity(const ClassDiagram& student, const ClassMatching& classes,
                              std::span<const ClassScore> perClass);

/// Unnamed on both sides scores 1.0, unnamed on one side 0.0; otherwise
/// nameSim when it exceeds the name threshold, else 0.
double relationshipNameSimilarity(const Relationship& student, const Relationship& answer,
                                  const MatchConfig& cfg);

double relationshipSimilarity(const Relationship& student, const Relationship& answer,
                              EndAlignment alignment, const MatchConfig& cfg,
                              const CaSTable& table);

double overallRelationshipSimilarity(const ClassDiagram& student,
                                     const RelationshipMatching& relationships,
                                     std::span<const RelationshipScore> perRelationship);

SimilarityReport classDiagramSimilarity(const ClassDiagram& student, const ClassDiagram& answer,
                                        const MatchConfig& cfg = {},
                                        const CaSTable& table = CaSTable::defaults());

}  // namespace cdcoach
