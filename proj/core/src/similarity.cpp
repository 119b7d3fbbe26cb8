#include "cdcoach/similarity.hpp"

#include <unordered_map>

namespace cdcoach {

namespace {

double ratioOrVacuous(double numerator, std::size_t denominator) {
  if (denominator == 0) return 1.0;
  return numerator / static_cast<double>(denominator);
}

}  // namespace

double classSimilarity(const ClassNode& student, const ClassMatching& classes,
                       const AttributeMatching& attributes) {
  const ClassPair* pair = classes.findByStudent(student.id);
  if (pair == nullptr) return 0.0;
  const double numerator = pair->cns + attributes.ansSum();
  return numerator / (1.0 + static_cast<double>(student.attributes.size() + attributes.nma()));
}

double overallClassSimilarity(const ClassDiagram& student, const ClassMatching& classes,
                              std::span<const ClassScore> perClass) {
  double sum = 0.0;
  for (const ClassScore& s : perClass) sum += s.cs;
  return ratioOrVacuous(sum, student.classes.size() + classes.nmc());
}

double relationshipNameSimilarity(const Relationship& student, const Relationship& answer,
                                  const MatchConfig& cfg) {
  const bool studentEmpty = normalizeName(student.name).text.empty();
  const bool answerEmpty = normalizeName(answer.name).text.empty();
  if (studentEmpty && answerEmpty) return 1.0;
  if (studentEmpty || answerEmpty) return 0.0;
  const double sim = nameSim(student.name, answer.name, cfg.denominator);
  return sim > cfg.nameThreshold ? sim : 0.0;
}

double relationshipSimilarity(const Relationship& student, const Relationship& answer,
                              EndAlignment alignment, const MatchConfig& cfg,
                              const CaSTable& table) {
  const Multiplicity& oppositeA =
      alignment == EndAlignment::kParallel ? answer.multA : answer.multB;
  const Multiplicity& oppositeB =
      alignment == EndAlignment::kParallel ? answer.multB : answer.multA;
  const double cas = multiplicitySimilarity(student.multA, oppositeA, table) +
                     multiplicitySimilarity(student.multB, oppositeB, table);
  return (relationshipNameSimilarity(student, answer, cfg) + cas) / 3.0;
}

double overallRelationshipSimilarity(const ClassDiagram& student,
                                     const RelationshipMatching& relationships,
                                     std::span<const RelationshipScore> perRelationship) {
  double sum = 0.0;
  for (const RelationshipScore& s : perRelationship) sum += s.rs;
  return ratioOrVacuous(sum, student.relationships.size() + relationships.nmr());
}

SimilarityReport classDiagramSimilarity(const ClassDiagram& student, const ClassDiagram& answer,
                                        const MatchConfig& cfg, const CaSTable& table) {
  SimilarityReport report;

  const ClassMatching classes = matchClasses(student, answer, cfg);
  report.nmc = classes.nmc();
  for (const ClassNode* cs : canonicalClasses(student)) {
    const ClassPair* pair = classes.findByStudent(cs->id);
    if (pair == nullptr) {
      report.perClass.push_back({cs->id, std::nullopt, 0.0});
      continue;
    }
    const ClassNode* ca = answer.findClass(pair->answerClassId);
    const AttributeMatching attrs = matchAttributes(*cs, *ca, cfg);
    report.perClass.push_back({cs->id, pair->answerClassId, classSimilarity(*cs, classes, attrs)});
    report.nma.push_back({cs->id, pair->answerClassId, attrs.nma()});
  }
  report.csAll = overallClassSimilarity(student, classes, report.perClass);

  const RelationshipMatching rels = matchRelationships(student, answer, classes, cfg, table);
  report.nmr = rels.nmr();
  std::unordered_map<std::string_view, const Relationship*> answerRels;
  for (const Relationship& r : answer.relationships) answerRels.emplace(r.id, &r);
  for (const Relationship* rs : canonicalRelationships(student)) {
    const RelationshipPair* pair = rels.findByStudent(rs->id);
    if (pair == nullptr) {
      report.perRelationship.push_back({rs->id, std::nullopt, 0.0});
      continue;
    }
    const Relationship& ra = *answerRels.at(pair->answerRelId);
    report.perRelationship.push_back(
        {rs->id, pair->answerRelId, relationshipSimilarity(*rs, ra, pair->alignment, cfg, table)});
  }
  report.rsAll = overallRelationshipSimilarity(student, rels, report.perRelationship);

  report.cds = (report.csAll + report.rsAll) / 2.0;
  return report;
}

}  // namespace cdcoach
