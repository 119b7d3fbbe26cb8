#include "cdcoach/matching.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "cdcoach/similarity.hpp"

namespace cdcoach {

namespace {

struct Named {
  std::string_view id;
  std::string_view name;
  NormalizedName normalized;
};

bool canonicalLess(const Named& a, const Named& b) {
  if (a.normalized.text != b.normalized.text) return a.normalized.text < b.normalized.text;
  return a.id < b.id;
}

struct GreedyResult {
  struct Pair {
    std::string_view studentId;
    std::string_view answerId;
    double sim;
  };
  std::vector<Pair> pairs;
  std::vector<std::string_view> missingAnswers;
  std::vector<std::string_view> unmatchedStudents;
};

// Shared greedy procedure for classes and attributes: name similarity must
// strictly exceed the threshold.
GreedyResult greedyNameMatch(std::vector<Named> students, std::vector<Named> answers,
                             const MatchConfig& cfg) {
  std::sort(students.begin(), students.end(), canonicalLess);
  std::sort(answers.begin(), answers.end(), canonicalLess);

  GreedyResult result;
  std::vector<bool> consumed(answers.size(), false);
  for (const Named& s : students) {
    std::optional<std::size_t> best;
    double bestSim = -1.0;
    for (std::size_t j = 0; j < answers.size(); ++j) {
      if (consumed[j]) continue;
      const double sim = nameSim(s.name, answers[j].name, cfg.denominator);
      if (!best || sim > bestSim + kScoreTieTolerance) {
        best = j;
        bestSim = sim;
      }
    }
    if (best && bestSim > cfg.nameThreshold) {
      consumed[*best] = true;
      result.pairs.push_back({s.id, answers[*best].id, bestSim});
    } else {
      result.unmatchedStudents.push_back(s.id);
    }
  }
  for (std::size_t j = 0; j < answers.size(); ++j) {
    if (!consumed[j]) result.missingAnswers.push_back(answers[j].id);
  }
  return result;
}

std::vector<Named> namedClasses(const ClassDiagram& d) {
  std::vector<Named> out;
  out.reserve(d.classes.size());
  for (const ClassNode& c : d.classes) out.push_back({c.id, c.name, normalizeName(c.name)});
  return out;
}

std::vector<Named> namedAttributes(const ClassNode& c) {
  std::vector<Named> out;
  out.reserve(c.attributes.size());
  for (const Attribute& a : c.attributes) out.push_back({a.id, a.name, normalizeName(a.name)});
  return out;
}

std::vector<ElementId> toIds(const std::vector<std::string_view>& views) {
  return {views.begin(), views.end()};
}

}  // namespace

void MatchConfig::validate() const {
  auto inUnit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!inUnit(nameThreshold)) throw std::invalid_argument("nameThreshold must lie in [0,1]");
  if (!inUnit(correspondenceThreshold)) {
    throw std::invalid_argument("correspondenceThreshold must lie in [0,1]");
  }
}

const ClassPair* ClassMatching::findByStudent(std::string_view studentClassId) const {
  const auto it = std::find_if(pairs.begin(), pairs.end(), [&](const ClassPair& p) {
    return p.studentClassId == studentClassId;
  });
  return it == pairs.end() ? nullptr : &*it;
}

const ClassPair* ClassMatching::findByAnswer(std::string_view answerClassId) const {
  const auto it = std::find_if(pairs.begin(), pairs.end(), [&](const ClassPair& p) {
    return p.answerClassId == answerClassId;
  });
  return it == pairs.end() ? nullptr : &*it;
}

double AttributeMatching::ansSum() const {
  return std::accumulate(pairs.begin(), pairs.end(), 0.0,
                         [](double acc, const AttributePair& p) { return acc + p.ans; });
}

const RelationshipPair* RelationshipMatching::findByStudent(std::string_view studentRelId) const {
  const auto it = std::find_if(pairs.begin(), pairs.end(), [&](const RelationshipPair& p) {
    return p.studentRelId == studentRelId;
  });
  return it == pairs.end() ? nullptr : &*it;
}

std::vector<const ClassNode*> canonicalClasses(const ClassDiagram& diagram) {
  std::vector<std::pair<NormalizedName, const ClassNode*>> keyed;
  keyed.reserve(diagram.classes.size());
  for (const ClassNode& c : diagram.classes) keyed.emplace_back(normalizeName(c.name), &c);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->id < b.second->id;
  });
  std::vector<const ClassNode*> out;
  out.reserve(keyed.size());
  for (const auto& [_, c] : keyed) out.push_back(c);
  return out;
}

std::vector<const Relationship*> canonicalRelationships(const ClassDiagram& diagram) {
  std::unordered_map<std::string_view, std::string> names;
  for (const ClassNode& c : diagram.classes) names.emplace(c.id, normalizeName(c.name).text);
  auto nameOf = [&](const ElementId& id) -> std::string {
    const auto it = names.find(id);
    return it == names.end() ? std::string() : it->second;
  };

  struct Keyed {
    std::string low;
    std::string high;
    const Relationship* rel;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(diagram.relationships.size());
  for (const Relationship& r : diagram.relationships) {
    auto a = nameOf(r.endA);
    auto b = nameOf(r.endB);
    if (b < a) std::swap(a, b);
    keyed.push_back({std::move(a), std::move(b), &r});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
    if (x.low != y.low) return x.low < y.low;
    if (x.high != y.high) return x.high < y.high;
    return x.rel->id < y.rel->id;
  });
  std::vector<const Relationship*> out;
  out.reserve(keyed.size());
  for (const Keyed& k : keyed) out.push_back(k.rel);
  return out;
}

ClassMatching matchClasses(const ClassDiagram& student, const ClassDiagram& answer,
                           const MatchConfig& cfg) {
  const GreedyResult g = greedyNameMatch(namedClasses(student), namedClasses(answer), cfg);
  ClassMatching out;
  out.pairs.reserve(g.pairs.size());
  for (const auto& p : g.pairs) {
    out.pairs.push_back({ElementId(p.studentId), ElementId(p.answerId), p.sim});
  }
  out.missingAnswerClassIds = toIds(g.missingAnswers);
  out.unmatchedStudentClassIds = toIds(g.unmatchedStudents);
  return out;
}

AttributeMatching matchAttributes(const ClassNode& student, const ClassNode& answer,
                                  const MatchConfig& cfg) {
  const GreedyResult g = greedyNameMatch(namedAttributes(student), namedAttributes(answer), cfg);
  AttributeMatching out;
  out.pairs.reserve(g.pairs.size());
  for (const auto& p : g.pairs) {
    out.pairs.push_back({ElementId(p.studentId), ElementId(p.answerId), p.sim});
  }
  out.missingAnswerAttrIds = toIds(g.missingAnswers);
  out.unmatchedStudentAttrIds = toIds(g.unmatchedStudents);
  return out;
}

double pairwiseClassSimilarity(const ClassNode& student, const ClassNode& answer,
                               const MatchConfig& cfg) {
  const AttributeMatching am = matchAttributes(student, answer, cfg);
  const double numerator = nameSim(student.name, answer.name, cfg.denominator) + am.ansSum();
  const double denominator = 1.0 + static_cast<double>(student.attributes.size() + am.nma());
  return numerator / denominator;
}

RelationshipMatching matchRelationships(const ClassDiagram& student, const ClassDiagram& answer,
                                        const ClassMatching& classes, const MatchConfig& cfg,
                                        const CaSTable& table) {
  std::unordered_map<std::string_view, std::string_view> toAnswer;
  for (const ClassPair& p : classes.pairs) toAnswer.emplace(p.studentClassId, p.answerClassId);

  std::vector<const Relationship*> answers;
  answers.reserve(answer.relationships.size());
  for (const Relationship& r : answer.relationships) answers.push_back(&r);
  std::sort(answers.begin(), answers.end(),
            [](const Relationship* a, const Relationship* b) { return a->id < b->id; });

  RelationshipMatching out;
  std::vector<bool> consumed(answers.size(), false);
  for (const Relationship* rs : canonicalRelationships(student)) {
    const auto ia = toAnswer.find(rs->endA);
    const auto ib = toAnswer.find(rs->endB);
    if (ia == toAnswer.end() || ib == toAnswer.end()) {
      out.unmatchedStudentRelIds.push_back(rs->id);
      continue;
    }

    std::optional<std::size_t> best;
    EndAlignment bestAlignment = EndAlignment::kParallel;
    double bestScore = -1.0;
    for (std::size_t j = 0; j < answers.size(); ++j) {
      if (consumed[j]) continue;
      const Relationship& ra = *answers[j];
      std::optional<double> score;
      EndAlignment alignment = EndAlignment::kParallel;
      if (ia->second == ra.endA && ib->second == ra.endB) {
        score = relationshipSimilarity(*rs, ra, EndAlignment::kParallel, cfg, table);
      }
      if (ia->second == ra.endB && ib->second == ra.endA) {
        const double crossed = relationshipSimilarity(*rs, ra, EndAlignment::kCrossed, cfg, table);
        if (!score || crossed > *score + kScoreTieTolerance) {
          score = crossed;
          alignment = EndAlignment::kCrossed;
        }
      }
      if (score && (!best || *score > bestScore + kScoreTieTolerance)) {
        best = j;
        bestScore = *score;
        bestAlignment = alignment;
      }
    }
    if (best) {
      consumed[*best] = true;
      out.pairs.push_back({rs->id, answers[*best]->id, bestAlignment});
    } else {
      out.unmatchedStudentRelIds.push_back(rs->id);
    }
  }
  for (std::size_t j = 0; j < answers.size(); ++j) {
    if (!consumed[j]) out.missingAnswerRelIds.push_back(answers[j]->id);
  }
  return out;
}

}  // namespace cdcoach
