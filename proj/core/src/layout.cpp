#include "cdcoach/layout.hpp"

#include <algorithm>
#include <unordered_map>

namespace cdcoach {

StaleLayoutError::StaleLayoutError(ElementId id)
    : std::runtime_error("stale layout result: class \"" + id + "\" does not match the diagram"),
      id_(std::move(id)) {}

const Correspondence* CorrespondenceSet::findByStudent(std::string_view studentClassId) const {
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const Correspondence& c) {
    return c.studentClassId == studentClassId;
  });
  return it == entries.end() ? nullptr : &*it;
}

CorrespondenceSet findCorrespondences(const ClassDiagram& student, const ClassDiagram& answer,
                                      const MatchConfig& cfg) {
  const std::vector<const ClassNode*> students = canonicalClasses(student);
  std::vector<bool> consumed(students.size(), false);

  CorrespondenceSet out;
  for (const ClassNode* ca : canonicalClasses(answer)) {
    std::optional<std::size_t> best;
    double bestCs = -1.0;
    for (std::size_t i = 0; i < students.size(); ++i) {
      if (consumed[i]) continue;
      const double cs = pairwiseClassSimilarity(*students[i], *ca, cfg);
      if (!best || cs > bestCs + kScoreTieTolerance) {
        best = i;
        bestCs = cs;
      }
    }
    if (best && bestCs >= cfg.correspondenceThreshold - kScoreTieTolerance) {
      consumed[*best] = true;
      out.entries.push_back({ca->id, students[*best]->id, bestCs});
    }
  }
  for (std::size_t i = 0; i < students.size(); ++i) {
    if (!consumed[i]) out.nonCorrespondingStudentIds.push_back(students[i]->id);
  }
  return out;
}

LayoutResult transformLayout(const ClassDiagram& student, const ClassDiagram& answer,
                             const MatchConfig& cfg) {
  const CorrespondenceSet correspondences = findCorrespondences(student, answer, cfg);

  LayoutResult result;
  result.convertedDiagram = student;
  result.moves.reserve(student.classes.size());
  for (ClassNode& c : result.convertedDiagram.classes) {
    ClassMove move{c.id, 0, 0, false};
    if (const Correspondence* corr = correspondences.findByStudent(c.id)) {
      const ClassNode* target = answer.findClass(corr->answerClassId);
      move.x = target->x;
      move.y = target->y;
      move.corresponding = true;
    }
    c.x = move.x;
    c.y = move.y;
    result.moves.push_back(std::move(move));
  }
  return result;
}

ClassDiagram applyLayout(const ClassDiagram& student, const LayoutResult& layout) {
  std::unordered_map<std::string_view, const ClassMove*> moves;
  for (const ClassMove& m : layout.moves) moves.emplace(m.classId, &m);

  ClassDiagram out = student;
  for (ClassNode& c : out.classes) {
    const auto it = moves.find(c.id);
    if (it == moves.end()) throw StaleLayoutError(c.id);
    c.x = it->second->x;
    c.y = it->second->y;
    moves.erase(it);
  }
  if (!moves.empty()) {
    // Report the first leftover in move order.
    for (const ClassMove& m : layout.moves) {
      if (moves.contains(m.classId)) throw StaleLayoutError(m.classId);
    }
  }
  return out;
}

}  // namespace cdcoach
