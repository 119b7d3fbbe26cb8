#pragma once

// Automatic layout conversion: move each student class onto the position of
// its corresponding answer class, park the rest at (0,0), leave everything
// else (names, attributes, sizes, relationships) untouched.

#include <stdexcept>
#include <vector>

#include "cdcoach/matching.hpp"
#include "cdcoach/model.hpp"

namespace cdcoach {

struct Correspondence {
  ElementId answerClassId;
  ElementId studentClassId;
  double cs = 0.0;

  friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

struct CorrespondenceSet {
  std::vector<Correspondence> entries;  // answer canonical order
  std::vector<ElementId> nonCorrespondingStudentIds;

  const Correspondence* findByStudent(std::string_view studentClassId) const;

  friend bool operator==(const CorrespondenceSet&, const CorrespondenceSet&) = default;
};

struct ClassMove {
  ElementId classId;
  int x = 0;
  int y = 0;
  bool corresponding = false;

  friend bool operator==(const ClassMove&, const ClassMove&) = default;
};

struct LayoutResult {
  std::vector<ClassMove> moves;  // student diagram order
  ClassDiagram convertedDiagram;

  friend bool operator==(const LayoutResult&, const LayoutResult&) = default;
};

// Raised by applyLayout when the diagram's classes no longer match the moves.
class StaleLayoutError : public std::runtime_error {
 public:
  explicit StaleLayoutError(ElementId id);

  const ElementId& id() const { return id_; }

 private:
  ElementId id_;
};

/// Answer classes, in canonical order, each pick the unconsumed student class
/// with the highest pairwiseClassSimilarity; accepted when it reaches
/// cfg.correspondenceThreshold. Ties prefer the lexicographically earlier
/// normalized student class name, then the smaller id.
CorrespondenceSet findCorrespondences(const ClassDiagram& student, const ClassDiagram& answer,
                                      const MatchConfig& cfg);

LayoutResult transformLayout(const ClassDiagram& student, const ClassDiagram& answer,
                             const MatchConfig& cfg);

/// Rewrites the class positions of `student` from `layout.moves`. Throws
/// StaleLayoutError naming the first class id present on one side only.
ClassDiagram applyLayout(const ClassDiagram& student, const LayoutResult& layout);

}  // namespace cdcoach
