#include "cdcoach/feedback.hpp"

#include <algorithm>

namespace cdcoach {

std::string_view toString(NameColor color) {
  switch (color) {
    case NameColor::kRed:
      return "red";
    case NameColor::kBlack:
      return "black";
    case NameColor::kBlue:
      return "blue";
  }
  return "blue";
}

NameColor colorForName(std::string_view name, std::span<const std::string> candidates,
                       SimilarityDenominator denominator) {
  double best = 0.0;
  for (const std::string& c : candidates) {
    best = std::max(best, nameSim(name, c, denominator));
    if (best == 1.0) return NameColor::kRed;
  }
  return best == 0.0 ? NameColor::kBlue : NameColor::kBlack;
}

CheckResult buildCheckResult(const ClassDiagram& student, const ClassDiagram& answer,
                             const MatchConfig& cfg) {
  const CorrespondenceSet correspondences = findCorrespondences(student, answer, cfg);
  LayoutResult layout = transformLayout(student, answer, cfg);

  std::vector<std::string> classNames;
  std::vector<std::string> allAttributeNames;
  for (const ClassNode& c : answer.classes) {
    classNames.push_back(c.name);
    for (const Attribute& a : c.attributes) allAttributeNames.push_back(a.name);
  }

  CheckResult result;
  result.moves = std::move(layout.moves);
  for (const ClassNode& c : student.classes) {
    result.classColors[c.id] = colorForName(c.name, classNames, cfg.denominator);

    std::vector<std::string> local;
    const std::vector<std::string>* pool = &allAttributeNames;
    if (const Correspondence* corr = correspondences.findByStudent(c.id)) {
      for (const Attribute& a : answer.findClass(corr->answerClassId)->attributes) {
        local.push_back(a.name);
      }
      pool = &local;
    }
    for (const Attribute& a : c.attributes) {
      result.attributeColors[a.id] = colorForName(a.name, *pool, cfg.denominator);
    }
  }
  return result;
}

}  // namespace cdcoach
