#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdcoach/layout.hpp"
#include "cdcoach/matching.hpp"
#include "cdcoach/model.hpp"

namespace cdcoach {

// red: some candidate matches exactly; blue: nothing in common; black: in between.
enum class NameColor { kRed, kBlack, kBlue };

std::string_view toString(NameColor color);

// What a learner sees after pressing check. Deliberately carries no
// similarity values.
struct CheckResult {
  std::vector<ClassMove> moves;
  std::map<ElementId, NameColor> classColors;
  std::map<ElementId, NameColor> attributeColors;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

NameColor colorForName(std::string_view name, std::span<const std::string> candidates,
                       SimilarityDenominator denominator = SimilarityDenominator::kBigramCount);

CheckResult buildCheckResult(const ClassDiagram& student, const ClassDiagram& answer,
                             const MatchConfig& cfg);

}  // namespace cdcoach
