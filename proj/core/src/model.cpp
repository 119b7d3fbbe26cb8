#include "cdcoach/model.hpp"

#include <algorithm>

namespace cdcoach {

std::string_view toToken(MultiplicityKind kind) {
  switch (kind) {
    case MultiplicityKind::kOne:
      return "1";
    case MultiplicityKind::kZeroOrOne:
      return "0..1";
    case MultiplicityKind::kOneOrMore:
      return "1..*";
    case MultiplicityKind::kMany:
      return "*";
    case MultiplicityKind::kAbsent:
      break;
  }
  return "";
}

std::optional<MultiplicityKind> multiplicityFromToken(std::string_view token) {
  if (token == "1") return MultiplicityKind::kOne;
  if (token == "0..1") return MultiplicityKind::kZeroOrOne;
  if (token == "1..*") return MultiplicityKind::kOneOrMore;
  if (token == "*") return MultiplicityKind::kMany;
  return std::nullopt;
}

Multiplicity::Multiplicity(MultiplicityKind kind) {
  if (kind != MultiplicityKind::kAbsent) token_ = std::string(toToken(kind));
}

Multiplicity Multiplicity::fromToken(std::string token) {
  Multiplicity m;
  m.token_ = std::move(token);
  return m;
}

std::optional<MultiplicityKind> Multiplicity::kind() const {
  if (!token_) return MultiplicityKind::kAbsent;
  return multiplicityFromToken(*token_);
}

const ClassNode* ClassDiagram::findClass(std::string_view id) const {
  const auto it =
      std::find_if(classes.begin(), classes.end(), [&](const ClassNode& c) { return c.id == id; });
  return it == classes.end() ? nullptr : &*it;
}

}  // namespace cdcoach
