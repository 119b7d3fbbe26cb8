#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdcoach/timestamp.hpp"

namespace cdcoach {

using ElementId = std::string;

struct Attribute {
  ElementId id;
  std::string name;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Screen-space pixels, origin top-left, y grows downward.
struct ClassNode {
  ElementId id;
  std::string name;
  std::vector<Attribute> attributes;
  int x = 0;
  int y = 0;
  int width = 1;
  int height = 1;

  friend bool operator==(const ClassNode&, const ClassNode&) = default;
};

enum class MultiplicityKind { kOne, kZeroOrOne, kOneOrMore, kMany, kAbsent };

// Multiplicity at one end of an association. Holds the raw token so that a
// decoded document with an out-of-enum token can still be reported by
// validateDiagram; kind() is empty for such tokens.
class Multiplicity {
 public:
  Multiplicity() = default;
  Multiplicity(MultiplicityKind kind);  // NOLINT(google-explicit-constructor)

  static Multiplicity fromToken(std::string token);

  bool isAbsent() const { return !token_.has_value(); }
  const std::optional<std::string>& token() const { return token_; }
  std::optional<MultiplicityKind> kind() const;

  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;

 private:
  std::optional<std::string> token_;
};

std::string_view toToken(MultiplicityKind kind);
std::optional<MultiplicityKind> multiplicityFromToken(std::string_view token);

// Undirected association. Carries no geometry, only its two end classes.
struct Relationship {
  ElementId id;
  std::string name;
  ElementId endA;
  ElementId endB;
  Multiplicity multA;
  Multiplicity multB;

  friend bool operator==(const Relationship&, const Relationship&) = default;
};

struct ClassDiagram {
  std::vector<ClassNode> classes;
  std::vector<Relationship> relationships;

  const ClassNode* findClass(std::string_view id) const;

  friend bool operator==(const ClassDiagram&, const ClassDiagram&) = default;
};

struct Exercise {
  std::string id;
  std::string problemText;
  ClassDiagram answerKey;
  std::optional<std::vector<std::string>> vocabulary;

  friend bool operator==(const Exercise&, const Exercise&) = default;
};

struct Session {
  std::string id;
  std::string exerciseId;
  std::string learnerId;
  Timestamp createdAt;
  // Optional cohort label used by instructor group comparisons.
  std::optional<std::string> group;

  friend bool operator==(const Session&, const Session&) = default;
};

}  // namespace cdcoach
