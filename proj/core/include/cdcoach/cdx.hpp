#pragma once

// Reader, writer and validator for the "cdx/1" diagram interchange format.
//
//   {"format":"cdx/1",
//    "classes":[{"id","name","x","y","width","height","attributes":[{"id","name"}]}],
//    "relationships":[{"id","name"?,"endA","endB","multA"?,"multB"?}]}
//
// Relationship "name" and the multiplicities are optional; every other field
// is required. Unknown fields are ignored. The writer emits keys in exactly
// the order shown above, lists in stored order, two-space indentation and a
// trailing newline, so equal diagrams serialize to identical bytes.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdcoach/model.hpp"

namespace cdcoach {

inline constexpr std::string_view kCdxFormat = "cdx/1";

struct Violation {
  ElementId elementId;
  std::string rule;  // duplicate-id, dangling-end, multiplicity-enum, empty-name, non-positive-size
  std::string path;  // JSON path of the offending element, e.g. $.classes[1].id
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Raised by the parse functions. what() is "<path>: <message>".
class DiagramError : public std::runtime_error {
 public:
  DiagramError(std::string path, const std::string& message);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Reads the document structure only: field presence and types. Semantic
/// invariants (ids, references, multiplicity tokens) are left to
/// validateDiagram so callers can list every violation.
ClassDiagram decodeDiagram(const nlohmann::json& doc);
ClassDiagram decodeDiagram(std::string_view text);
inline ClassDiagram decodeDiagram(const std::string& text) {
  return decodeDiagram(std::string_view(text));
}

/// decodeDiagram followed by validateDiagram; throws DiagramError on the
/// first violation.
ClassDiagram parseDiagram(const nlohmann::json& doc);
ClassDiagram parseDiagram(std::string_view text);
inline ClassDiagram parseDiagram(const std::string& text) {
  return parseDiagram(std::string_view(text));
}

std::vector<Violation> validateDiagram(const ClassDiagram& diagram);

nlohmann::ordered_json diagramToJson(const ClassDiagram& diagram);
std::string serializeDiagram(const ClassDiagram& diagram);

}  // namespace cdcoach
