#include "cdcoach/cdx.hpp"

#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "cdcoach/name_similarity.hpp"

namespace cdcoach {

namespace {

using nlohmann::json;

std::string indexPath(const std::string& base, std::string_view key, std::size_t index) {
  return base + "." + std::string(key) + "[" + std::to_string(index) + "]";
}

const json& requireField(const json& obj, const std::string& path, std::string_view key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw DiagramError(path + "." + std::string(key), "missing required field");
  }
  return *it;
}

std::string requireString(const json& obj, const std::string& path, std::string_view key) {
  const json& v = requireField(obj, path, key);
  if (!v.is_string()) {
    throw DiagramError(path + "." + std::string(key), "expected a string");
  }
  return v.get<std::string>();
}

int requireInt(const json& obj, const std::string& path, std::string_view key) {
  const json& v = requireField(obj, path, key);
  if (!v.is_number_integer()) {
    throw DiagramError(path + "." + std::string(key), "expected an integer");
  }
  const auto wide = v.get<std::int64_t>();
  if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
    throw DiagramError(path + "." + std::string(key), "integer out of range");
  }
  return static_cast<int>(wide);
}

const json& requireArray(const json& obj, const std::string& path, std::string_view key) {
  const json& v = requireField(obj, path, key);
  if (!v.is_array()) {
    throw DiagramError(path + "." + std::string(key), "expected an array");
  }
  return v;
}

void requireObject(const json& v, const std::string& path) {
  if (!v.is_object()) throw DiagramError(path, "expected an object");
}

Multiplicity optionalMultiplicity(const json& obj, const std::string& path, std::string_view key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw DiagramError(path + "." + std::string(key), "expected a multiplicity string");
  }
  return Multiplicity::fromToken(it->get<std::string>());
}

}  // namespace

DiagramError::DiagramError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

ClassDiagram decodeDiagram(const json& doc) {
  const std::string root = "$";
  requireObject(doc, root);
  const std::string format = requireString(doc, root, "format");
  if (format != kCdxFormat) {
    throw DiagramError("$.format", "unsupported format \"" + format + "\"");
  }

  ClassDiagram diagram;
  const json& classes = requireArray(doc, root, "classes");
  diagram.classes.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string path = indexPath(root, "classes", i);
    const json& c = classes[i];
    requireObject(c, path);
    ClassNode node;
    node.id = requireString(c, path, "id");
    node.name = requireString(c, path, "name");
    node.x = requireInt(c, path, "x");
    node.y = requireInt(c, path, "y");
    node.width = requireInt(c, path, "width");
    node.height = requireInt(c, path, "height");
    const json& attrs = requireArray(c, path, "attributes");
    node.attributes.reserve(attrs.size());
    for (std::size_t j = 0; j < attrs.size(); ++j) {
      const std::string apath = indexPath(path, "attributes", j);
      requireObject(attrs[j], apath);
      node.attributes.push_back(
          Attribute{requireString(attrs[j], apath, "id"), requireString(attrs[j], apath, "name")});
    }
    diagram.classes.push_back(std::move(node));
  }

  const json& rels = requireArray(doc, root, "relationships");
  diagram.relationships.reserve(rels.size());
  for (std::size_t i = 0; i < rels.size(); ++i) {
    const std::string path = indexPath(root, "relationships", i);
    const json& r = rels[i];
    requireObject(r, path);
    Relationship rel;
    rel.id = requireString(r, path, "id");
    if (const auto it = r.find("name"); it != r.end() && !it->is_null()) {
      if (!it->is_string()) throw DiagramError(path + ".name", "expected a string");
      rel.name = it->get<std::string>();
    }
    rel.endA = requireString(r, path, "endA");
    rel.endB = requireString(r, path, "endB");
    rel.multA = optionalMultiplicity(r, path, "multA");
    rel.multB = optionalMultiplicity(r, path, "multB");
    diagram.relationships.push_back(std::move(rel));
  }
  return diagram;
}

ClassDiagram decodeDiagram(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DiagramError("$", std::string("malformed JSON: ") + e.what());
  }
  return decodeDiagram(doc);
}

ClassDiagram parseDiagram(const json& doc) {
  ClassDiagram diagram = decodeDiagram(doc);
  const auto violations = validateDiagram(diagram);
  if (!violations.empty()) {
    throw DiagramError(violations.front().path, violations.front().message);
  }
  return diagram;
}

ClassDiagram parseDiagram(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DiagramError("$", std::string("malformed JSON: ") + e.what());
  }
  return parseDiagram(doc);
}

std::vector<Violation> validateDiagram(const ClassDiagram& diagram) {
  std::vector<Violation> out;
  // Element ids share one namespace across classes, attributes and relationships.
  std::unordered_set<std::string_view> seen;
  std::unordered_set<std::string_view> classIds;

  auto checkId = [&](const ElementId& id, const std::string& path) {
    if (!seen.insert(id).second) {
      out.push_back({id, "duplicate-id", path + ".id", "duplicate id \"" + id + "\""});
    }
  };
  auto checkName = [&](const ElementId& id, const std::string& name, const std::string& path) {
    if (normalizeName(name).text.empty()) {
      out.push_back({id, "empty-name", path + ".name", "name is empty"});
    }
  };

  for (std::size_t i = 0; i < diagram.classes.size(); ++i) {
    const ClassNode& c = diagram.classes[i];
    const std::string path = indexPath("$", "classes", i);
    checkId(c.id, path);
    classIds.insert(c.id);
    checkName(c.id, c.name, path);
    if (c.width <= 0 || c.height <= 0) {
      out.push_back({c.id, "non-positive-size", path, "width and height must be positive"});
    }
    for (std::size_t j = 0; j < c.attributes.size(); ++j) {
      const Attribute& a = c.attributes[j];
      const std::string apath = indexPath(path, "attributes", j);
      checkId(a.id, apath);
      checkName(a.id, a.name, apath);
    }
  }

  for (std::size_t i = 0; i < diagram.relationships.size(); ++i) {
    const Relationship& r = diagram.relationships[i];
    const std::string path = indexPath("$", "relationships", i);
    checkId(r.id, path);
    for (const auto& [end, key] : {std::pair{&r.endA, "endA"}, std::pair{&r.endB, "endB"}}) {
      if (!classIds.contains(*end)) {
        out.push_back({r.id, "dangling-end", path + "." + key,
                       "relationship end references unknown class \"" + *end + "\""});
      }
    }
    for (const auto& [mult, key] : {std::pair{&r.multA, "multA"}, std::pair{&r.multB, "multB"}}) {
      if (!mult->kind()) {
        out.push_back({r.id, "multiplicity-enum", path + "." + key,
                       "multiplicity \"" + *mult->token() +
                           "\" is not one of \"1\", \"0..1\", \"1..*\", \"*\""});
      }
    }
  }
  return out;
}

nlohmann::ordered_json diagramToJson(const ClassDiagram& diagram) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = kCdxFormat;
  doc["classes"] = ordered_json::array();
  for (const ClassNode& c : diagram.classes) {
    ordered_json node;
    node["id"] = c.id;
    node["name"] = c.name;
    node["x"] = c.x;
    node["y"] = c.y;
    node["width"] = c.width;
    node["height"] = c.height;
    node["attributes"] = ordered_json::array();
    for (const Attribute& a : c.attributes) {
      ordered_json attr;
      attr["id"] = a.id;
      attr["name"] = a.name;
      node["attributes"].push_back(std::move(attr));
    }
    doc["classes"].push_back(std::move(node));
  }
  doc["relationships"] = ordered_json::array();
  for (const Relationship& r : diagram.relationships) {
    ordered_json rel;
    rel["id"] = r.id;
    rel["name"] = r.name;
    rel["endA"] = r.endA;
    rel["endB"] = r.endB;
    if (!r.multA.isAbsent()) rel["multA"] = *r.multA.token();
    if (!r.multB.isAbsent()) rel["multB"] = *r.multB.token();
    doc["relationships"].push_back(std::move(rel));
  }
  return doc;
}

std::string serializeDiagram(const ClassDiagram& diagram) {
  return diagramToJson(diagram).dump(2) + "\n";
}

}  // namespace cdcoach
