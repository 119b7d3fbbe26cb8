#include "cdcoach/json_io.hpp"

#include <stdexcept>

#include "cdcoach/cdx.hpp"

namespace cdcoach {

namespace {

OrderedJson optionalId(const std::optional<ElementId>& id) {
  return id ? OrderedJson(*id) : OrderedJson(nullptr);
}

MultiplicityKind kindFromJson(const nlohmann::json& v) {
  if (!v.is_string()) throw std::invalid_argument("multiplicity must be a string");
  const auto text = v.get<std::string>();
  if (text == "absent") return MultiplicityKind::kAbsent;
  if (const auto kind = multiplicityFromToken(text)) return *kind;
  throw std::invalid_argument("unknown multiplicity \"" + text + "\"");
}

double numberIn(const nlohmann::json& doc, const char* key, double fallback) {
  const auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number()) throw std::invalid_argument(std::string(key) + " must be a number");
  return it->get<double>();
}

}  // namespace

OrderedJson toJson(const SimilarityReport& report) {
  OrderedJson out;
  out["cds"] = report.cds;
  out["csAll"] = report.csAll;
  out["rsAll"] = report.rsAll;
  out["nmc"] = report.nmc;
  out["nmr"] = report.nmr;
  out["perClass"] = OrderedJson::array();
  for (const ClassScore& s : report.perClass) {
    out["perClass"].push_back(
        {{"studentClassId", s.studentClassId}, {"answerClassId", optionalId(s.answerClassId)},
         {"cs", s.cs}});
  }
  out["perRelationship"] = OrderedJson::array();
  for (const RelationshipScore& s : report.perRelationship) {
    out["perRelationship"].push_back(
        {{"studentRelId", s.studentRelId}, {"answerRelId", optionalId(s.answerRelId)},
         {"rs", s.rs}});
  }
  out["nma"] = OrderedJson::array();
  for (const MissingAttributes& m : report.nma) {
    out["nma"].push_back({{"studentClassId", m.studentClassId},
                          {"answerClassId", m.answerClassId},
                          {"count", m.count}});
  }
  return out;
}

OrderedJson toJson(const GroupComparison& c) {
  OrderedJson out;
  out["meanA"] = c.meanA;
  out["meanB"] = c.meanB;
  out["t"] = c.t;
  out["df"] = c.df;
  out["pTwoTailed"] = c.pTwoTailed;
  out["nA"] = c.nA;
  out["nB"] = c.nB;
  return out;
}

OrderedJson compareReports(std::span<const SimilarityReport> a, std::span<const SimilarityReport> b,
                           TTestVariant variant) {
  auto column = [](std::span<const SimilarityReport> reports, double SimilarityReport::*field) {
    std::vector<double> out;
    out.reserve(reports.size());
    for (const SimilarityReport& r : reports) out.push_back(r.*field);
    return out;
  };
  OrderedJson out;
  out["variant"] = toString(variant);
  const std::pair<const char*, double SimilarityReport::*> metrics[] = {
      {"cds", &SimilarityReport::cds},
      {"csAll", &SimilarityReport::csAll},
      {"rsAll", &SimilarityReport::rsAll}};
  for (const auto& [name, field] : metrics) {
    try {
      out[name] = toJson(tTestTwoTailed(column(a, field), column(b, field), variant));
    } catch (const StatisticsError& e) {
      out[name] = {{"error", e.what()}};
    }
  }
  return out;
}

OrderedJson toJson(const SimilaritySeries& series) {
  OrderedJson out = OrderedJson::array();
  for (const SeriesPoint& p : series.points) {
    out.push_back({{"elapsedSeconds", p.elapsedSeconds},
                   {"cds", p.cds},
                   {"csAll", p.csAll},
                   {"rsAll", p.rsAll}});
  }
  return out;
}

OrderedJson toJson(const std::map<std::string, double>& averages) {
  OrderedJson out = OrderedJson::object();
  for (const auto& [name, value] : averages) out[name] = value;
  return out;
}

OrderedJson toJson(const CheckResult& result) {
  OrderedJson out;
  out["moves"] = OrderedJson::array();
  for (const ClassMove& m : result.moves) {
    out["moves"].push_back(
        {{"classId", m.classId}, {"x", m.x}, {"y", m.y}, {"corresponding", m.corresponding}});
  }
  out["classColors"] = OrderedJson::object();
  for (const auto& [id, color] : result.classColors) out["classColors"][id] = toString(color);
  out["attributeColors"] = OrderedJson::object();
  for (const auto& [id, color] : result.attributeColors) {
    out["attributeColors"][id] = toString(color);
  }
  return out;
}

MatchConfig matchConfigFromJson(const nlohmann::json& doc, MatchConfig base) {
  if (!doc.is_object()) throw std::invalid_argument("match config must be an object");
  base.nameThreshold = numberIn(doc, "nameThreshold", base.nameThreshold);
  base.correspondenceThreshold =
      numberIn(doc, "correspondenceThreshold", base.correspondenceThreshold);
  if (const auto it = doc.find("denominator"); it != doc.end()) {
    const auto text = it->is_string() ? it->get<std::string>() : std::string();
    if (text == "bigram-count") {
      base.denominator = SimilarityDenominator::kBigramCount;
    } else if (text == "string-length") {
      base.denominator = SimilarityDenominator::kStringLength;
    } else {
      throw std::invalid_argument("denominator must be \"bigram-count\" or \"string-length\"");
    }
  }
  base.validate();
  return base;
}

OrderedJson toJson(const MatchConfig& cfg) {
  OrderedJson out;
  out["nameThreshold"] = cfg.nameThreshold;
  out["correspondenceThreshold"] = cfg.correspondenceThreshold;
  out["denominator"] =
      cfg.denominator == SimilarityDenominator::kBigramCount ? "bigram-count" : "string-length";
  return out;
}

CaSTable casTableFromJson(const nlohmann::json& doc) {
  if (!doc.is_array()) throw std::invalid_argument("multiplicity table must be an array");
  CaSTable table = CaSTable::defaults();
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("a") || !entry.contains("b") ||
        !entry.contains("value") || !entry["value"].is_number()) {
      throw std::invalid_argument("multiplicity table entries need \"a\", \"b\" and \"value\"");
    }
    table.set(kindFromJson(entry["a"]), kindFromJson(entry["b"]), entry["value"].get<double>());
  }
  return table;
}

OrderedJson toJson(const Exercise& exercise) {
  OrderedJson out;
  out["id"] = exercise.id;
  out["problemText"] = exercise.problemText;
  out["answerKey"] = diagramToJson(exercise.answerKey);
  if (exercise.vocabulary) out["vocabulary"] = *exercise.vocabulary;
  return out;
}

Exercise exerciseFromJson(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("exercise must be an object");
  Exercise ex;
  if (const auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string()) throw std::invalid_argument("exercise id must be a string");
    ex.id = it->get<std::string>();
  }
  const auto text = doc.find("problemText");
  if (text == doc.end() || !text->is_string()) {
    throw std::invalid_argument("problemText must be a string");
  }
  ex.problemText = text->get<std::string>();
  const auto key = doc.find("answerKey");
  if (key == doc.end()) throw std::invalid_argument("missing answerKey");
  ex.answerKey = parseDiagram(*key);
  if (const auto it = doc.find("vocabulary"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) throw std::invalid_argument("vocabulary must be an array of strings");
    std::vector<std::string> words;
    for (const auto& w : *it) {
      if (!w.is_string()) throw std::invalid_argument("vocabulary must be an array of strings");
      words.push_back(w.get<std::string>());
    }
    if (words.empty()) throw std::invalid_argument("vocabulary, when present, must be non-empty");
    ex.vocabulary = std::move(words);
  }
  return ex;
}

OrderedJson toJson(const Session& session) {
  OrderedJson out;
  out["id"] = session.id;
  out["exerciseId"] = session.exerciseId;
  out["learnerId"] = session.learnerId;
  out["createdAt"] = formatTimestamp(session.createdAt);
  if (session.group) out["group"] = *session.group;
  return out;
}

Session sessionFromJson(const nlohmann::json& doc) {
  Session s;
  s.id = doc.at("id").get<std::string>();
  s.exerciseId = doc.at("exerciseId").get<std::string>();
  s.learnerId = doc.at("learnerId").get<std::string>();
  const auto ts = parseTimestamp(doc.at("createdAt").get<std::string>());
  if (!ts) throw std::invalid_argument("bad createdAt timestamp");
  s.createdAt = *ts;
  if (const auto it = doc.find("group"); it != doc.end() && it->is_string()) {
    s.group = it->get<std::string>();
  }
  return s;
}

}  // namespace cdcoach
