#pragma once

// JSON encodings shared by the CLI and the HTTP service.

#include <map>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "cdcoach/analytics.hpp"
#include "cdcoach/cas_table.hpp"
#include "cdcoach/feedback.hpp"
#include "cdcoach/matching.hpp"
#include "cdcoach/model.hpp"
#include "cdcoach/similarity.hpp"
#include "cdcoach/stats.hpp"

namespace cdcoach {

using OrderedJson = nlohmann::ordered_json;

OrderedJson toJson(const SimilarityReport& report);
OrderedJson toJson(const GroupComparison& comparison);

/// Two-tailed t-tests of CDS, CS_all and RS_all between two groups of
/// reports: {"variant", "cds", "csAll", "rsAll"}. A metric on which the test
/// is undefined holds {"error": message} instead of the comparison.
OrderedJson compareReports(std::span<const SimilarityReport> a, std::span<const SimilarityReport> b,
                           TTestVariant variant);
OrderedJson toJson(const SimilaritySeries& series);
OrderedJson toJson(const std::map<std::string, double>& averages);

/// {"moves":[{"classId","x","y","corresponding"}],"classColors":{..},"attributeColors":{..}}
/// The only numbers are pixel coordinates.
OrderedJson toJson(const CheckResult& result);

/// Reads {"nameThreshold"?, "correspondenceThreshold"?, "denominator"?:
/// "bigram-count"|"string-length"} over `base`. Throws std::invalid_argument.
MatchConfig matchConfigFromJson(const nlohmann::json& doc, MatchConfig base = {});
OrderedJson toJson(const MatchConfig& cfg);

/// Reads a list of overrides [{"a":"1","b":"0..1","value":0.5}, ...] applied
/// over the default table; "absent" names the missing multiplicity.
/// Throws std::invalid_argument.
CaSTable casTableFromJson(const nlohmann::json& doc);

OrderedJson toJson(const Exercise& exercise);
/// Throws std::invalid_argument, or DiagramError for a bad answer key.
Exercise exerciseFromJson(const nlohmann::json& doc);

OrderedJson toJson(const Session& session);
Session sessionFromJson(const nlohmann::json& doc);

}  // namespace cdcoach
