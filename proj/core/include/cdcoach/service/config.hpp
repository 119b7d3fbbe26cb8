#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdcoach/cas_table.hpp"
#include "cdcoach/matching.hpp"
#include "cdcoach/stats.hpp"

namespace cdcoach::service {

enum class Role { kLearner, kInstructor };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {
//   "listen": "127.0.0.1:8080",
//   "tokens": {"learner": ["..."], "instructor": ["..."]},
//   "storageRoot": "data",                       relative to the config file
//   "match": {"nameThreshold": 0.5, "correspondenceThreshold": 0.4},
//   "casTable": [{"a": "1", "b": "0..1", "value": 0.5}],
//   "tTest": "welch",
//   "analyticsIntervalSeconds": 60
// }
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> learnerTokens;
  std::vector<std::string> instructorTokens;
  MatchConfig match;
  CaSTable casTable = CaSTable::defaults();
  std::filesystem::path storageRoot = "data";
  TTestVariant tTest = TTestVariant::kWelch;
  std::int64_t analyticsIntervalSeconds = 60;
};

inline constexpr const char* kListenEnvVar = "CDCOACH_LISTEN";

/// Throws ConfigError. Relative storage roots resolve against `baseDir`.
ServiceConfig serviceConfigFromJson(const nlohmann::json& doc,
                                    const std::filesystem::path& baseDir = {});

/// Reads the file, then applies the CDCOACH_LISTEN override if set.
ServiceConfig loadServiceConfig(const std::filesystem::path& path);

/// Parses "host:port" (or ":port") into `cfg`. Throws ConfigError.
void applyListenAddress(ServiceConfig& cfg, const std::string& listen);

}  // namespace cdcoach::service
