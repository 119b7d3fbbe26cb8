#include "cdcoach/service/config.hpp"

#include <cstdlib>
#include <fstream>

#include "cdcoach/json_io.hpp"

namespace cdcoach::service {

namespace {

std::vector<std::string> tokenList(const nlohmann::json& tokens, const char* role) {
  const auto it = tokens.find(role);
  if (it == tokens.end()) return {};
  if (!it->is_array()) throw ConfigError(std::string("tokens.") + role + " must be an array");
  std::vector<std::string> out;
  for (const auto& t : *it) {
    if (!t.is_string() || t.get<std::string>().empty()) {
      throw ConfigError(std::string("tokens.") + role + " must hold non-empty strings");
    }
    out.push_back(t.get<std::string>());
  }
  return out;
}

}  // namespace

void applyListenAddress(ServiceConfig& cfg, const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError("listen address must be host:port");
  const std::string host = listen.substr(0, colon);
  const std::string portText = listen.substr(colon + 1);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(portText, &used);
    if (used != portText.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ConfigError("invalid port in listen address \"" + listen + "\"");
  }
  if (port < 0 || port > 65535) throw ConfigError("port out of range in \"" + listen + "\"");
  cfg.host = host.empty() ? "0.0.0.0" : host;
  cfg.port = port;
}

ServiceConfig serviceConfigFromJson(const nlohmann::json& doc,
                                    const std::filesystem::path& baseDir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ServiceConfig cfg;
  try {
    if (const auto it = doc.find("listen"); it != doc.end()) {
      if (!it->is_string()) throw ConfigError("listen must be a string");
      applyListenAddress(cfg, it->get<std::string>());
    }
    if (const auto it = doc.find("tokens"); it != doc.end()) {
      if (!it->is_object()) throw ConfigError("tokens must be an object");
      cfg.learnerTokens = tokenList(*it, "learner");
      cfg.instructorTokens = tokenList(*it, "instructor");
    }
    if (cfg.instructorTokens.empty()) throw ConfigError("at least one instructor token is required");
    if (const auto it = doc.find("storageRoot"); it != doc.end()) {
      if (!it->is_string()) throw ConfigError("storageRoot must be a string");
      cfg.storageRoot = it->get<std::string>();
    }
    if (cfg.storageRoot.is_relative() && !baseDir.empty()) {
      cfg.storageRoot = baseDir / cfg.storageRoot;
    }
    if (const auto it = doc.find("match"); it != doc.end()) {
      cfg.match = matchConfigFromJson(*it);
    }
    if (const auto it = doc.find("casTable"); it != doc.end()) {
      cfg.casTable = casTableFromJson(*it);
    }
    if (const auto it = doc.find("tTest"); it != doc.end()) {
      const auto variant =
          it->is_string() ? tTestVariantFromString(it->get<std::string>()) : std::nullopt;
      if (!variant) throw ConfigError("tTest must be \"welch\" or \"student\"");
      cfg.tTest = *variant;
    }
    if (const auto it = doc.find("analyticsIntervalSeconds"); it != doc.end()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() <= 0) {
        throw ConfigError("analyticsIntervalSeconds must be a positive integer");
      }
      cfg.analyticsIntervalSeconds = it->get<std::int64_t>();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ServiceConfig loadServiceConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  ServiceConfig cfg = serviceConfigFromJson(doc, path.parent_path());
  if (const char* listen = std::getenv(kListenEnvVar); listen != nullptr && *listen != '\0') {
    applyListenAddress(cfg, listen);
  }
  return cfg;
}

}  // namespace cdcoach::service
