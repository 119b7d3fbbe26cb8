#include "cdcoach/service/api.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "cdcoach/analytics.hpp"
#include "cdcoach/cdx.hpp"
#include "cdcoach/feedback.hpp"
#include "cdcoach/json_io.hpp"
#include "cdcoach/similarity.hpp"

namespace cdcoach::service {

namespace fs = std::filesystem;

namespace {

ApiResponse jsonResponse(int status, const OrderedJson& body) { return {status, body.dump()}; }

ApiResponse errorResponse(int status, const std::string& message,
                          const std::optional<std::string>& path = std::nullopt) {
  OrderedJson body;
  body["error"] = message;
  if (path) body["path"] = *path;
  return jsonResponse(status, body);
}

ApiResponse noContent() { return {204, {}}; }

std::vector<std::string> splitPath(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto end = slash == std::string::npos ? path.size() : slash;
    if (end > start) parts.push_back(path.substr(start, end - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return parts;
}

void writeFileDurably(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw StorageError("cannot write " + tmp.string());
  std::size_t written = 0;
  bool ok = true;
  while (ok && written < content.size()) {
    const ssize_t n = ::write(fd, content.data() + written, content.size() - written);
    if (n < 0) {
      ok = errno == EINTR;
      continue;
    }
    written += static_cast<std::size_t>(n);
  }
  ok = ok && ::fsync(fd) == 0;
  ::close(fd);
  if (!ok || std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw StorageError("cannot write " + path.string());
  }
}

nlohmann::json readJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw StorageError("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

std::string bearerToken(const std::string& header) {
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() <= kPrefix.size() || header.compare(0, kPrefix.size(), kPrefix) != 0) {
    return {};
  }
  return header.substr(kPrefix.size());
}

}  // namespace

ApiService::ApiService(ServiceConfig cfg, Clock clock)
    : cfg_(std::move(cfg)), clock_(std::move(clock)), rng_(std::random_device{}()) {
  cfg_.match.validate();
  fs::create_directories(cfg_.storageRoot / "exercises");
  fs::create_directories(cfg_.storageRoot / "session-meta");
  store_ = std::make_unique<FileSnapshotStore>(cfg_.storageRoot / "sessions", clock_);

  for (const auto& entry : fs::directory_iterator(cfg_.storageRoot / "exercises")) {
    if (entry.path().extension() != ".json") continue;
    Exercise ex = exerciseFromJson(readJsonFile(entry.path()));
    exercises_.emplace(ex.id, std::move(ex));
  }
  for (const auto& entry : fs::directory_iterator(cfg_.storageRoot / "session-meta")) {
    if (entry.path().extension() != ".json") continue;
    Session s = sessionFromJson(readJsonFile(entry.path()));
    sessions_.emplace(s.id, std::move(s));
  }
}

std::optional<Role> ApiService::authenticate(const std::string& authorization) const {
  const std::string token = bearerToken(authorization);
  if (token.empty()) return std::nullopt;
  auto has = [&](const std::vector<std::string>& tokens) {
    return std::find(tokens.begin(), tokens.end(), token) != tokens.end();
  };
  if (has(cfg_.instructorTokens)) return Role::kInstructor;
  if (has(cfg_.learnerTokens)) return Role::kLearner;
  return std::nullopt;
}

std::string ApiService::newId(const std::string& prefix) {
  std::lock_guard lock(rngMutex_);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng_()));
  return prefix + std::string(buf, 12);
}

std::optional<Exercise> ApiService::findExercise(const std::string& id) const {
  std::shared_lock lock(dataMutex_);
  const auto it = exercises_.find(id);
  if (it == exercises_.end()) return std::nullopt;
  return it->second;
}

std::optional<Session> ApiService::findSession(const std::string& id) const {
  std::shared_lock lock(dataMutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::mutex& ApiService::sessionMutex(const std::string& id) {
  std::lock_guard lock(sessionMutexesGuard_);
  auto& slot = sessionMutexes_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

ApiResponse ApiService::handle(const ApiRequest& request) {
  const auto parts = splitPath(request.path);
  if (parts.size() < 2 || parts[0] != "api") return errorResponse(404, "not found");

  const auto role = authenticate(request.authorization);
  if (!role) return errorResponse(401, "missing or unknown bearer token");
  const bool instructor = *role == Role::kInstructor;
  const std::string& method = request.method;

  try {
    if (parts[1] == "exercises") {
      if (parts.size() == 2) {
        if (method != "POST") return errorResponse(405, "method not allowed");
        if (!instructor) return errorResponse(403, "instructor role required");
        return createExercise(request);
      }
      if (parts.size() == 3) {
        if (method != "GET") return errorResponse(405, "method not allowed");
        return getExercise(parts[2], *role, request);
      }
      if (parts.size() == 4 && parts[3] == "report") {
        if (method != "GET") return errorResponse(405, "method not allowed");
        if (!instructor) return errorResponse(403, "instructor role required");
        return exerciseReport(parts[2]);
      }
    } else if (parts[1] == "sessions") {
      if (parts.size() == 2) {
        if (method != "POST") return errorResponse(405, "method not allowed");
        return createSession(request);
      }
      if (parts.size() == 4) {
        const std::string& id = parts[2];
        const std::string& action = parts[3];
        if (action == "diagram") {
          if (method != "PUT") return errorResponse(405, "method not allowed");
          return putDiagram(id, request);
        }
        if (action == "submit") {
          if (method != "POST") return errorResponse(405, "method not allowed");
          return submit(id);
        }
        if (action == "check") {
          if (method != "POST") return errorResponse(405, "method not allowed");
          return check(id);
        }
        if (action == "analytics") {
          if (method != "GET") return errorResponse(405, "method not allowed");
          if (!instructor) return errorResponse(403, "instructor role required");
          return sessionAnalytics(id, request);
        }
      }
    }
  } catch (const StorageError& e) {
    return errorResponse(500, e.what());
  }
  return errorResponse(404, "not found");
}

ApiResponse ApiService::createExercise(const ApiRequest& request) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(request.body);
  } catch (const nlohmann::json::parse_error& e) {
    return errorResponse(400, std::string("malformed JSON: ") + e.what());
  }
  Exercise ex;
  try {
    if (doc.is_object()) doc.erase("id");
    ex = exerciseFromJson(doc);
  } catch (const DiagramError& e) {
    return errorResponse(400, e.what(), "$.answerKey" + e.path().substr(1));
  } catch (const std::exception& e) {
    return errorResponse(400, e.what());
  }

  {
    std::unique_lock lock(dataMutex_);
    do {
      ex.id = newId("ex-");
    } while (exercises_.contains(ex.id));
    writeFileDurably(cfg_.storageRoot / "exercises" / (ex.id + ".json"), toJson(ex).dump(2));
    exercises_.emplace(ex.id, ex);
  }
  OrderedJson body;
  body["exerciseId"] = ex.id;
  return jsonResponse(201, body);
}

ApiResponse ApiService::getExercise(const std::string& id, Role role, const ApiRequest& request) {
  const auto ex = findExercise(id);
  if (!ex) return errorResponse(404, "unknown exercise \"" + id + "\"");
  OrderedJson body;
  body["exerciseId"] = ex->id;
  body["problemText"] = ex->problemText;
  if (ex->vocabulary) body["vocabulary"] = *ex->vocabulary;
  const auto flag = request.query.find("includeAnswer");
  if (role == Role::kInstructor && flag != request.query.end() && flag->second == "true") {
    body["answerKey"] = diagramToJson(ex->answerKey);
  }
  return jsonResponse(200, body);
}

ApiResponse ApiService::createSession(const ApiRequest& request) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(request.body);
  } catch (const nlohmann::json::parse_error& e) {
    return errorResponse(400, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("exerciseId") || !doc["exerciseId"].is_string() ||
      !doc.contains("learnerId") || !doc["learnerId"].is_string()) {
    return errorResponse(400, "body needs string fields exerciseId and learnerId");
  }
  Session s;
  s.exerciseId = doc["exerciseId"].get<std::string>();
  s.learnerId = doc["learnerId"].get<std::string>();
  if (const auto it = doc.find("group"); it != doc.end()) {
    if (!it->is_string()) return errorResponse(400, "group must be a string");
    s.group = it->get<std::string>();
  }
  if (!findExercise(s.exerciseId)) {
    return errorResponse(404, "unknown exercise \"" + s.exerciseId + "\"");
  }
  s.createdAt = clock_();

  {
    std::unique_lock lock(dataMutex_);
    do {
      s.id = newId("s-");
    } while (sessions_.contains(s.id));
    store_->createSession(s.id);
    writeFileDurably(cfg_.storageRoot / "session-meta" / (s.id + ".json"), toJson(s).dump(2));
    sessions_.emplace(s.id, s);
  }
  OrderedJson body;
  body["sessionId"] = s.id;
  return jsonResponse(201, body);
}

ApiResponse ApiService::putDiagram(const std::string& id, const ApiRequest& request) {
  if (!findSession(id)) return errorResponse(404, "unknown session \"" + id + "\"");
  ClassDiagram diagram;
  try {
    diagram = parseDiagram(request.body);
  } catch (const DiagramError& e) {
    return errorResponse(400, e.what(), e.path());
  }
  std::lock_guard lock(sessionMutex(id));
  store_->append(id, SnapshotEvent::kEdit, diagram);
  return noContent();
}

ApiResponse ApiService::submit(const std::string& id) {
  if (!findSession(id)) return errorResponse(404, "unknown session \"" + id + "\"");
  std::lock_guard lock(sessionMutex(id));
  const auto latest = store_->latest(id);
  if (!latest) return errorResponse(409, "no diagram has been saved in this session yet");
  store_->append(id, SnapshotEvent::kSubmit, latest->diagram);
  return noContent();
}

ApiResponse ApiService::check(const std::string& id) {
  const auto session = findSession(id);
  if (!session) return errorResponse(404, "unknown session \"" + id + "\"");
  const auto exercise = findExercise(session->exerciseId);
  if (!exercise) return errorResponse(404, "unknown exercise \"" + session->exerciseId + "\"");

  std::lock_guard lock(sessionMutex(id));
  const auto latest = store_->latest(id);
  if (!latest) return errorResponse(409, "no diagram has been saved in this session yet");
  const CheckResult result = buildCheckResult(latest->diagram, exercise->answerKey, cfg_.match);
  store_->append(id, SnapshotEvent::kCheck, latest->diagram);
  return jsonResponse(200, toJson(result));
}

ApiResponse ApiService::sessionAnalytics(const std::string& id, const ApiRequest& request) {
  const auto session = findSession(id);
  if (!session) return errorResponse(404, "unknown session \"" + id + "\"");
  const auto exercise = findExercise(session->exerciseId);
  if (!exercise) return errorResponse(404, "unknown exercise \"" + session->exerciseId + "\"");

  std::int64_t interval = cfg_.analyticsIntervalSeconds;
  if (const auto it = request.query.find("interval"); it != request.query.end()) {
    try {
      std::size_t used = 0;
      interval = std::stoll(it->second, &used);
      if (used != it->second.size() || interval <= 0) throw std::invalid_argument("interval");
    } catch (const std::exception&) {
      return errorResponse(400, "interval must be a positive integer");
    }
  }

  const auto records = store_->list(id);
  OrderedJson body;
  body["sessionId"] = id;
  body["series"] = records.empty()
                       ? OrderedJson::array()
                       : toJson(similaritySeries(records, exercise->answerKey, cfg_.match,
                                                 cfg_.casTable, interval));
  body["checkCount"] = std::count_if(records.begin(), records.end(), [](const auto& r) {
    return r.event == SnapshotEvent::kCheck;
  });
  body["snapshotCount"] = records.size();
  return jsonResponse(200, body);
}

ApiResponse ApiService::exerciseReport(const std::string& id) {
  const auto exercise = findExercise(id);
  if (!exercise) return errorResponse(404, "unknown exercise \"" + id + "\"");

  std::vector<Session> sessions;
  {
    std::shared_lock lock(dataMutex_);
    for (const auto& [_, s] : sessions_) {
      if (s.exerciseId == id) sessions.push_back(s);
    }
  }

  std::vector<const Session*> scored;
  std::vector<SimilarityReport> reports;
  for (const Session& s : sessions) {
    const auto latest = store_->latest(s.id);
    if (!latest) continue;
    scored.push_back(&s);
    reports.push_back(
        classDiagramSimilarity(latest->diagram, exercise->answerKey, cfg_.match, cfg_.casTable));
  }

  OrderedJson perStudent = OrderedJson::array();
  std::map<std::string, std::vector<const SimilarityReport*>> byGroup;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const Session& s = *scored[i];
    OrderedJson entry;
    entry["sessionId"] = s.id;
    entry["learnerId"] = s.learnerId;
    if (s.group) {
      entry["group"] = *s.group;
      byGroup[*s.group].push_back(&reports[i]);
    }
    entry["report"] = toJson(reports[i]);
    perStudent.push_back(std::move(entry));
  }

  OrderedJson body;
  body["exerciseId"] = id;
  body["perStudent"] = std::move(perStudent);
  body["perClassAverages"] = reports.empty()
                                 ? OrderedJson::object()
                                 : toJson(perClassAverages(reports, exercise->answerKey));

  if (byGroup.size() == 2) {
    const auto& [labelA, groupA] = *byGroup.begin();
    const auto& [labelB, groupB] = *std::next(byGroup.begin());
    auto values = [](const std::vector<const SimilarityReport*>& group) {
      std::vector<SimilarityReport> out;
      for (const SimilarityReport* r : group) out.push_back(*r);
      return out;
    };
    OrderedJson cmp;
    cmp["groupA"] = labelA;
    cmp["groupB"] = labelB;
    cmp.update(compareReports(values(groupA), values(groupB), cfg_.tTest));
    body["groupComparison"] = std::move(cmp);
  }
  return jsonResponse(200, body);
}

}  // namespace cdcoach::service
