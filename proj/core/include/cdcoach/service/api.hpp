#pragma once

// Transport-independent request handling for the exercise service.
//
//   POST /api/exercises                 instructor   {problemText, answerKey, vocabulary?}
//   GET  /api/exercises/{id}            any          ?includeAnswer=true (instructor only)
//   GET  /api/exercises/{id}/report     instructor
//   POST /api/sessions                  any          {exerciseId, learnerId, group?}
//   PUT  /api/sessions/{id}/diagram     any          cdx/1 body, appends an edit snapshot
//   POST /api/sessions/{id}/submit      any          appends a submit snapshot
//   POST /api/sessions/{id}/check       any          CheckResult, appends a check snapshot
//   GET  /api/sessions/{id}/analytics   instructor   ?interval=<seconds>
//
// Learner-reachable responses never carry similarity values.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>

#include "cdcoach/model.hpp"
#include "cdcoach/service/config.hpp"
#include "cdcoach/snapshot_store.hpp"
#include "cdcoach/timestamp.hpp"

namespace cdcoach::service {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string authorization;  // raw Authorization header value
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON, empty for 204
};

class ApiService {
 public:
  /// Loads previously stored exercises and sessions from cfg.storageRoot.
  explicit ApiService(ServiceConfig cfg, Clock clock = nowUtc);

  ApiResponse handle(const ApiRequest& request);

  const ServiceConfig& config() const { return cfg_; }
  const SnapshotStore& snapshots() const { return *store_; }

 private:
  std::optional<Role> authenticate(const std::string& authorization) const;

  ApiResponse createExercise(const ApiRequest& request);
  ApiResponse getExercise(const std::string& id, Role role, const ApiRequest& request);
  ApiResponse exerciseReport(const std::string& id);
  ApiResponse createSession(const ApiRequest& request);
  ApiResponse putDiagram(const std::string& id, const ApiRequest& request);
  ApiResponse submit(const std::string& id);
  ApiResponse check(const std::string& id);
  ApiResponse sessionAnalytics(const std::string& id, const ApiRequest& request);

  std::optional<Exercise> findExercise(const std::string& id) const;
  std::optional<Session> findSession(const std::string& id) const;
  std::mutex& sessionMutex(const std::string& id);
  std::string newId(const std::string& prefix);

  ServiceConfig cfg_;
  Clock clock_;
  std::unique_ptr<FileSnapshotStore> store_;

  mutable std::shared_mutex dataMutex_;
  std::map<std::string, Exercise> exercises_;
  std::map<std::string, Session> sessions_;

  std::mutex sessionMutexesGuard_;
  std::map<std::string, std::unique_ptr<std::mutex>> sessionMutexes_;

  std::mutex rngMutex_;
  std::mt19937_64 rng_;
};

}  // namespace cdcoach::service
