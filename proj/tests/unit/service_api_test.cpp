#include "cdcoach/service/api.hpp"

#include <gtest/gtest.h>

#include <httplib.h>
#include <set>
#include <thread>

#include "cdcoach/service/server.hpp"
#include "cdcoach/snapshot_store.hpp"
#include "test_support.hpp"

using namespace cdcoach;
using namespace cdcoach::service;
using nlohmann::json;
using testing_support::readFile;
using testing_support::sourcePath;
using testing_support::TempDir;

namespace {

constexpr const char* kLearner = "Bearer learner-token";
constexpr const char* kInstructor = "Bearer instructor-token";

ServiceConfig configFor(const TempDir& dir) {
  ServiceConfig cfg;
  cfg.learnerTokens = {"learner-token"};
  cfg.instructorTokens = {"instructor-token"};
  cfg.storageRoot = dir.path();
  return cfg;
}

// Clock advancing 20 s per call so analytics has distinct timestamps.
Clock steppingClock() {
  auto t = std::make_shared<Timestamp>(Timestamp{} + std::chrono::seconds(1'700'000'000));
  return [t] {
    *t += std::chrono::seconds(20);
    return *t;
  };
}

ApiResponse call(ApiService& api, std::string method, std::string path, const char* auth,
                 std::string body = "", std::map<std::string, std::string> query = {}) {
  return api.handle({std::move(method), std::move(path), std::move(query), auth ? auth : "",
                     std::move(body)});
}

std::string exerciseBody() {
  const json ex = json::parse(readFile(sourcePath("data/wakaba/exercise.json")));
  return json{{"problemText", ex["problemText"]}, {"answerKey", ex["answerKey"]}}.dump();
}

std::string studentBody() { return readFile(sourcePath("data/wakaba/student-four-classes.json")); }

bool containsKey(const json& doc, const std::string& key) {
  if (doc.is_object()) {
    for (const auto& [k, v] : doc.items()) {
      if (k == key || containsKey(v, key)) return true;
    }
  } else if (doc.is_array()) {
    for (const auto& v : doc) {
      if (containsKey(v, key)) return true;
    }
  }
  return false;
}

struct Fixture {
  TempDir dir;
  ApiService api{configFor(dir), steppingClock()};

  std::string exercise() {
    const auto r = call(api, "POST", "/api/exercises", kInstructor, exerciseBody());
    EXPECT_EQ(r.status, 201) << r.body;
    return json::parse(r.body)["exerciseId"];
  }
  std::string session(const std::string& exerciseId, const std::string& learner,
                      std::optional<std::string> group = std::nullopt) {
    json body{{"exerciseId", exerciseId}, {"learnerId", learner}};
    if (group) body["group"] = *group;
    const auto r = call(api, "POST", "/api/sessions", kLearner, body.dump());
    EXPECT_EQ(r.status, 201) << r.body;
    return json::parse(r.body)["sessionId"];
  }
};

}  // namespace

TEST(ServiceApi, AuthenticationAndRoles) {
  Fixture f;
  EXPECT_EQ(call(f.api, "POST", "/api/exercises", nullptr, exerciseBody()).status, 401);
  EXPECT_EQ(call(f.api, "POST", "/api/exercises", "Bearer nope", exerciseBody()).status, 401);
  EXPECT_EQ(call(f.api, "POST", "/api/exercises", kLearner, exerciseBody()).status, 403);
  const std::string ex = f.exercise();
  EXPECT_EQ(call(f.api, "GET", "/api/exercises/" + ex + "/report", kLearner).status, 403);
  EXPECT_EQ(call(f.api, "DELETE", "/api/exercises/" + ex, kInstructor).status, 405);
  EXPECT_EQ(call(f.api, "GET", "/api/nothing", kInstructor).status, 404);
  EXPECT_EQ(call(f.api, "GET", "/api/exercises/ex-missing", kInstructor).status, 404);
}

TEST(ServiceApi, AnswerKeyOnlyForInstructorOnRequest) {
  Fixture f;
  const std::string ex = f.exercise();
  const auto learner = call(f.api, "GET", "/api/exercises/" + ex, kLearner, "", {{"includeAnswer", "true"}});
  EXPECT_EQ(learner.status, 200);
  EXPECT_FALSE(json::parse(learner.body).contains("answerKey"));
  const auto plain = json::parse(call(f.api, "GET", "/api/exercises/" + ex, kLearner).body);
  EXPECT_FALSE(plain.contains("answerKey"));
  EXPECT_FALSE(plain["problemText"].get<std::string>().empty());
  const auto full = json::parse(
      call(f.api, "GET", "/api/exercises/" + ex, kInstructor, "", {{"includeAnswer", "true"}}).body);
  EXPECT_EQ(full["answerKey"]["classes"].size(), 6u);
}

TEST(ServiceApi, InvalidAnswerKeyReportsPath) {
  Fixture f;
  json body = json::parse(exerciseBody());
  body["answerKey"]["relationships"][0]["endB"] = "c9";
  const auto r = call(f.api, "POST", "/api/exercises", kInstructor, body.dump());
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(json::parse(r.body)["path"], "$.answerKey.relationships[0].endB");
  EXPECT_EQ(call(f.api, "POST", "/api/exercises", kInstructor, "{oops").status, 400);
}

TEST(ServiceApi, SessionLifecycle) {
  Fixture f;
  const std::string ex = f.exercise();
  EXPECT_EQ(call(f.api, "POST", "/api/sessions", kLearner, R"({"exerciseId":"ex-x","learnerId":"l"})").status,
            404);
  const std::string s = f.session(ex, "learner-1");

  EXPECT_EQ(call(f.api, "POST", "/api/sessions/" + s + "/check", kLearner).status, 409);
  EXPECT_EQ(call(f.api, "PUT", "/api/sessions/" + s + "/diagram", kLearner, "{}").status, 400);
  EXPECT_EQ(call(f.api, "PUT", "/api/sessions/" + s + "/diagram", kLearner, studentBody()).status, 204);

  const auto check = call(f.api, "POST", "/api/sessions/" + s + "/check", kLearner);
  ASSERT_EQ(check.status, 200);
  const json result = json::parse(check.body);
  EXPECT_EQ(result["moves"].size(), 4u);
  for (const char* key : {"cds", "csAll", "rsAll", "cs", "similarity"}) {
    EXPECT_FALSE(containsKey(result, key)) << key;
  }

  // Submitting does not close the session; the log simply gains a submit record.
  EXPECT_EQ(call(f.api, "POST", "/api/sessions/" + s + "/submit", kLearner).status, 204);
  EXPECT_EQ(readSnapshotLog(f.dir / "sessions" / (s + ".jsonl")).back().event, SnapshotEvent::kSubmit);
  EXPECT_EQ(call(f.api, "PUT", "/api/sessions/" + s + "/diagram", kLearner, studentBody()).status, 204);
  EXPECT_EQ(call(f.api, "POST", "/api/sessions/nope/check", kLearner).status, 404);
}

TEST(ServiceApi, AnalyticsCountsSnapshotsAndChecks) {
  Fixture f;
  const std::string s = f.session(f.exercise(), "learner-1");
  for (int i = 0; i < 3; ++i) {
    ASSERT_EQ(call(f.api, "PUT", "/api/sessions/" + s + "/diagram", kLearner, studentBody()).status, 204);
  }
  ASSERT_EQ(call(f.api, "POST", "/api/sessions/" + s + "/check", kLearner).status, 200);

  EXPECT_EQ(call(f.api, "GET", "/api/sessions/" + s + "/analytics", kLearner).status, 403);
  const auto r = call(f.api, "GET", "/api/sessions/" + s + "/analytics", kInstructor, "",
                      {{"interval", "30"}});
  ASSERT_EQ(r.status, 200) << r.body;
  const json doc = json::parse(r.body);
  EXPECT_EQ(doc["snapshotCount"], 4);
  EXPECT_EQ(doc["checkCount"], 1);
  EXPECT_FALSE(doc["series"].empty());
  EXPECT_EQ(call(f.api, "GET", "/api/sessions/" + s + "/analytics", kInstructor, "",
                 {{"interval", "0"}}).status,
            400);
}

TEST(ServiceApi, ReportComparesTwoGroups) {
  Fixture f;
  const std::string ex = f.exercise();
  const json answer = json::parse(readFile(sourcePath("data/wakaba/answer.json")));
  // Group A submits most of the answer, group B only its first few classes.
  auto prefix = [&](std::size_t k) {
    json d = answer;
    d["classes"] = json(std::vector<json>(answer["classes"].begin(), answer["classes"].begin() + k));
    std::set<std::string> ids;
    for (const auto& c : d["classes"]) ids.insert(c["id"].get<std::string>());
    d["relationships"] = json::array();
    for (const auto& r : answer["relationships"]) {
      if (ids.contains(r["endA"].get<std::string>()) && ids.contains(r["endB"].get<std::string>())) {
        d["relationships"].push_back(r);
      }
    }
    return d;
  };
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string a = f.session(ex, "a" + std::to_string(i), "A");
    ASSERT_EQ(call(f.api, "PUT", "/api/sessions/" + a + "/diagram", kLearner, prefix(4 + i).dump()).status, 204);
    const std::string b = f.session(ex, "b" + std::to_string(i), "B");
    ASSERT_EQ(call(f.api, "PUT", "/api/sessions/" + b + "/diagram", kLearner, prefix(1 + i).dump()).status, 204);
  }
  f.session(ex, "idle");  // no snapshots, excluded

  const auto r = call(f.api, "GET", "/api/exercises/" + ex + "/report", kInstructor);
  ASSERT_EQ(r.status, 200) << r.body;
  const json doc = json::parse(r.body);
  EXPECT_EQ(doc["perStudent"].size(), 6u);
  EXPECT_EQ(doc["perClassAverages"].size(), 6u);
  ASSERT_TRUE(doc.contains("groupComparison")) << r.body;
  EXPECT_EQ(doc["groupComparison"]["groupA"], "A");
  for (const char* metric : {"cds", "csAll", "rsAll"}) {
    EXPECT_FALSE(doc["groupComparison"][metric].contains("error")) << metric;
  }
  EXPECT_GT(doc["groupComparison"]["cds"]["meanA"].get<double>(),
            doc["groupComparison"]["cds"]["meanB"].get<double>());
}

TEST(ServiceApi, StateSurvivesRestart) {
  TempDir dir;
  std::string ex;
  std::string s;
  {
    ApiService api(configFor(dir), steppingClock());
    const auto r = call(api, "POST", "/api/exercises", kInstructor, exerciseBody());
    ex = json::parse(r.body)["exerciseId"];
    s = json::parse(call(api, "POST", "/api/sessions", kLearner,
                         json{{"exerciseId", ex}, {"learnerId", "l"}}.dump()).body)["sessionId"];
    call(api, "PUT", "/api/sessions/" + s + "/diagram", kLearner, studentBody());
  }
  ApiService api(configFor(dir), steppingClock());
  EXPECT_EQ(call(api, "GET", "/api/exercises/" + ex, kLearner).status, 200);
  EXPECT_EQ(call(api, "POST", "/api/sessions/" + s + "/check", kLearner).status, 200);
  EXPECT_EQ(api.snapshots().list(s).size(), 2u);
}

TEST(ServiceApi, HttpRoundTrip) {
  TempDir dir;
  ApiService api(configFor(dir));
  HttpServer server(api);
  ASSERT_TRUE(server.bind("127.0.0.1", 0));
  std::thread loop([&] { server.listen(); });

  httplib::Client client("127.0.0.1", server.port());
  const httplib::Headers instructor = {{"Authorization", kInstructor}};
  const httplib::Headers learner = {{"Authorization", kLearner}};
  auto created = client.Post("/api/exercises", instructor, exerciseBody(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string ex = json::parse(created->body)["exerciseId"];
  auto session = client.Post("/api/sessions", learner,
                             json{{"exerciseId", ex}, {"learnerId", "l"}}.dump(), "application/json");
  ASSERT_TRUE(session);
  const std::string s = json::parse(session->body)["sessionId"];
  auto put = client.Put("/api/sessions/" + s + "/diagram", learner, studentBody(), "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 204);
  auto analytics = client.Get("/api/sessions/" + s + "/analytics?interval=10", instructor);
  ASSERT_TRUE(analytics);
  EXPECT_EQ(analytics->status, 200);
  EXPECT_EQ(client.Get("/api/exercises/" + ex)->status, 401);

  // A second server cannot take the same port.
  ApiService other(configFor(dir));
  HttpServer clash(other);
  EXPECT_FALSE(clash.bind("127.0.0.1", server.port()));

  server.stop();
  loop.join();
}
