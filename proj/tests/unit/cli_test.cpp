#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "cdcoach/cdx.hpp"
#include "cdcoach/snapshot_store.hpp"
#include "test_support.hpp"

using nlohmann::json;
using testing_support::readFile;
using testing_support::sourcePath;
using testing_support::TempDir;
using testing_support::writeFile;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result runCli(std::vector<std::string> args) {
  args.insert(args.begin(), "cdcoach");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cdcoach::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& relative) { return sourcePath(relative).string(); }

const std::string kAnswer = path("data/wakaba/answer.json");

}  // namespace

TEST(Cli, Validate) {
  EXPECT_EQ(runCli({"validate", kAnswer}).code, 0);
  const Result dup = runCli({"validate", path("tests/fixtures/duplicate-id.json")});
  EXPECT_EQ(dup.code, 1);
  EXPECT_NE(dup.err.find("c1"), std::string::npos);
  const Result missing = runCli({"validate", "/nonexistent/diagram.json"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot read"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(runCli({}).code, 2);
  EXPECT_EQ(runCli({"frobnicate"}).code, 2);
  EXPECT_EQ(runCli({"grade", "--answer", kAnswer}).code, 2);
  EXPECT_EQ(runCli({"--help"}).code, 0);
}

TEST(Cli, GradeSingleFile) {
  const Result r = runCli({"grade", "--answer", path("tests/fixtures/oder-answer.json"), "--student",
                           path("tests/fixtures/oder-student.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_NEAR(doc[0]["report"]["cds"].get<double>(), 53.0 / 56.0, 1e-9);
}

TEST(Cli, GradeDirectoryInFilenameOrder) {
  TempDir dir;
  const std::string answer = readFile(kAnswer);
  for (const char* name : {"s10.json", "s02.json", "s01.json", "notes.txt"}) writeFile(dir / name, answer);
  const std::string out = (dir / "report.json").string();
  const Result r = runCli({"grade", "--answer", kAnswer, "--student", dir.path().string(), "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const json doc = json::parse(readFile(out));
  ASSERT_EQ(doc.size(), 3u);
  EXPECT_EQ(doc[0]["file"], "s01.json");
  EXPECT_EQ(doc[2]["file"], "s10.json");
  EXPECT_EQ(doc[1]["report"]["cds"], 1.0);
}

TEST(Cli, GradeInvalidStudentIsViolation) {
  const Result r = runCli({"grade", "--answer", kAnswer, "--student", path("tests/fixtures/duplicate-id.json")});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, ConvertFourClassStudent) {
  TempDir dir;
  const std::string out = (dir / "converted.json").string();
  const Result r = runCli({"convert", "--answer", kAnswer, "--student", path("data/wakaba/student-four-classes.json"),
                           "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const cdcoach::ClassDiagram converted = cdcoach::parseDiagram(readFile(out));
  const cdcoach::ClassDiagram answer = cdcoach::parseDiagram(readFile(kAnswer));
  for (const auto& c : converted.classes) {
    const auto& match = *std::find_if(answer.classes.begin(), answer.classes.end(),
                                      [&](const auto& a) { return a.name == c.name; });
    EXPECT_EQ(c.x, match.x);
    EXPECT_EQ(c.y, match.y);
  }
}

TEST(Cli, CheckHidesScoresUnlessAsked) {
  const std::vector<std::string> base = {"check", "--answer", kAnswer, "--student",
                                         path("data/wakaba/student-four-classes.json")};
  const Result plain = runCli(base);
  ASSERT_EQ(plain.code, 0) << plain.err;
  const json doc = json::parse(plain.out);
  EXPECT_FALSE(doc.contains("similarity"));
  EXPECT_EQ(plain.out.find("cds"), std::string::npos);

  auto flagged = base;
  flagged.push_back("--show-similarity");
  const Result shown = runCli(flagged);
  ASSERT_EQ(shown.code, 0);
  EXPECT_TRUE(json::parse(shown.out)["similarity"].contains("cds"));
}

TEST(Cli, ConfigFileAndFlagOverride) {
  TempDir dir;
  writeFile(dir / "cfg.json", R"({"match":{"nameThreshold":0.95},"tTest":"student"})");
  const std::vector<std::string> grade = {"grade", "--answer", path("tests/fixtures/oder-answer.json"),
                                          "--student", path("tests/fixtures/oder-student.json")};
  auto withFile = grade;
  withFile.insert(withFile.begin(), {"--config", (dir / "cfg.json").string()});
  const Result strict = runCli(withFile);
  ASSERT_EQ(strict.code, 0) << strict.err;
  // "Oder" no longer pairs with "Order" at 0.95.
  EXPECT_EQ(json::parse(strict.out)[0]["report"]["nmc"], 1);

  auto overridden = withFile;
  overridden.insert(overridden.begin(), {"--name-threshold", "0.5"});
  const Result loose = runCli(overridden);
  EXPECT_EQ(json::parse(loose.out)[0]["report"]["nmc"], 0);

  writeFile(dir / "bad.json", R"({"match":{"nameThreshold":3}})");
  EXPECT_EQ(runCli({"--config", (dir / "bad.json").string(), "grade", "--answer", kAnswer, "--student", kAnswer}).code, 1);
  EXPECT_EQ(runCli({"--ttest", "paired", "grade", "--answer", kAnswer, "--student", kAnswer}).code, 2);
}

TEST(Cli, AnalyzeWritesCsv) {
  TempDir dir;
  const cdcoach::ClassDiagram answer = cdcoach::parseDiagram(readFile(kAnswer));
  std::string log;
  for (std::size_t k = 1; k <= 3; ++k) {
    cdcoach::ClassDiagram d;
    d.classes.assign(answer.classes.begin(), answer.classes.begin() + k);
    const cdcoach::Timestamp ts = cdcoach::Timestamp{} + std::chrono::seconds(1'700'000'000 + 70 * k);
    log += cdcoach::formatSnapshotLine({"s", k, ts, cdcoach::SnapshotEvent::kEdit, d}) + "\n";
  }
  writeFile(dir / "s.jsonl", log);
  const Result r = runCli({"analyze", "--log", (dir / "s.jsonl").string(), "--answer", kAnswer,
                           "--interval", "60"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("elapsed_s,cds,cs_all,rs_all\n0,", 0), 0u);
  EXPECT_EQ(runCli({"analyze", "--log", (dir / "missing.jsonl").string(), "--answer", kAnswer}).code, 2);
  EXPECT_EQ(runCli({"analyze", "--log", (dir / "s.jsonl").string(), "--answer", kAnswer, "--interval", "0"}).code, 2);
}

TEST(Cli, CompareIdenticalDirectories) {
  TempDir dir;
  const cdcoach::ClassDiagram answer = cdcoach::parseDiagram(readFile(kAnswer));
  for (std::size_t k = 2; k <= 5; ++k) {
    cdcoach::ClassDiagram d;
    d.classes.assign(answer.classes.begin(), answer.classes.begin() + k);
    for (const auto& rel : answer.relationships) {
      if (d.findClass(rel.endA) && d.findClass(rel.endB)) d.relationships.push_back(rel);
    }
    writeFile(dir / ("s" + std::to_string(k) + ".json"), cdcoach::serializeDiagram(d));
  }
  const Result r = runCli({"compare-groups", "--a", dir.path().string(), "--b", dir.path().string(),
                           "--answer", kAnswer});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["cds"]["t"], 0.0);
  EXPECT_EQ(doc["cds"]["pTwoTailed"], 1.0);
  EXPECT_EQ(doc["variant"], "welch");
}

TEST(Cli, ServeRejectsBadConfigAndBusyPort) {
  TempDir dir;
  EXPECT_EQ(runCli({"serve", "--config", (dir / "missing.json").string()}).code, 2);
  writeFile(dir / "no-tokens.json", R"({"listen":"127.0.0.1:0"})");
  EXPECT_NE(runCli({"serve", "--config", (dir / "no-tokens.json").string()}).code, 0);

  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  writeFile(dir / "busy.json", R"({"listen":"127.0.0.1:)" + std::to_string(port) +
                                   R"(","tokens":{"instructor":["i"]},"storageRoot":"store"})");
  const Result busy = runCli({"serve", "--config", (dir / "busy.json").string()});
  EXPECT_EQ(busy.code, 2);
  EXPECT_NE(busy.err.find("cannot listen"), std::string::npos);
}

TEST(Cli, ServeAnswersUntilStopped) {
  TempDir dir;
  writeFile(dir / "cfg.json",
            R"({"listen":"127.0.0.1:0","tokens":{"learner":["l"],"instructor":["i"]},"storageRoot":"store"})");
  Result result{};
  std::thread serving([&] { result = runCli({"serve", "--config", (dir / "cfg.json").string()}); });
  for (int i = 0; i < 200 && cdcoach::cli::servingPort() < 0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  const int port = cdcoach::cli::servingPort();
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/exercises/none", httplib::Headers{{"Authorization", "Bearer i"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  cdcoach::cli::stopServing();
  serving.join();
  EXPECT_EQ(result.code, 0) << result.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "store"));
}
