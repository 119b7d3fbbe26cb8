#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cdcoach/analytics.hpp"
#include "cdcoach/cdx.hpp"
#include "cdcoach/feedback.hpp"
#include "cdcoach/json_io.hpp"
#include "cdcoach/layout.hpp"
#include "cdcoach/service/api.hpp"
#include "cdcoach/service/server.hpp"
#include "cdcoach/similarity.hpp"
#include "cdcoach/snapshot_store.hpp"
#include "cdcoach/stats.hpp"

namespace cdcoach::cli {

namespace fs = std::filesystem;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::mutex gServeMutex;
service::HttpServer* gServer = nullptr;
std::atomic<int> gPort{-1};

std::string readText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void writeText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

nlohmann::json readJson(const fs::path& path) {
  try {
    return nlohmann::json::parse(readText(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ViolationError(path.string() + ": malformed JSON: " + e.what());
  }
}

std::vector<SnapshotRecord> loadLog(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IoError("cannot read " + path.string());
  try {
    auto records = readSnapshotLog(path);
    if (records.empty()) throw ViolationError(path.string() + ": session log has no snapshots");
    return records;
  } catch (const StorageError& e) {
    throw ViolationError(path.string() + ": " + e.what());
  }
}

// A `.jsonl` session log contributes its final snapshot; anything else is
// read as a cdx/1 diagram.
ClassDiagram loadDiagram(const fs::path& path) {
  if (path.extension() == ".jsonl") return loadLog(path).back().diagram;
  const std::string text = readText(path);
  try {
    return parseDiagram(text);
  } catch (const DiagramError& e) {
    throw ViolationError(path.string() + ": " + e.what());
  }
}

std::vector<fs::path> diagramInputs(const fs::path& path) {
  if (fs::is_regular_file(path)) return {path};
  if (!fs::is_directory(path)) throw IoError("no such file or directory: " + path.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

struct Settings {
  std::string configPath;
  std::optional<double> nameThreshold;
  std::optional<double> correspondenceThreshold;
  std::string casTablePath;
  std::string tTest;

  MatchConfig match;
  CaSTable table = CaSTable::defaults();
  TTestVariant variant = TTestVariant::kWelch;

  // File values first, then flags.
  void resolve() {
    if (!configPath.empty()) {
      const auto doc = readJson(configPath);
      if (!doc.is_object()) throw ViolationError(configPath + ": config must be an object");
      try {
        if (doc.contains("match")) match = matchConfigFromJson(doc["match"]);
        if (doc.contains("casTable")) table = casTableFromJson(doc["casTable"]);
        if (doc.contains("tTest")) {
          const auto v = doc["tTest"].is_string()
                             ? tTestVariantFromString(doc["tTest"].get<std::string>())
                             : std::nullopt;
          if (!v) throw std::invalid_argument("tTest must be \"welch\" or \"student\"");
          variant = *v;
        }
      } catch (const std::invalid_argument& e) {
        throw ViolationError(configPath + ": " + e.what());
      }
    }
    if (nameThreshold) match.nameThreshold = *nameThreshold;
    if (correspondenceThreshold) match.correspondenceThreshold = *correspondenceThreshold;
    if (!casTablePath.empty()) {
      try {
        table = casTableFromJson(readJson(casTablePath));
      } catch (const std::invalid_argument& e) {
        throw ViolationError(casTablePath + ": " + e.what());
      }
    }
    if (!tTest.empty()) variant = *tTestVariantFromString(tTest);
    try {
      match.validate();
    } catch (const std::invalid_argument& e) {
      throw ViolationError(e.what());
    }
  }
};

void emit(const std::string& text, const std::string& outPath, std::ostream& out) {
  if (outPath.empty()) {
    out << text;
  } else {
    writeText(outPath, text);
  }
}

int cmdValidate(const std::string& file, std::ostream& out, std::ostream& err) {
  const std::string text = readText(file);
  ClassDiagram diagram;
  try {
    diagram = decodeDiagram(text);
  } catch (const DiagramError& e) {
    err << file << ": " << e.what() << "\n";
    return kExitViolation;
  }
  const auto violations = validateDiagram(diagram);
  for (const Violation& v : violations) {
    err << file << ": " << v.path << ": " << v.rule << ": " << v.message << "\n";
  }
  if (!violations.empty()) return kExitViolation;
  out << file << ": ok\n";
  return kExitOk;
}

int cmdGrade(const Settings& s, const std::string& answerPath, const std::string& studentPath,
             const std::string& outPath, std::ostream& out) {
  const ClassDiagram answer = loadDiagram(answerPath);
  OrderedJson reports = OrderedJson::array();
  for (const fs::path& file : diagramInputs(studentPath)) {
    const ClassDiagram student = loadDiagram(file);
    OrderedJson entry;
    entry["file"] = file.filename().string();
    entry["report"] = toJson(classDiagramSimilarity(student, answer, s.match, s.table));
    reports.push_back(std::move(entry));
  }
  emit(reports.dump(2) + "\n", outPath, out);
  return kExitOk;
}

int cmdConvert(const Settings& s, const std::string& answerPath, const std::string& studentPath,
               const std::string& outPath, std::ostream& out) {
  const ClassDiagram answer = loadDiagram(answerPath);
  const ClassDiagram student = loadDiagram(studentPath);
  const LayoutResult layout = transformLayout(student, answer, s.match);
  emit(serializeDiagram(layout.convertedDiagram), outPath, out);
  return kExitOk;
}

int cmdCheck(const Settings& s, const std::string& answerPath, const std::string& studentPath,
             bool showSimilarity, std::ostream& out) {
  const ClassDiagram answer = loadDiagram(answerPath);
  const ClassDiagram student = loadDiagram(studentPath);
  OrderedJson doc = toJson(buildCheckResult(student, answer, s.match));
  if (showSimilarity) doc["similarity"] = toJson(classDiagramSimilarity(student, answer, s.match, s.table));
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmdAnalyze(const Settings& s, const std::string& logPath, const std::string& answerPath,
               std::int64_t interval, const std::string& csvPath, std::ostream& out) {
  const ClassDiagram answer = loadDiagram(answerPath);
  const auto records = loadLog(logPath);
  const SimilaritySeries series = similaritySeries(records, answer, s.match, s.table, interval);
  emit(seriesToCsv(series), csvPath, out);
  return kExitOk;
}

int cmdCompareGroups(const Settings& s, const std::string& dirA, const std::string& dirB,
                     const std::string& answerPath, std::ostream& out, std::ostream& err) {
  const ClassDiagram answer = loadDiagram(answerPath);
  auto grade = [&](const std::string& dir) {
    std::vector<SimilarityReport> reports;
    for (const fs::path& file : diagramInputs(dir)) {
      reports.push_back(classDiagramSimilarity(loadDiagram(file), answer, s.match, s.table));
    }
    return reports;
  };
  const auto a = grade(dirA);
  const auto b = grade(dirB);
  const OrderedJson doc = compareReports(a, b, s.variant);
  out << doc.dump(2) << "\n";
  if (doc["cds"].contains("error")) {
    err << "compare-groups: " << doc["cds"]["error"].get<std::string>() << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmdServe(const std::string& configPath, std::ostream& out, std::ostream& err) {
  if (!fs::is_regular_file(configPath)) {
    err << "serve: cannot read config " << configPath << "\n";
    return kExitIo;
  }
  service::ServiceConfig cfg;
  try {
    cfg = service::loadServiceConfig(configPath);
  } catch (const service::ConfigError& e) {
    err << "serve: " << e.what() << "\n";
    return kExitViolation;
  }

  std::optional<service::ApiService> api;
  try {
    api.emplace(cfg);
  } catch (const std::exception& e) {
    err << "serve: cannot open storage " << cfg.storageRoot << ": " << e.what() << "\n";
    return kExitIo;
  }
  service::HttpServer server(*api);
  if (!server.bind(cfg.host, cfg.port)) {
    err << "serve: cannot listen on " << cfg.host << ":" << cfg.port
        << " (address in use or not permitted)\n";
    return kExitIo;
  }
  out << "listening on " << cfg.host << ":" << server.port() << std::endl;
  {
    std::lock_guard lock(gServeMutex);
    gServer = &server;
    gPort = server.port();
  }
  server.listen();
  {
    std::lock_guard lock(gServeMutex);
    gServer = nullptr;
    gPort = -1;
  }
  return kExitOk;
}

}  // namespace

void stopServing() {
  std::lock_guard lock(gServeMutex);
  if (gServer != nullptr) gServer->stop();
}

int servingPort() { return gPort.load(); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Class diagram exercise assistant: similarity grading, layout conversion, "
               "learner feedback and session analytics.",
               "cdcoach"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings settings;
  app.add_option("--config", settings.configPath,
                 "JSON file with match, casTable and tTest settings");
  app.add_option("--name-threshold", settings.nameThreshold, "Name threshold T_n (default 0.5)")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--correspondence-threshold", settings.correspondenceThreshold,
                 "Layout correspondence threshold (default 0.4)")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--cas-table", settings.casTablePath, "JSON multiplicity similarity overrides");
  app.add_option("--ttest", settings.tTest, "t-test variant")
      ->check(CLI::IsMember({"welch", "student"}));

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check a cdx/1 diagram against its invariants");
  validate->add_option("diagram", file, "Diagram file")->required();

  std::string answer;
  std::string student;
  std::string outPath;
  auto* grade = app.add_subcommand("grade", "Similarity reports for one file or a directory");
  grade->add_option("--answer", answer, "Answer key diagram")->required();
  grade->add_option("--student", student, "Student diagram, session log, or directory")
      ->required();
  grade->add_option("--out", outPath, "Write the JSON array here instead of stdout");

  auto* convert = app.add_subcommand("convert", "Rearrange a student diagram to the answer layout");
  convert->add_option("--answer", answer, "Answer key diagram")->required();
  convert->add_option("--student", student, "Student diagram")->required();
  convert->add_option("--out", outPath, "Converted diagram output")->required();

  bool showSimilarity = false;
  auto* check = app.add_subcommand("check", "Learner feedback: moves and name colors");
  check->add_option("--answer", answer, "Answer key diagram")->required();
  check->add_option("--student", student, "Student diagram")->required();
  check->add_flag("--show-similarity", showSimilarity, "Also print the similarity report");

  std::string logPath;
  std::int64_t interval = 60;
  auto* analyze = app.add_subcommand("analyze", "Similarity over time for a session log");
  analyze->add_option("--log", logPath, "Session .jsonl log")->required();
  analyze->add_option("--answer", answer, "Answer key diagram")->required();
  analyze->add_option("--interval", interval, "Sampling interval in seconds")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--csv", outPath, "Write CSV here instead of stdout");

  std::string dirA;
  std::string dirB;
  auto* compare = app.add_subcommand("compare-groups", "Two-tailed t-tests between two cohorts");
  compare->add_option("--a", dirA, "Directory of group A diagrams or session logs")->required();
  compare->add_option("--b", dirB, "Directory of group B diagrams or session logs")->required();
  compare->add_option("--answer", answer, "Answer key diagram")->required();

  std::string serviceConfig;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service until interrupted");
  serve->add_option("--config", serviceConfig, "Service configuration file")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();  // program name
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*serve) return cmdServe(serviceConfig, out, err);
    if (*validate) return cmdValidate(file, out, err);
    settings.resolve();
    if (*grade) return cmdGrade(settings, answer, student, outPath, out);
    if (*convert) return cmdConvert(settings, answer, student, outPath, out);
    if (*check) return cmdCheck(settings, answer, student, showSimilarity, out);
    if (*analyze) return cmdAnalyze(settings, logPath, answer, interval, outPath, out);
    if (*compare) return cmdCompareGroups(settings, dirA, dirB, answer, out, err);
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kExitIo;
  } catch (const ViolationError& e) {
    err << e.what() << "\n";
    return kExitViolation;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace cdcoach::cli
