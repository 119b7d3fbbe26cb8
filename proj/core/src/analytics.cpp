#include "cdcoach/analytics.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace cdcoach {

namespace {

void appendNumber(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

SimilaritySeries similaritySeries(std::span<const SnapshotRecord> snapshots,
                                  const ClassDiagram& answer, const MatchConfig& cfg,
                                  const CaSTable& table, std::int64_t intervalSeconds) {
  if (snapshots.empty()) throw std::invalid_argument("similarity series of an empty session");
  if (intervalSeconds <= 0) throw std::invalid_argument("interval must be positive");

  const Timestamp start = snapshots.front().ts;
  auto elapsedMs = [&](const SnapshotRecord& r) { return (r.ts - start).count(); };

  std::vector<std::optional<SeriesPoint>> cache(snapshots.size());
  auto scoreAt = [&](std::size_t index, std::int64_t elapsed) {
    if (!cache[index]) {
      const SimilarityReport report =
          classDiagramSimilarity(snapshots[index].diagram, answer, cfg, table);
      cache[index] = SeriesPoint{0, report.cds, report.csAll, report.rsAll};
    }
    SeriesPoint p = *cache[index];
    p.elapsedSeconds = elapsed;
    return p;
  };

  const std::int64_t finalElapsed = elapsedMs(snapshots.back()) / 1000;
  SimilaritySeries series;
  std::size_t cursor = 0;
  for (std::int64_t tick = 0; tick < finalElapsed; tick += intervalSeconds) {
    while (cursor + 1 < snapshots.size() && elapsedMs(snapshots[cursor + 1]) <= tick * 1000) {
      ++cursor;
    }
    series.points.push_back(scoreAt(cursor, tick));
  }
  series.points.push_back(scoreAt(snapshots.size() - 1, finalElapsed));
  return series;
}

std::string seriesToCsv(const SimilaritySeries& series) {
  std::string out = "elapsed_s,cds,cs_all,rs_all\n";
  for (const SeriesPoint& p : series.points) {
    out += std::to_string(p.elapsedSeconds);
    out += ',';
    appendNumber(out, p.cds);
    out += ',';
    appendNumber(out, p.csAll);
    out += ',';
    appendNumber(out, p.rsAll);
    out += '\n';
  }
  return out;
}

std::map<std::string, double> perClassAverages(std::span<const SimilarityReport> reports,
                                               const ClassDiagram& answer) {
  if (reports.empty()) throw std::invalid_argument("per-class averages of no reports");

  std::unordered_map<std::string, std::size_t> nameCounts;
  for (const ClassNode& c : answer.classes) ++nameCounts[c.name];

  std::map<std::string, double> out;
  for (const ClassNode& c : answer.classes) {
    double sum = 0.0;
    for (const SimilarityReport& r : reports) {
      for (const ClassScore& s : r.perClass) {
        if (s.answerClassId == c.id) {
          sum += s.cs;
          break;
        }
      }
    }
    const std::string key = nameCounts[c.name] > 1 ? c.name + " [" + c.id + "]" : c.name;
    out[key] = sum / static_cast<double>(reports.size());
  }
  return out;
}

double usageSimilarityCorrelation(std::span<const std::vector<SnapshotRecord>> sessions,
                                  const ClassDiagram& answer, const MatchConfig& cfg,
                                  const CaSTable& table) {
  if (sessions.size() < 2) throw StatisticsError("correlation needs at least two sessions");
  std::vector<double> checks;
  std::vector<double> finalCds;
  for (const auto& records : sessions) {
    if (records.empty()) throw std::invalid_argument("session without snapshots");
    checks.push_back(static_cast<double>(std::count_if(
        records.begin(), records.end(),
        [](const SnapshotRecord& r) { return r.event == SnapshotEvent::kCheck; })));
    finalCds.push_back(classDiagramSimilarity(records.back().diagram, answer, cfg, table).cds);
  }
  return pearson(checks, finalCds);
}

}  // namespace cdcoach
