#pragma once

// Instructor-side analysis over recorded sessions.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cdcoach/cas_table.hpp"
#include "cdcoach/matching.hpp"
#include "cdcoach/similarity.hpp"
#include "cdcoach/snapshot_store.hpp"
#include "cdcoach/stats.hpp"

namespace cdcoach {

struct SeriesPoint {
  std::int64_t elapsedSeconds = 0;
  double cds = 0.0;
  double csAll = 0.0;
  double rsAll = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

struct SimilaritySeries {
  std::vector<SeriesPoint> points;  // elapsedSeconds strictly increasing

  friend bool operator==(const SimilaritySeries&, const SimilaritySeries&) = default;
};

/// Samples a session every `intervalSeconds`, measured from the first
/// snapshot. Each tick scores the latest snapshot at or before it; the final
/// snapshot is always the last point. Snapshots must be in seq order.
/// Throws std::invalid_argument for an empty session or a non-positive
/// interval.
SimilaritySeries similaritySeries(std::span<const SnapshotRecord> snapshots,
                                  const ClassDiagram& answer, const MatchConfig& cfg,
                                  const CaSTable& table, std::int64_t intervalSeconds);

/// CSV with header `elapsed_s,cds,cs_all,rs_all`.
std::string seriesToCsv(const SimilaritySeries& series);

/// Mean CS per answer class name over the reports; a report in which the
/// class went unmatched contributes 0. Answer classes sharing a name are
/// disambiguated as "<name> [<id>]".
std::map<std::string, double> perClassAverages(std::span<const SimilarityReport> reports,
                                               const ClassDiagram& answer);

/// Pearson correlation between the number of check events and the CDS of the
/// final snapshot, across sessions.
double usageSimilarityCorrelation(std::span<const std::vector<SnapshotRecord>> sessions,
                                  const ClassDiagram& answer, const MatchConfig& cfg,
                                  const CaSTable& table);

}  // namespace cdcoach
