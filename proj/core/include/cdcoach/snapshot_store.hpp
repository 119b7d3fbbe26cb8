#pragma once

// Append-only per-session log of diagram snapshots.
//
// Every edit, check and submission appends one record holding the full
// diagram. Sequence numbers start at 1 and have no gaps; timestamps never go
// backwards within a session. Appends to one session are serialized; reads
// may run concurrently and observe a prefix of the log.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdcoach/model.hpp"
#include "cdcoach/timestamp.hpp"

namespace cdcoach {

enum class SnapshotEvent { kEdit, kCheck, kSubmit };

std::string_view toString(SnapshotEvent event);
std::optional<SnapshotEvent> snapshotEventFromString(std::string_view text);

struct SnapshotRecord {
  std::string sessionId;
  std::uint64_t seq = 0;
  Timestamp ts;
  SnapshotEvent event = SnapshotEvent::kEdit;
  ClassDiagram diagram;

  friend bool operator==(const SnapshotRecord&, const SnapshotRecord&) = default;
};

class UnknownSessionError : public std::runtime_error {
 public:
  explicit UnknownSessionError(const std::string& sessionId);
};

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON Lines record without the trailing newline:
/// {"session":..,"seq":..,"ts":..,"event":..,"diagram":{cdx/1}}
std::string formatSnapshotLine(const SnapshotRecord& record);

/// Throws StorageError for a line that is not a valid record.
SnapshotRecord parseSnapshotLine(std::string_view line);

/// Reads a whole `.jsonl` session log. An unterminated trailing line (a write
/// in progress) is ignored.
std::vector<SnapshotRecord> readSnapshotLog(const std::filesystem::path& path);

/// Session ids double as file names: 1-128 characters from [A-Za-z0-9._-],
/// not starting with '.'.
bool isValidSessionId(std::string_view id);

class SnapshotStore {
 public:
  virtual ~SnapshotStore() = default;

  /// Returns false when the session already exists.
  virtual bool createSession(const std::string& sessionId) = 0;
  virtual bool hasSession(const std::string& sessionId) const = 0;

  /// The record is durable before this returns. Throws UnknownSessionError or
  /// StorageError; on StorageError nothing was appended.
  virtual SnapshotRecord append(const std::string& sessionId, SnapshotEvent event,
                                const ClassDiagram& diagram) = 0;

  /// All records in seq order.
  virtual std::vector<SnapshotRecord> list(const std::string& sessionId) const = 0;

  std::size_t countCheckEvents(const std::string& sessionId) const;
  std::optional<SnapshotRecord> latest(const std::string& sessionId) const;
};

// One `<sessionId>.jsonl` file per session under a directory, fsync'd on
// every append.
class FileSnapshotStore final : public SnapshotStore {
 public:
  explicit FileSnapshotStore(std::filesystem::path directory, Clock clock = nowUtc);

  const std::filesystem::path& directory() const { return directory_; }
  std::filesystem::path pathFor(const std::string& sessionId) const;

  bool createSession(const std::string& sessionId) override;
  bool hasSession(const std::string& sessionId) const override;
  SnapshotRecord append(const std::string& sessionId, SnapshotEvent event,
                        const ClassDiagram& diagram) override;
  std::vector<SnapshotRecord> list(const std::string& sessionId) const override;

 private:
  struct SessionState {
    std::mutex mutex;
    bool loaded = false;
    std::uint64_t lastSeq = 0;
    Timestamp lastTs{};
  };

  SessionState& stateFor(const std::string& sessionId);

  std::filesystem::path directory_;
  Clock clock_;
  std::mutex statesMutex_;
  std::map<std::string, std::unique_ptr<SessionState>> states_;
};

class MemorySnapshotStore final : public SnapshotStore {
 public:
  explicit MemorySnapshotStore(Clock clock = nowUtc);

  bool createSession(const std::string& sessionId) override;
  bool hasSession(const std::string& sessionId) const override;
  SnapshotRecord append(const std::string& sessionId, SnapshotEvent event,
                        const ClassDiagram& diagram) override;
  std::vector<SnapshotRecord> list(const std::string& sessionId) const override;

 private:
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<SnapshotRecord>> sessions_;
};

}  // namespace cdcoach
