#include "cdcoach/snapshot_store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cdcoach/cdx.hpp"

namespace cdcoach {

namespace {

std::string errnoMessage(const std::string& what, const std::filesystem::path& path) {
  return what + " " + path.string() + ": " + std::strerror(errno);
}

// Splits on '\n', dropping an unterminated tail.
std::vector<std::string_view> completeLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) break;
    if (nl > start) lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

std::string_view toString(SnapshotEvent event) {
  switch (event) {
    case SnapshotEvent::kEdit:
      return "edit";
    case SnapshotEvent::kCheck:
      return "check";
    case SnapshotEvent::kSubmit:
      return "submit";
  }
  return "edit";
}

std::optional<SnapshotEvent> snapshotEventFromString(std::string_view text) {
  if (text == "edit") return SnapshotEvent::kEdit;
  if (text == "check") return SnapshotEvent::kCheck;
  if (text == "submit") return SnapshotEvent::kSubmit;
  return std::nullopt;
}

UnknownSessionError::UnknownSessionError(const std::string& sessionId)
    : std::runtime_error("unknown session \"" + sessionId + "\"") {}

std::string formatSnapshotLine(const SnapshotRecord& record) {
  nlohmann::ordered_json line;
  line["session"] = record.sessionId;
  line["seq"] = record.seq;
  line["ts"] = formatTimestamp(record.ts);
  line["event"] = toString(record.event);
  line["diagram"] = diagramToJson(record.diagram);
  return line.dump();
}

SnapshotRecord parseSnapshotLine(std::string_view line) {
  try {
    const auto doc = nlohmann::json::parse(line);
    SnapshotRecord r;
    r.sessionId = doc.at("session").get<std::string>();
    r.seq = doc.at("seq").get<std::uint64_t>();
    const auto ts = parseTimestamp(doc.at("ts").get<std::string>());
    if (!ts) throw StorageError("bad timestamp in snapshot record");
    r.ts = *ts;
    const auto event = snapshotEventFromString(doc.at("event").get<std::string>());
    if (!event) throw StorageError("bad event in snapshot record");
    r.event = *event;
    r.diagram = parseDiagram(doc.at("diagram"));
    return r;
  } catch (const StorageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StorageError(std::string("invalid snapshot record: ") + e.what());
  }
}

std::vector<SnapshotRecord> readSnapshotLog(const std::filesystem::path& path) {
  const std::string text = readFile(path);
  std::vector<SnapshotRecord> records;
  for (const auto line : completeLines(text)) records.push_back(parseSnapshotLine(line));
  return records;
}

bool isValidSessionId(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

std::size_t SnapshotStore::countCheckEvents(const std::string& sessionId) const {
  const auto records = list(sessionId);
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) {
    return r.event == SnapshotEvent::kCheck;
  }));
}

std::optional<SnapshotRecord> SnapshotStore::latest(const std::string& sessionId) const {
  auto records = list(sessionId);
  if (records.empty()) return std::nullopt;
  return std::move(records.back());
}

// ---------------------------------------------------------------------------
// FileSnapshotStore

FileSnapshotStore::FileSnapshotStore(std::filesystem::path directory, Clock clock)
    : directory_(std::move(directory)), clock_(std::move(clock)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw StorageError("cannot create " + directory_.string() + ": " + ec.message());
}

std::filesystem::path FileSnapshotStore::pathFor(const std::string& sessionId) const {
  return directory_ / (sessionId + ".jsonl");
}

namespace {

// A crash mid-append can leave an unterminated last line. Cut it off so the
// next record starts on a fresh line. Updates `size` to the new length.
bool dropTornTail(int fd, off_t& size) {
  off_t keep = size;
  char buf[4096];
  for (off_t end = size; end > 0;) {
    const off_t start = std::max<off_t>(0, end - static_cast<off_t>(sizeof buf));
    const ssize_t n = ::pread(fd, buf, static_cast<std::size_t>(end - start), start);
    if (n != end - start) return false;
    const char* last = static_cast<const char*>(::memrchr(buf, '\n', static_cast<std::size_t>(n)));
    if (last != nullptr) {
      keep = start + (last - buf) + 1;
      break;
    }
    keep = start;
    end = start;
  }
  if (keep == size) return true;
  if (::ftruncate(fd, keep) != 0) return false;
  size = keep;
  return true;
}

}  // namespace

FileSnapshotStore::SessionState& FileSnapshotStore::stateFor(const std::string& sessionId) {
  std::lock_guard lock(statesMutex_);
  auto& slot = states_[sessionId];
  if (!slot) slot = std::make_unique<SessionState>();
  return *slot;
}

bool FileSnapshotStore::createSession(const std::string& sessionId) {
  if (!isValidSessionId(sessionId)) {
    throw std::invalid_argument("invalid session id \"" + sessionId + "\"");
  }
  const auto path = pathFor(sessionId);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) {
    if (errno == EEXIST) return false;
    throw StorageError(errnoMessage("cannot create", path));
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw StorageError(errnoMessage("cannot sync", path));
  return true;
}

bool FileSnapshotStore::hasSession(const std::string& sessionId) const {
  if (!isValidSessionId(sessionId)) return false;
  std::error_code ec;
  return std::filesystem::is_regular_file(pathFor(sessionId), ec);
}

SnapshotRecord FileSnapshotStore::append(const std::string& sessionId, SnapshotEvent event,
                                         const ClassDiagram& diagram) {
  if (!hasSession(sessionId)) throw UnknownSessionError(sessionId);
  SessionState& state = stateFor(sessionId);
  std::lock_guard lock(state.mutex);

  const auto path = pathFor(sessionId);
  if (!state.loaded) {
    const auto existing = readSnapshotLog(path);
    if (!existing.empty()) {
      state.lastSeq = existing.back().seq;
      state.lastTs = existing.back().ts;
    }
    state.loaded = true;
  }

  SnapshotRecord record{sessionId, state.lastSeq + 1, std::max(clock_(), state.lastTs), event,
                        diagram};
  const std::string line = formatSnapshotLine(record) + "\n";

  const int fd = ::open(path.c_str(), O_RDWR | O_APPEND | O_CLOEXEC);
  if (fd < 0) throw StorageError(errnoMessage("cannot open", path));
  struct stat st {};
  if (::fstat(fd, &st) != 0 || !dropTornTail(fd, st.st_size)) {
    const std::string message = errnoMessage("cannot prepare", path);
    ::close(fd);
    throw StorageError(message);
  }

  std::size_t written = 0;
  bool ok = true;
  while (written < line.size()) {
    const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ok = false;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  if (ok) ok = ::fsync(fd) == 0;
  if (!ok) {
    const std::string message = errnoMessage("cannot append to", path);
    // Roll back a partial line so the log stays parseable.
    [[maybe_unused]] const int rc = ::ftruncate(fd, st.st_size);
    ::close(fd);
    throw StorageError(message);
  }
  ::close(fd);

  state.lastSeq = record.seq;
  state.lastTs = record.ts;
  return record;
}

std::vector<SnapshotRecord> FileSnapshotStore::list(const std::string& sessionId) const {
  if (!hasSession(sessionId)) throw UnknownSessionError(sessionId);
  return readSnapshotLog(pathFor(sessionId));
}

// ---------------------------------------------------------------------------
// MemorySnapshotStore

MemorySnapshotStore::MemorySnapshotStore(Clock clock) : clock_(std::move(clock)) {}

bool MemorySnapshotStore::createSession(const std::string& sessionId) {
  std::lock_guard lock(mutex_);
  return sessions_.try_emplace(sessionId).second;
}

bool MemorySnapshotStore::hasSession(const std::string& sessionId) const {
  std::lock_guard lock(mutex_);
  return sessions_.contains(sessionId);
}

SnapshotRecord MemorySnapshotStore::append(const std::string& sessionId, SnapshotEvent event,
                                           const ClassDiagram& diagram) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(sessionId);
  if (it == sessions_.end()) throw UnknownSessionError(sessionId);
  auto& records = it->second;
  Timestamp ts = clock_();
  if (!records.empty()) ts = std::max(ts, records.back().ts);
  records.push_back({sessionId, records.size() + 1, ts, event, diagram});
  return records.back();
}

std::vector<SnapshotRecord> MemorySnapshotStore::list(const std::string& sessionId) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(sessionId);
  if (it == sessions_.end()) throw UnknownSessionError(sessionId);
  return it->second;
}

}  // namespace cdcoach
