#pragma once

#include <iosfwd>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "mltopics/curate.hpp"

namespace mltopics {

/// Decision log lines are JSON objects, one per line:
///   {"seq":1,"phrase":"support vector machin","action":"accept","target":null,"timestamp":"..."}
///   {"undo":1}
/// An undo line retracts the decision with that seq, which must be the
/// latest live one. Reading folds undos away.
std::vector<Decision> read_decision_log(std::istream& in);
std::vector<Decision> load_decision_log(const std::string& path);
std::string decision_to_json(const Decision& d);

/// Append-only log file with fsync on every append. Holds an exclusive
/// advisory lock for its lifetime so only one process writes a session.
class DecisionLogFile {
 public:
  explicit DecisionLogFile(const std::string& path);
  ~DecisionLogFile();
  DecisionLogFile(const DecisionLogFile&) = delete;
  DecisionLogFile& operator=(const DecisionLogFile&) = delete;

  /// Decisions currently live in the file.
  std::vector<Decision> read() const;
  void append_decision(const Decision& d);
  void append_undo(int seq);
  const std::string& path() const { return path_; }

 private:
  void append_line(const std::string& line);

  std::string path_;
  int fd_ = -1;
};

/// Single-writer wrapper shared by the CLI and the HTTP service. Every
/// mutation is validated, persisted, then applied under an exclusive lock;
/// readers see a consistent snapshot.
class SessionStore {
 public:
  /// Replays an existing log at `log_path` (if any) over `ranked`.
  SessionStore(const RankedList& ranked, SessionOptions options,
               std::optional<std::string> log_path = std::nullopt);

  Decision decide(const std::string& phrase, Action action, const std::string& target = {});
  void undo();

  template <typename F>
  auto read(F&& f) const {
    std::shared_lock lock(mutex_);
    return f(session_);
  }

  CurationSession snapshot() const;

 private:
  mutable std::shared_mutex mutex_;
  CurationSession session_;
  std::optional<DecisionLogFile> log_;
};

}  // namespace mltopics
