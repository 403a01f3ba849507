#include "mltopics/session_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "json.hpp"
#include "mltopics/error.hpp"

namespace mltopics {

std::string decision_to_json(const Decision& d) {
  nlohmann::ordered_json j;
  j["seq"] = d.seq;
  j["phrase"] = d.phrase;
  j["action"] = to_string(d.action);
  j["target"] = d.action == Action::merge ? nlohmann::ordered_json(d.target) : nlohmann::ordered_json();
  j["timestamp"] = d.timestamp;
  return j.dump();
}

std::vector<Decision> read_decision_log(std::istream& in) {
  std::vector<Decision> log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.contains("undo")) {
        const int seq = j.at("undo").get<int>();
        if (log.empty() || log.back().seq != seq) {
          throw DataError(fmt::format("decision log line {}: undo of seq {} is not the latest decision",
                                      line_no, seq));
        }
        log.pop_back();
        continue;
      }
      Decision d;
      d.seq = j.at("seq").get<int>();
      d.phrase = j.at("phrase").get<std::string>();
      d.action = parse_action(j.at("action").get<std::string>());
      if (j.contains("target") && !j.at("target").is_null()) d.target = j.at("target").get<std::string>();
      d.timestamp = j.value("timestamp", std::string());
      log.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("decision log line {}: {}", line_no, e.what()));
    } catch (const CurationError& e) {
      throw DataError(fmt::format("decision log line {}: {}", line_no, e.what()));
    }
  }
  return log;
}

std::vector<Decision> load_decision_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open decision log: " + path);
  return read_decision_log(in);
}

DecisionLogFile::DecisionLogFile(const std::string& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw UsageError(fmt::format("cannot open decision log {}: {}", path, std::strerror(errno)));
  }
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw DataError(fmt::format("decision log {} is in use by another process", path));
  }
}

DecisionLogFile::~DecisionLogFile() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

std::vector<Decision> DecisionLogFile::read() const {
  std::ifstream in(path_);
  return read_decision_log(in);
}

void DecisionLogFile::append_line(const std::string& line) {
  const std::string data = line + '\n';
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw DataError(fmt::format("write to {} failed: {}", path_, std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw DataError(fmt::format("fsync of {} failed: {}", path_, std::strerror(errno)));
}

void DecisionLogFile::append_decision(const Decision& d) { append_line(decision_to_json(d)); }

void DecisionLogFile::append_undo(int seq) { append_line(fmt::format("{{\"undo\":{}}}", seq)); }

SessionStore::SessionStore(const RankedList& ranked, SessionOptions options,
                           std::optional<std::string> log_path)
    : session_(ranked, options) {
  if (log_path) {
    log_.emplace(*log_path);
    session_ = CurationSession::replay(log_->read(), ranked, std::move(options));
  }
}

Decision SessionStore::decide(const std::string& phrase, Action action, const std::string& target) {
  std::unique_lock lock(mutex_);
  CurationSession next = session_;
  const Decision d = next.decide(phrase, action, target);
  if (log_) log_->append_decision(d);
  session_ = std::move(next);
  return d;
}

void SessionStore::undo() {
  std::unique_lock lock(mutex_);
  if (session_.log().empty()) throw CurationError(CurationErrc::not_found, "no decision to undo");
  const int seq = session_.log().back().seq;
  CurationSession next = session_;
  next.undo();
  if (log_) log_->append_undo(seq);
  session_ = std::move(next);
}

CurationSession SessionStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return session_;
}

}  // namespace mltopics
