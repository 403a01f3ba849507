#include <gtest/gtest.h>

#include <filesystem>
#include <algorithm>
#include <fstream>
#include <sstream>

#include "mltopics/error.hpp"
#include "mltopics/session_store.hpp"

using namespace mltopics;
namespace fs = std::filesystem;

namespace {

RankedList fixture() { return load_ranked_tsv(MLTOPICS_DATA_DIR "/fixtures/top10_window.tsv"); }

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("mltopics_store_" + std::to_string(::getpid()) + "_" +
                                                  std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(DecisionLog, FoldsUndos) {
  std::istringstream in(
      "{\"seq\":1,\"phrase\":\"a\",\"action\":\"accept\",\"target\":null,\"timestamp\":\"t\"}\n"
      "{\"seq\":2,\"phrase\":\"b\",\"action\":\"block\",\"target\":null,\"timestamp\":\"t\"}\n"
      "{\"undo\":2}\n"
      "\n"
      "{\"seq\":2,\"phrase\":\"c\",\"action\":\"merge\",\"target\":\"a\",\"timestamp\":\"t\"}\n");
  const auto log = read_decision_log(in);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1].phrase, "c");
  EXPECT_EQ(log[1].target, "a");
}

TEST(DecisionLog, RejectsBadLines) {
  std::istringstream stale("{\"seq\":1,\"phrase\":\"a\",\"action\":\"accept\"}\n{\"undo\":5}\n");
  EXPECT_THROW(read_decision_log(stale), DataError);
  std::istringstream garbage("{\"seq\":1,\n");
  EXPECT_THROW(read_decision_log(garbage), DataError);
  std::istringstream action("{\"seq\":1,\"phrase\":\"a\",\"action\":\"skip\"}\n");
  EXPECT_THROW(read_decision_log(action), DataError);
}

TEST(DecisionLog, JsonRoundTrip) {
  const Decision d{4, "train data", Action::merge, "data set", "2026-01-01T00:00:00Z"};
  std::istringstream in(decision_to_json(d) + "\n");
  EXPECT_EQ(read_decision_log(in), std::vector<Decision>{d});
}

TEST(DecisionLogFile, ExclusiveLock) {
  TempDir dir;
  DecisionLogFile first(dir.file("log.jsonl"));
  EXPECT_THROW(DecisionLogFile second(dir.file("log.jsonl")), DataError);
}

TEST(SessionStoreTest, PersistsAndResumes) {
  TempDir dir;
  const auto path = dir.file("session.jsonl");
  const auto list = fixture();
  {
    SessionStore store(list, {}, path);
    store.decide("propos method", Action::block);
    store.decide("support vector machin", Action::accept);
    store.decide("neural network", Action::accept);
    store.undo();
  }
  const auto text = slurp(path);
  EXPECT_NE(text.find("{\"undo\":3}"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);

  SessionStore resumed(list, {}, path);
  const auto snap = resumed.snapshot();
  EXPECT_EQ(snap.accepted(), (std::vector<std::string>{"support vector machin"}));
  EXPECT_EQ(snap, CurationSession::replay(load_decision_log(path), list, {}));
  EXPECT_EQ(resumed.decide("neural network", Action::accept).seq, 3);
}

TEST(SessionStoreTest, RejectedDecisionIsNotPersisted) {
  TempDir dir;
  const auto path = dir.file("session.jsonl");
  SessionStore store(fixture(), {}, path);
  EXPECT_THROW(store.decide("train data", Action::merge, "data set"), CurationError);
  EXPECT_THROW(store.undo(), CurationError);
  EXPECT_TRUE(slurp(path).empty());
}

TEST(SessionStoreTest, CorruptLogFailsToLoad) {
  TempDir dir;
  const auto path = dir.file("session.jsonl");
  std::ofstream(path) << "{\"seq\":1,\"phrase\":\"train data\",\"action\":\"merge\",\"target\":\"data set\"}\n";
  EXPECT_THROW(SessionStore(fixture(), {}, path), CurationError);
}

TEST(SessionStoreTest, InMemory) {
  SessionStore store(fixture(), {});
  store.decide("support vector machin", Action::accept);
  EXPECT_EQ(store.read([](const CurationSession& s) { return s.accepted().size(); }), 1u);
}
