#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mltopics/error.hpp"
#include "mltopics/pipeline.hpp"
#include "support/test_support.hpp"

using namespace mltopics;

namespace {

std::vector<AbstractRecord> random_corpus(std::mt19937_64& rng, int n) {
  const auto& reg = default_registry();
  std::vector<AbstractRecord> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"abs-" + std::to_string(i), reg.records()[rng() % reg.size()].source_id, 2009,
                   testsupport::random_abstract(rng)});
  }
  return out;
}

}  // namespace

TEST(Pipeline, ExtractAbstractMethods) {
  const AbstractRecord rec{"1", "neucom", 2009, "Support vector machines for data sets."};
  const auto rake = extract_abstract(rec, StopList::fox(), {});
  EXPECT_EQ(rake.phrases.front().phrase, "support vector machin");
  const auto ngram = extract_abstract(rec, StopList::fox(), {Method::ngram, {}});
  std::vector<std::string> phrases;
  for (const auto& p : ngram.phrases) {
    phrases.push_back(p.phrase);
    EXPECT_FALSE(p.score.has_value());
  }
  EXPECT_EQ(phrases, (std::vector<std::string>{"data set", "machin data", "machin data set", "support vector",
                                               "support vector machin", "vector machin", "vector machin data"}));
}

TEST(Pipeline, ParallelExtractionMatchesSerial) {
  std::mt19937_64 rng(12);
  const auto corpus = random_corpus(rng, 250);
  const auto serial = extract_corpus(corpus, StopList::fox(), {}, 1);
  for (int jobs : {2, 3, 8}) {
    const auto parallel = extract_corpus(corpus, StopList::fox(), {}, jobs);
    ASSERT_EQ(parallel.size(), serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      EXPECT_EQ(parallel[i].abstract_id, serial[i].abstract_id);
      EXPECT_EQ(parallel[i].phrases, serial[i].phrases);
    }
  }
}

TEST(Spool, RoundTrip) {
  std::mt19937_64 rng(21);
  const auto corpus = random_corpus(rng, 60);
  for (const auto method : {Method::rake, Method::ngram}) {
    const ExtractOptions opts{method, {}};
    const auto xs = extract_corpus(corpus, StopList::fox(), opts);
    std::stringstream s;
    write_spool_header(s, {{"method", std::string(to_string(method))}});
    for (const auto& x : xs) write_spool_records(s, x, opts);
    const auto spool = read_spool(s);
    EXPECT_EQ(spool.meta, (Metadata{{"method", std::string(to_string(method))}}));
    std::vector<AbstractExtraction> nonempty;
    for (const auto& x : xs) {
      if (!x.phrases.empty()) nonempty.push_back(x);
    }
    ASSERT_EQ(spool.extractions.size(), nonempty.size());
    for (std::size_t i = 0; i < nonempty.size(); ++i) {
      EXPECT_EQ(spool.extractions[i].abstract_id, nonempty[i].abstract_id);
      EXPECT_EQ(spool.extractions[i].source_id, nonempty[i].source_id);
      EXPECT_EQ(spool.extractions[i].phrases, nonempty[i].phrases);
    }
  }
}

TEST(Spool, PartialTail) {
  std::string text =
      "{\"header\":{\"method\":\"rake\"}}\n"
      "{\"abstract_id\":\"1\",\"source_id\":\"neucom\",\"phrase\":\"kernel\",\"surface\":\"kernel\","
      "\"score\":1.0,\"occurrences\":1,\"mode\":\"paper_literal\"}\n"
      "{\"abstract_id\":\"2\",\"source_id\":\"neu";
  std::istringstream broken(text);
  EXPECT_THROW(read_spool(broken), DataError);
  std::istringstream tolerant(text);
  EXPECT_EQ(read_spool(tolerant, true).extractions.size(), 1u);
  std::istringstream no_header("");
  EXPECT_THROW(read_spool(no_header), DataError);
}

TEST(Spool, RejectsInterleavedAbstracts) {
  const std::string line_a =
      "{\"abstract_id\":\"a\",\"source_id\":\"neucom\",\"phrase\":\"x\",\"surface\":\"x\",\"score\":1.0,"
      "\"occurrences\":1,\"mode\":\"classic\"}\n";
  const std::string line_b =
      "{\"abstract_id\":\"b\",\"source_id\":\"neucom\",\"phrase\":\"y\",\"surface\":\"y\",\"score\":1.0,"
      "\"occurrences\":1,\"mode\":\"classic\"}\n";
  std::istringstream in("{\"header\":{}}\n" + line_a + line_b + line_a);
  EXPECT_THROW(read_spool(in), DataError);
}

TEST(Method, Parse) {
  EXPECT_EQ(parse_method("ngram"), Method::ngram);
  EXPECT_THROW(parse_method("tfidf"), UsageError);
}
