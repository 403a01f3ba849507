#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mltopics/extract.hpp"
#include "support/test_support.hpp"

using namespace mltopics;

namespace {

PreparedText prep(std::string_view text) { return preprocess(text, StopList::fox()); }

Segment words(std::initializer_list<std::pair<const char*, bool>> items) {
  Segment s;
  for (const auto& [w, stop] : items) s.push_back({w, w, stop});
  return s;
}

std::vector<std::string> phrases_of(const std::vector<ScoredPhrase>& list) {
  std::vector<std::string> out;
  for (const auto& p : list) out.push_back(p.phrase);
  return out;
}

const ScoredPhrase* find(const std::vector<ScoredPhrase>& list, std::string_view phrase) {
  for (const auto& p : list) {
    if (p.phrase == phrase) return &p;
  }
  return nullptr;
}

}  // namespace

TEST(Method1, GapCrossingArtifact) {
  PreparedText text{{words({{"predict", false}, {"label", false}, {"from", true}, {"the", true}, {"input", false}})}};
  auto out = phrases_of(extract_ngrams_method1(text));
  std::sort(out.begin(), out.end());
  EXPECT_EQ(out, (std::vector<std::string>{"label input", "predict label", "predict label input"}));
}

TEST(Method1, ShortSegmentsEmitNothing) {
  PreparedText text{{words({{"deep", false}})}};
  EXPECT_TRUE(extract_ngrams_method1(text).empty());
  EXPECT_TRUE(extract_ngrams_method1(PreparedText{}).empty());
}

TEST(Method1, FourTokens) {
  PreparedText text{{words({{"a", false}, {"b", false}, {"c", false}, {"d", false}})}};
  EXPECT_EQ(phrases_of(extract_ngrams_method1(text)),
            (std::vector<std::string>{"a b", "b c", "c d", "a b c", "b c d"}));
}

TEST(Method1, NeverCrossesPunctuation) {
  const auto out = phrases_of(extract_ngrams_method1(prep("Kernel methods. Neural networks")));
  EXPECT_EQ(out, (std::vector<std::string>{"kernel method", "neural network"}));
}

TEST(Method1, CountsPerSegmentProperty) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto text = prep(testsupport::random_abstract(rng));
    std::size_t bigrams = 0;
    std::size_t trigrams = 0;
    for (const auto& seg : text.segments) {
      const auto kept = static_cast<std::size_t>(std::count_if(seg.begin(), seg.end(), [](const Token& t) { return !t.stop; }));
      bigrams += kept >= 1 ? kept - 1 : 0;
      trigrams += kept >= 2 ? kept - 2 : 0;
    }
    std::size_t got2 = 0;
    std::size_t got3 = 0;
    for (const auto& p : extract_ngrams_method1(text)) {
      const auto n = std::count(p.phrase.begin(), p.phrase.end(), ' ') + 1;
      (n == 2 ? got2 : got3) += 1;
      ASSERT_TRUE(n == 2 || n == 3);
    }
    EXPECT_EQ(got2, bigrams);
    EXPECT_EQ(got3, trigrams);
  }
}

TEST(SplitCandidates, Examples) {
  PreparedText text{{words({{"support", false}, {"vector", false}, {"machine", false}, {"for", true}, {"classif", false}})}};
  const auto parts = split_candidates(text);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].phrase(), "support vector machine");
  EXPECT_EQ(parts[1].phrase(), "classif");

  PreparedText stops{{words({{"of", true}, {"the", true}})}};
  EXPECT_TRUE(split_candidates(stops).empty());

  EXPECT_EQ(split_candidates(prep("deep learning, deep networks")).size(), 2u);
}

TEST(SubNgrams, Counts) {
  PreparedText text{{words({{"support", false}, {"vector", false}, {"machine", false}})}};
  const auto part = split_candidates(text).at(0);
  const auto grams = generate_subngrams(part);
  EXPECT_EQ(phrases_of([&] {
              std::vector<ScoredPhrase> v;
              for (const auto& g : grams) v.push_back({g.phrase(), "", std::nullopt, 1});
              return v;
            }()),
            (std::vector<std::string>{"support", "support vector", "support vector machine", "vector",
                                      "vector machine", "machine"}));

  CandidatePart six;
  for (int i = 0; i < 6; ++i) six.tokens.push_back({"w", "w", false});
  EXPECT_EQ(generate_subngrams(six, 4).size(), 18u);
  CandidatePart one{{{"w", "w", false}}};
  EXPECT_EQ(generate_subngrams(one).size(), 1u);
}

TEST(Cooccurrence, SingleThreeWordPart) {
  PreparedText text{{words({{"support", false}, {"vector", false}, {"machine", false}})}};
  const auto parts = split_candidates(text);

  const auto classic = build_cooccurrence(parts, CooccurrenceMode::classic);
  for (const char* w : {"support", "vector", "machine"}) {
    EXPECT_EQ(classic.at(w), (WordStats{1, 3}));
    EXPECT_EQ(classic.at(w).score(), 3.0);
  }

  const auto literal = build_cooccurrence(parts, CooccurrenceMode::paper_literal);
  EXPECT_EQ(literal.at("support"), (WordStats{3, 6}));
  EXPECT_EQ(literal.at("vector"), (WordStats{4, 8}));
  EXPECT_EQ(literal.at("machine"), (WordStats{3, 6}));
  for (const char* w : {"support", "vector", "machine"}) EXPECT_EQ(literal.at(w).score(), 2.0);
}

TEST(Rake, SupportVectorMachine) {
  const auto literal = extract_rake(prep("Support vector machine."));
  ASSERT_FALSE(literal.empty());
  EXPECT_EQ(literal[0].phrase, "support vector machin");
  EXPECT_EQ(literal[0].surface, "support vector machine");
  EXPECT_EQ(*literal[0].score, 6.0);

  const auto classic = extract_rake(prep("Support vector machine."), {4, CooccurrenceMode::classic});
  EXPECT_EQ(classic[0].phrase, "support vector machin");
  EXPECT_EQ(*classic[0].score, 9.0);
}

TEST(Rake, EmptyAndSingleWord) {
  EXPECT_TRUE(extract_rake(prep("")).empty());
  for (auto mode : {CooccurrenceMode::paper_literal, CooccurrenceMode::classic}) {
    const auto out = extract_rake(prep("Kernels."), {4, mode});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(*out[0].score, 1.0);
  }
}

TEST(Rake, TiesBreakOnPhrase) {
  const auto out = extract_rake(prep("beta, alpha, gamma"));
  EXPECT_EQ(phrases_of(out), (std::vector<std::string>{"alpha", "beta", "gamma"}));
}

TEST(Rake, DeduplicatesPerAbstract) {
  const auto out = extract_rake(prep("neural network. Neural networks. neural network"));
  const auto* nn = find(out, "neural network");
  ASSERT_NE(nn, nullptr);
  EXPECT_EQ(nn->occurrences, 3);
  EXPECT_EQ(nn->surface, "neural network");
  EXPECT_EQ(std::count_if(out.begin(), out.end(), [](const auto& p) { return p.phrase == "neural network"; }), 1);
}

TEST(Rake, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto text = prep(testsupport::random_abstract(rng));
    for (auto mode : {CooccurrenceMode::paper_literal, CooccurrenceMode::classic}) {
      for (int max_n : {1, 2, 4}) {
        ASSERT_EQ(extract_rake(text, {max_n, mode}), testsupport::rake_oracle(text, max_n, mode))
            << "abstract " << i << " mode " << to_string(mode) << " max_n " << max_n;
      }
    }
  }
}

TEST(Rake, Invariants) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto text = prep(testsupport::random_abstract(rng));
    const auto parts = split_candidates(text);
    for (auto mode : {CooccurrenceMode::paper_literal, CooccurrenceMode::classic}) {
      const auto table = build_cooccurrence(parts, mode);
      for (const auto& [w, s] : table) {
        ASSERT_GE(s.deg, s.freq) << w;
        ASSERT_GE(s.score(), 1.0);
      }
      for (const auto& p : extract_rake(text, {4, mode})) {
        ASSERT_EQ(*p.score, phrase_score(p.phrase, table));
      }
    }
  }
}

TEST(Rake, SegmentOrderDoesNotMatter) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    auto text = prep(testsupport::random_abstract(rng));
    auto shuffled = text;
    std::shuffle(shuffled.segments.begin(), shuffled.segments.end(), rng);
    for (auto mode : {CooccurrenceMode::paper_literal, CooccurrenceMode::classic}) {
      auto a = extract_rake(text, {4, mode});
      auto b = extract_rake(shuffled, {4, mode});
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].phrase, b[k].phrase);
        EXPECT_EQ(a[k].score, b[k].score);
      }
    }
  }
}

TEST(Rake, ClassicCandidatesWithinPaperLiteral) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const auto text = prep(testsupport::random_abstract(rng));
    const auto parts = split_candidates(text);
    if (std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.size() > 4; })) continue;
    auto a = phrases_of(extract_rake(text, {4, CooccurrenceMode::classic}));
    auto b = phrases_of(extract_rake(text, {4, CooccurrenceMode::paper_literal}));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST(Collapse, DominantSurface) {
  const auto out = collapse_occurrences({{"x", "b", std::nullopt, 1},
                                         {"x", "a", std::nullopt, 1},
                                         {"x", "c", std::nullopt, 2},
                                         {"y", "z", std::nullopt, 1}});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].surface, "c");
  EXPECT_EQ(out[0].occurrences, 4);
  EXPECT_EQ(collapse_occurrences({{"x", "b", std::nullopt, 1}, {"x", "a", std::nullopt, 1}})[0].surface, "a");
}

TEST(Mode, ParseRoundTrip) {
  for (auto m : {CooccurrenceMode::paper_literal, CooccurrenceMode::classic}) {
    EXPECT_EQ(parse_cooccurrence_mode(to_string(m)), m);
  }
}
