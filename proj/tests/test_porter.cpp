#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <string>

#include "mltopics/porter.hpp"

using mltopics::porter_stem;

TEST(Porter, ReferenceVocabulary) {
  std::ifstream voc(MLTOPICS_TEST_DATA "/porter/voc.txt");
  std::ifstream expected(MLTOPICS_TEST_DATA "/porter/output.txt");
  ASSERT_TRUE(voc && expected);
  std::string word;
  std::string stem;
  int n = 0;
  int diffs = 0;
  while (std::getline(voc, word) && std::getline(expected, stem)) {
    ++n;
    if (porter_stem(word) != stem) {
      if (++diffs <= 5) ADD_FAILURE() << word << " -> " << porter_stem(word) << ", expected " << stem;
    }
  }
  EXPECT_GT(n, 23000);
  EXPECT_EQ(diffs, 0);
}

TEST(Porter, KnownCases) {
  EXPECT_EQ(porter_stem("papers"), "paper");
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("machine"), "machin");
  EXPECT_EQ(porter_stem("generalization"), "gener");
  EXPECT_EQ(porter_stem("sky"), "sky");
}

TEST(Porter, ShortWordsUnchanged) {
  EXPECT_EQ(porter_stem(""), "");
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem("is"), "is");
}

TEST(Porter, NeverLengthensRandomWords) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 14);
  std::uniform_int_distribution<int> letter(0, 25);
  for (int i = 0; i < 20000; ++i) {
    std::string w(static_cast<std::size_t>(len(rng)), 'a');
    for (auto& c : w) c = static_cast<char>('a' + letter(rng));
    const auto s = porter_stem(w);
    ASSERT_LE(s.size(), w.size()) << w;
    ASSERT_FALSE(s.empty()) << w;
  }
}
