#pragma once

// Reference implementations and random generators shared by the unit tests
// and the acceptance runner. Nothing here calls into the extraction or
// curation code it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mltopics/curate.hpp"
#include "mltopics/extract.hpp"
#include "mltopics/rank.hpp"
#include "mltopics/textprep.hpp"

namespace testsupport {

struct Unit {
  std::vector<std::string> stems;
  std::vector<std::string> surfaces;
};

inline std::string join(const std::vector<std::string>& words, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += words[i];
  }
  return out;
}

/// Brute-force RAKE: enumerate runs, enumerate every sub-n-gram, count each
/// word against each unit by scanning, then score and sort.
inline std::vector<mltopics::ScoredPhrase> rake_oracle(const mltopics::PreparedText& text, int max_n,
                                                       mltopics::CooccurrenceMode mode) {
  std::vector<Unit> runs;
  for (const auto& segment : text.segments) {
    Unit run;
    for (std::size_t i = 0; i <= segment.size(); ++i) {
      if (i == segment.size() || segment[i].stop) {
        if (!run.stems.empty()) runs.push_back(run);
        run = {};
      } else {
        run.stems.push_back(segment[i].stem);
        run.surfaces.push_back(segment[i].surface);
      }
    }
  }

  std::vector<Unit> grams;
  for (const auto& run : runs) {
    const std::size_t len = run.stems.size();
    for (std::size_t a = 0; a < len; ++a) {
      for (std::size_t b = a + 1; b <= len && b - a <= static_cast<std::size_t>(max_n); ++b) {
        Unit g;
        g.stems.assign(run.stems.begin() + a, run.stems.begin() + b);
        g.surfaces.assign(run.surfaces.begin() + a, run.surfaces.begin() + b);
        grams.push_back(g);
      }
    }
  }
  const std::vector<Unit>& units = mode == mltopics::CooccurrenceMode::classic ? runs : grams;

  std::set<std::string> vocabulary;
  for (const auto& u : units) vocabulary.insert(u.stems.begin(), u.stems.end());
  std::map<std::string, double> word_score;
  for (const auto& w : vocabulary) {
    long freq = 0;
    long deg = 0;
    for (const auto& u : units) {
      const long c = std::count(u.stems.begin(), u.stems.end(), w);
      freq += c;
      deg += c * static_cast<long>(u.stems.size());
    }
    word_score[w] = static_cast<double>(deg) / static_cast<double>(freq);
  }

  std::map<std::string, std::map<std::string, int>> surfaces;
  for (const auto& g : grams) {
    ++surfaces[join(g.stems, 0, g.stems.size())][join(g.surfaces, 0, g.surfaces.size())];
  }
  std::vector<mltopics::ScoredPhrase> out;
  for (const auto& [phrase, forms] : surfaces) {
    int total = 0;
    std::string best;
    int best_count = 0;
    for (const auto& [form, n] : forms) {
      total += n;
      if (n > best_count) {
        best = form;
        best_count = n;
      }
    }
    double score = 0.0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= phrase.size(); ++i) {
      if (i == phrase.size() || phrase[i] == ' ') {
        score += word_score.at(phrase.substr(start, i - start));
        start = i + 1;
      }
    }
    out.push_back({phrase, best, score, total});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (*x.score != *y.score) return *x.score > *y.score;
    return x.phrase < y.phrase;
  });
  return out;
}

/// Random abstract text: at most `max_tokens` words drawn from a small
/// vocabulary mixing content words, stop words and repeats, with
/// punctuation between some words.
inline std::string random_abstract(std::mt19937_64& rng, int max_tokens = 30) {
  static const std::vector<std::string> content = {
      "support", "vector", "machine", "machines", "neural", "network", "networks", "data",
      "set", "learning", "model", "models", "random", "field", "kernel", "sparse",
      "graph", "feature", "space", "training", "deep", "markov", "gaussian", "mixture"};
  static const std::vector<std::string> stops = {"the", "of", "a", "for", "and", "we", "is", "with", "in"};
  static const std::vector<std::string> punct = {".", ",", ";", ":", "!", "?"};
  std::uniform_int_distribution<int> length(0, max_tokens);
  std::uniform_int_distribution<int> pick(0, 99);
  const int n = length(rng);
  std::string text;
  for (int i = 0; i < n; ++i) {
    const int r = pick(rng);
    const auto& pool = r < 70 ? content : stops;
    std::string word = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    if (pick(rng) < 10) word[0] = static_cast<char>(word[0] - 'a' + 'A');
    if (!text.empty()) text += ' ';
    text += word;
    if (pick(rng) < 15) text += punct[std::uniform_int_distribution<std::size_t>(0, punct.size() - 1)(rng)];
  }
  return text;
}

/// A ranked list of `n` rows whose totals are multiples of 1/8 below 2^20, so
/// every sum the curation code forms is exact in double precision.
inline mltopics::RankedList dyadic_ranked_list(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> eighths(1, 8 * 2000);
  std::uniform_int_distribution<std::int64_t> count(0, 40);
  mltopics::RankedList list;
  for (std::size_t i = 0; i < n; ++i) {
    mltopics::RankedEntry e;
    e.phrase = "phrase " + std::to_string(i);
    e.display_form = "phrase " + std::to_string(i);
    e.weighted_total = static_cast<double>(eighths(rng)) / 8.0;
    e.per_source = {{"a", count(rng)}, {"b", count(rng)}};
    list.push_back(e);
  }
  mltopics::sort_and_renumber(list);
  return list;
}

/// Drives `session` with `steps` random legal decisions and undos.
inline void random_walk(mltopics::CurationSession& session, std::mt19937_64& rng, int steps) {
  std::uniform_int_distribution<int> pick(0, 99);
  for (int i = 0; i < steps; ++i) {
    const int r = pick(rng);
    if (r < 6 && !session.log().empty()) {
      session.undo();
      continue;
    }
    const auto candidates = session.candidates(session.window().size());
    if (candidates.empty()) break;
    // Bias toward the head of the queue like a real curator.
    std::geometric_distribution<std::size_t> skip(0.15);
    const auto& row = candidates[std::min(skip(rng), candidates.size() - 1)];
    const auto& accepted = session.accepted();
    if (r < 35 && !accepted.empty()) {
      const auto& target = accepted[std::uniform_int_distribution<std::size_t>(0, accepted.size() - 1)(rng)];
      session.decide(row.phrase, mltopics::Action::merge, target, "t");
    } else if (r < 70 || session.complete()) {
      session.decide(row.phrase, mltopics::Action::block, {}, "t");
    } else {
      session.decide(row.phrase, mltopics::Action::accept, {}, "t");
    }
  }
}

inline double total_mass(const mltopics::RankedList& list) {
  double sum = 0.0;
  for (const auto& e : list) sum += e.weighted_total;
  return sum;
}

/// Accepted-eligible rows after applying an exported RuleSet: the group keys,
/// in ranked order.
inline std::vector<std::string> rules_round_trip(const mltopics::RankedList& window,
                                                 const mltopics::RuleSet& rules, int target_k) {
  std::vector<std::string> out;
  for (const auto& e : mltopics::apply_rules(window, rules)) {
    if (static_cast<int>(out.size()) >= target_k) break;
    if (rules.merge_groups.count(e.phrase) != 0) out.push_back(e.phrase);
  }
  return out;
}

}  // namespace testsupport
