#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mltopics/textprep.hpp"

namespace mltopics {

/// Which units the RAKE word co-occurrence graph is built from.
enum class CooccurrenceMode {
  paper_literal,  // every generated 1..max_n-gram is a unit
  classic,        // every whole candidate part is a unit (original RAKE)
};

std::string_view to_string(CooccurrenceMode mode);
CooccurrenceMode parse_cooccurrence_mode(std::string_view text);

/// Maximal run of non-stop tokens inside one segment.
struct CandidatePart {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  /// Space-joined stems.
  std::string phrase() const;
  /// Space-joined surface forms.
  std::string surface() const;
};

struct WordStats {
  long freq = 0;
  long deg = 0;

  double score() const { return static_cast<double>(deg) / static_cast<double>(freq); }
  friend bool operator==(const WordStats&, const WordStats&) = default;
};

using CooccurrenceTable = std::map<std::string, WordStats>;

/// A stemmed, space-joined key phrase from one abstract.
struct ScoredPhrase {
  std::string phrase;
  std::string surface;         // most frequent surface form inside the abstract
  std::optional<double> score;  // RAKE only
  int occurrences = 1;          // times generated inside the abstract

  friend bool operator==(const ScoredPhrase&, const ScoredPhrase&) = default;
};

/// Score descending (absent scores compare equal), then phrase ascending.
bool phrase_order(const ScoredPhrase& a, const ScoredPhrase& b);

/// Method 1: drop stop-flagged tokens inside each segment, close the gaps,
/// and emit every contiguous bigram and trigram. One entry per occurrence.
std::vector<ScoredPhrase> extract_ngrams_method1(const PreparedText& prepared);

std::vector<CandidatePart> split_candidates(const PreparedText& prepared);

/// All contiguous n-grams of `part` for 1 <= n <= min(max_n, |part|), ordered
/// by start position then length.
std::vector<CandidatePart> generate_subngrams(const CandidatePart& part, int max_n = 4);

/// freq(w) += multiplicity of w in the unit; deg(w) += |unit| * multiplicity.
CooccurrenceTable build_cooccurrence(std::span<const CandidatePart> units);

/// Expands parts into co-occurrence units according to `mode` and counts them.
CooccurrenceTable build_cooccurrence(std::span<const CandidatePart> parts, CooccurrenceMode mode,
                                     int max_n = 4);

struct RakeConfig {
  int max_n = 4;
  CooccurrenceMode mode = CooccurrenceMode::paper_literal;
};

/// Sum of member word scores, left to right.
double phrase_score(std::string_view phrase, const CooccurrenceTable& table);

/// Method 2 (RAKE). Candidates are the generated n-grams, deduplicated per
/// abstract; sorted by phrase_order.
std::vector<ScoredPhrase> extract_rake(const PreparedText& prepared, const RakeConfig& config = {});

/// Collapses a per-occurrence multiset into one entry per phrase with its
/// occurrence count and dominant surface form. Output is phrase ordered.
std::vector<ScoredPhrase> collapse_occurrences(const std::vector<ScoredPhrase>& multiset);

}  // namespace mltopics
