#include "mltopics/extract.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mltopics/error.hpp"

namespace mltopics {
namespace {

std::string join_field(const std::vector<Token>& tokens, std::string Token::*field) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.*field;
  }
  return out;
}

std::string join_field(std::span<const Token* const> tokens, std::string Token::*field) {
  std::string out;
  for (const auto* t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t->*field;
  }
  return out;
}

}  // namespace

std::string_view to_string(CooccurrenceMode mode) {
  return mode == CooccurrenceMode::paper_literal ? "paper_literal" : "classic";
}

CooccurrenceMode parse_cooccurrence_mode(std::string_view text) {
  if (text == "paper_literal") return CooccurrenceMode::paper_literal;
  if (text == "classic") return CooccurrenceMode::classic;
  throw UsageError(fmt::format("unknown co-occurrence mode '{}'", text));
}

std::string CandidatePart::phrase() const { return join_field(tokens, &Token::stem); }
std::string CandidatePart::surface() const { return join_field(tokens, &Token::surface); }

bool phrase_order(const ScoredPhrase& a, const ScoredPhrase& b) {
  const double sa = a.score.value_or(0.0);
  const double sb = b.score.value_or(0.0);
  if (sa != sb) return sa > sb;
  return a.phrase < b.phrase;
}

std::vector<ScoredPhrase> extract_ngrams_method1(const PreparedText& prepared) {
  std::vector<ScoredPhrase> out;
  for (const auto& segment : prepared.segments) {
    std::vector<const Token*> kept;
    for (const auto& t : segment) {
      if (!t.stop) kept.push_back(&t);
    }
    for (std::size_t n = 2; n <= 3; ++n) {
      if (kept.size() < n) break;
      for (std::size_t i = 0; i + n <= kept.size(); ++i) {
        const std::span<const Token* const> window(kept.data() + i, n);
        out.push_back({join_field(window, &Token::stem), join_field(window, &Token::surface),
                       std::nullopt, 1});
      }
    }
  }
  return out;
}

std::vector<CandidatePart> split_candidates(const PreparedText& prepared) {
  std::vector<CandidatePart> parts;
  for (const auto& segment : prepared.segments) {
    CandidatePart current;
    for (const auto& t : segment) {
      if (t.stop) {
        if (!current.tokens.empty()) parts.push_back(std::move(current));
        current = {};
      } else {
        current.tokens.push_back(t);
      }
    }
    if (!current.tokens.empty()) parts.push_back(std::move(current));
  }
  return parts;
}

std::vector<CandidatePart> generate_subngrams(const CandidatePart& part, int max_n) {
  if (max_n < 1) throw UsageError("max_n must be >= 1");
  std::vector<CandidatePart> out;
  const std::size_t len = part.tokens.size();
  for (std::size_t start = 0; start < len; ++start) {
    const std::size_t longest = std::min(len - start, static_cast<std::size_t>(max_n));
    for (std::size_t n = 1; n <= longest; ++n) {
      CandidatePart gram;
      gram.tokens.assign(part.tokens.begin() + static_cast<std::ptrdiff_t>(start),
                         part.tokens.begin() + static_cast<std::ptrdiff_t>(start + n));
      out.push_back(std::move(gram));
    }
  }
  return out;
}

CooccurrenceTable build_cooccurrence(std::span<const CandidatePart> units) {
  CooccurrenceTable table;
  for (const auto& unit : units) {
    const auto len = static_cast<long>(unit.size());
    for (const auto& t : unit.tokens) {
      auto& stats = table[t.stem];
      stats.freq += 1;
      stats.deg += len;
    }
  }
  return table;
}

CooccurrenceTable build_cooccurrence(std::span<const CandidatePart> parts, CooccurrenceMode mode,
                                     int max_n) {
  if (mode == CooccurrenceMode::classic) return build_cooccurrence(parts);
  std::vector<CandidatePart> units;
  for (const auto& part : parts) {
    auto grams = generate_subngrams(part, max_n);
    std::move(grams.begin(), grams.end(), std::back_inserter(units));
  }
  return build_cooccurrence(units);
}

double phrase_score(std::string_view phrase, const CooccurrenceTable& table) {
  double total = 0.0;
  std::size_t pos = 0;
  while (pos <= phrase.size()) {
    const auto space = phrase.find(' ', pos);
    const auto word = phrase.substr(pos, space == std::string_view::npos ? std::string_view::npos
                                                                          : space - pos);
    const auto it = table.find(std::string(word));
    if (it == table.end()) throw DataError(fmt::format("word '{}' missing from graph", word));
    total += it->second.score();
    if (space == std::string_view::npos) break;
    pos = space + 1;
  }
  return total;
}

std::vector<ScoredPhrase> collapse_occurrences(const std::vector<ScoredPhrase>& multiset) {
  struct Tally {
    int occurrences = 0;
    std::map<std::string, int> surfaces;
    std::optional<double> score;
  };
  std::map<std::string, Tally> tallies;
  for (const auto& p : multiset) {
    auto& t = tallies[p.phrase];
    t.occurrences += p.occurrences;
    t.surfaces[p.surface] += p.occurrences;
    if (p.score) t.score = p.score;
  }
  std::vector<ScoredPhrase> out;
  out.reserve(tallies.size());
  for (auto& [phrase, t] : tallies) {
    // Most frequent surface; map order breaks ties toward the smallest string.
    const auto best = std::max_element(
        t.surfaces.begin(), t.surfaces.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    out.push_back({phrase, best->first, t.score, t.occurrences});
  }
  return out;
}

std::vector<ScoredPhrase> extract_rake(const PreparedText& prepared, const RakeConfig& config) {
  const auto parts = split_candidates(prepared);
  std::vector<CandidatePart> grams;
  for (const auto& part : parts) {
    auto g = generate_subngrams(part, config.max_n);
    std::move(g.begin(), g.end(), std::back_inserter(grams));
  }
  const CooccurrenceTable table = config.mode == CooccurrenceMode::paper_literal
                                      ? build_cooccurrence(grams)
                                      : build_cooccurrence(parts);

  std::vector<ScoredPhrase> occurrences;
  occurrences.reserve(grams.size());
  for (const auto& g : grams) occurrences.push_back({g.phrase(), g.surface(), std::nullopt, 1});
  auto phrases = collapse_occurrences(occurrences);
  for (auto& p : phrases) p.score = phrase_score(p.phrase, table);
  std::sort(phrases.begin(), phrases.end(), phrase_order);
  return phrases;
}

}  // namespace mltopics
