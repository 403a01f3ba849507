#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mltopics/rank.hpp"

namespace mltopics {

enum class CurationErrc { not_found, conflict, invalid, complete };

std::string_view to_string(CurationErrc code);

class CurationError : public std::runtime_error {
 public:
  CurationError(CurationErrc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  CurationErrc code() const { return code_; }

 private:
  CurationErrc code_;
};

/// Batch cleaning rules: phrases to drop and phrases to fold into a
/// canonical topic. All phrases are stemmed.
struct RuleSet {
  std::set<std::string> blocklist;
  std::map<std::string, std::set<std::string>> merge_groups;

  bool empty() const { return blocklist.empty() && merge_groups.empty(); }
  /// Throws CurationError(invalid) when a phrase is both blocked and
  /// grouped, groups overlap, or a canonical phrase lists itself.
  void validate() const;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

/// Plain-text rule file:
///
///     # comment
///     [blocklist]
///     propos method
///     [merge data set]
///     train data
///     real data
///
/// Throws DataError on lines outside a section or an unknown section.
RuleSet parse_rules(std::istream& in);
RuleSet load_rules(const std::string& path);
void write_rules(std::ostream& out, const RuleSet& rules);

/// Drops blocklisted rows, folds each merge member's counts into its
/// canonical row, then re-sorts and renumbers.
RankedList apply_rules(const RankedList& ranked, const RuleSet& rules);

enum class Action { accept, block, merge };
std::string_view to_string(Action action);
Action parse_action(std::string_view text);

struct Decision {
  int seq = 0;
  std::string phrase;
  Action action = Action::accept;
  std::string target;  // merge only
  std::string timestamp;

  friend bool operator==(const Decision&, const Decision&) = default;
};

struct SessionOptions {
  std::string session_id = "session";
  std::size_t window = 500;
  int target_k = 10;
};

/// An accepted topic with the phrases merged into it.
struct Topic {
  std::string phrase;
  std::string display_form;
  double weighted_total = 0.0;  // own total plus absorbed members, members in phrase order
  std::map<std::string, std::int64_t> per_source;
  std::set<std::string> members;

  friend bool operator==(const Topic&, const Topic&) = default;
};

/// Current time as an ISO-8601 UTC string.
std::string utc_timestamp();

/// Human-in-the-loop pass over a frozen ranked window. All derived state is
/// a pure function of (window, options, decision log).
class CurationSession {
 public:
  /// Freezes the first `options.window` rows of `ranked`.
  CurationSession(const RankedList& ranked, SessionOptions options);

  /// Rebuilds a session by re-applying `log` over `ranked`. Throws
  /// CurationError naming the first offending seq.
  static CurationSession replay(const std::vector<Decision>& log, const RankedList& ranked,
                                SessionOptions options);

  /// Highest-ranked phrase without a decision, or nullopt when complete or
  /// the window is exhausted.
  std::optional<std::string> next_candidate() const;
  /// First `limit` undecided rows in rank order.
  std::vector<RankedEntry> candidates(std::size_t limit) const;

  /// Validates and appends a decision. Returns it.
  const Decision& decide(std::string_view phrase, Action action, std::string_view target = {},
                         std::optional<std::string> timestamp = std::nullopt);
  /// Checks `decide` preconditions without mutating. Throws CurationError.
  void check(std::string_view phrase, Action action, std::string_view target) const;
  /// Removes the highest-seq decision. Throws CurationError(not_found) on an empty log.
  void undo();

  RuleSet export_rules() const;

  /// Accepted topics ranked by their absorbed totals.
  std::vector<Topic> topics() const;
  /// Accepted topics (ranked) followed by the undecided window rows.
  RankedList final_ranking() const;

  bool complete() const { return static_cast<int>(accepted_.size()) >= options_.target_k; }
  bool is_decided(std::string_view phrase) const;
  const std::vector<std::string>& accepted() const { return accepted_; }
  const std::vector<Decision>& log() const { return log_; }
  const RankedList& window() const { return window_; }
  const SessionOptions& options() const { return options_; }

  friend bool operator==(const CurationSession& a, const CurationSession& b);

 private:
  const RankedEntry* find(std::string_view phrase) const;
  void apply(Decision decision);
  void rebuild();

  SessionOptions options_;
  RankedList window_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Decision> log_;
  std::vector<std::string> accepted_;
  std::map<std::string, std::size_t, std::less<>> decided_;  // phrase -> log position
  std::map<std::string, std::set<std::string>, std::less<>> absorbed_;  // topic -> members
};

}  // namespace mltopics
