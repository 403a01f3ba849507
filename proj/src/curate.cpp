#include "mltopics/curate.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "mltopics/error.hpp"

namespace mltopics {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Adds `member` into `total`/`per_source`. Shared by apply_rules and the
// session so both produce bit-identical merged totals.
void absorb(double& total, std::map<std::string, std::int64_t>& per_source, const RankedEntry& member) {
  total += member.weighted_total;
  for (const auto& [s, n] : member.per_source) per_source[s] += n;
}

}  // namespace

std::string_view to_string(CurationErrc code) {
  switch (code) {
    case CurationErrc::not_found: return "not_found";
    case CurationErrc::conflict: return "conflict";
    case CurationErrc::invalid: return "invalid";
    case CurationErrc::complete: return "complete";
  }
  return "invalid";
}

void RuleSet::validate() const {
  std::map<std::string, std::string> owner;
  for (const auto& [canonical, members] : merge_groups) {
    if (blocklist.count(canonical) != 0) {
      throw CurationError(CurationErrc::invalid,
                          fmt::format("'{}' is both blocklisted and a merge target", canonical));
    }
    if (members.count(canonical) != 0) {
      throw CurationError(CurationErrc::invalid,
                          fmt::format("merge group '{}' lists itself as a member", canonical));
    }
    for (const auto& m : members) {
      if (blocklist.count(m) != 0) {
        throw CurationError(CurationErrc::invalid,
                            fmt::format("'{}' is both blocklisted and merged into '{}'", m, canonical));
      }
      if (merge_groups.count(m) != 0) {
        throw CurationError(CurationErrc::invalid,
                            fmt::format("'{}' is a merge target and a member of '{}'", m, canonical));
      }
      const auto [it, inserted] = owner.emplace(m, canonical);
      if (!inserted) {
        throw CurationError(CurationErrc::invalid,
                            fmt::format("'{}' appears in merge groups '{}' and '{}'", m, it->second, canonical));
      }
    }
  }
}

RuleSet parse_rules(std::istream& in) {
  RuleSet rules;
  enum class Section { none, blocklist, merge } section = Section::none;
  std::string group;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw DataError(fmt::format("rules line {}: unterminated section", line_no));
      const std::string name = trim(std::string_view(text).substr(1, text.size() - 2));
      if (name == "blocklist") {
        section = Section::blocklist;
      } else if (name.rfind("merge ", 0) == 0 && !trim(name.substr(6)).empty()) {
        section = Section::merge;
        group = trim(name.substr(6));
        rules.merge_groups[group];
      } else {
        throw DataError(fmt::format("rules line {}: unknown section '{}'", line_no, name));
      }
      continue;
    }
    switch (section) {
      case Section::none:
        throw DataError(fmt::format("rules line {}: phrase outside a section", line_no));
      case Section::blocklist:
        rules.blocklist.insert(text);
        break;
      case Section::merge:
        rules.merge_groups[group].insert(text);
        break;
    }
  }
  return rules;
}

RuleSet load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open rules file: " + path);
  return parse_rules(in);
}

void write_rules(std::ostream& out, const RuleSet& rules) {
  out << "[blocklist]\n";
  for (const auto& p : rules.blocklist) out << p << '\n';
  for (const auto& [canonical, members] : rules.merge_groups) {
    out << "\n[merge " << canonical << "]\n";
    for (const auto& m : members) out << m << '\n';
  }
}

RankedList apply_rules(const RankedList& ranked, const RuleSet& rules) {
  rules.validate();
  std::map<std::string_view, const RankedEntry*> by_phrase;
  for (const auto& e : ranked) by_phrase.emplace(e.phrase, &e);

  std::set<std::string_view> consumed;
  RankedList out;
  for (const auto& [canonical, members] : rules.merge_groups) {
    const auto base = by_phrase.find(canonical);
    RankedEntry merged;
    bool present = false;
    if (base != by_phrase.end()) {
      merged = *base->second;
      present = true;
    } else {
      merged.phrase = canonical;
      merged.display_form = canonical;
    }
    for (const auto& m : members) {
      const auto it = by_phrase.find(m);
      if (it == by_phrase.end()) continue;
      absorb(merged.weighted_total, merged.per_source, *it->second);
      consumed.insert(it->second->phrase);
      present = true;
    }
    consumed.insert(canonical);
    if (present) out.push_back(std::move(merged));
  }
  for (const auto& e : ranked) {
    if (rules.blocklist.count(e.phrase) != 0 || consumed.count(e.phrase) != 0) continue;
    out.push_back(e);
  }
  sort_and_renumber(out);
  return out;
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::accept: return "accept";
    case Action::block: return "block";
    case Action::merge: return "merge";
  }
  return "accept";
}

Action parse_action(std::string_view text) {
  if (text == "accept") return Action::accept;
  if (text == "block") return Action::block;
  if (text == "merge") return Action::merge;
  throw CurationError(CurationErrc::invalid, fmt::format("unknown action '{}'", text));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CurationSession::CurationSession(const RankedList& ranked, SessionOptions options)
    : options_(std::move(options)) {
  if (options_.target_k < 1) throw UsageError("target_k must be >= 1");
  if (options_.window < static_cast<std::size_t>(options_.target_k)) {
    throw UsageError("window must be >= target_k");
  }
  const auto n = std::min(options_.window, ranked.size());
  window_.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = 0; i < window_.size(); ++i) {
    if (!index_.emplace(window_[i].phrase, i).second) {
      throw DataError(fmt::format("duplicate phrase '{}' in ranked window", window_[i].phrase));
    }
  }
}

CurationSession CurationSession::replay(const std::vector<Decision>& log, const RankedList& ranked,
                                        SessionOptions options) {
  CurationSession session(ranked, std::move(options));
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& d = log[i];
    if (d.seq != static_cast<int>(i + 1)) {
      throw CurationError(CurationErrc::invalid,
                          fmt::format("seq {}: expected seq {}", d.seq, i + 1));
    }
    try {
      session.check(d.phrase, d.action, d.target);
    } catch (const CurationError& e) {
      throw CurationError(e.code(), fmt::format("seq {}: {}", d.seq, e.what()));
    }
    session.apply(d);
  }
  return session;
}

const RankedEntry* CurationSession::find(std::string_view phrase) const {
  const auto it = index_.find(phrase);
  return it == index_.end() ? nullptr : &window_[it->second];
}

bool CurationSession::is_decided(std::string_view phrase) const {
  return decided_.find(phrase) != decided_.end();
}

std::optional<std::string> CurationSession::next_candidate() const {
  if (complete()) return std::nullopt;
  for (const auto& e : window_) {
    if (!is_decided(e.phrase)) return e.phrase;
  }
  return std::nullopt;
}

std::vector<RankedEntry> CurationSession::candidates(std::size_t limit) const {
  std::vector<RankedEntry> out;
  for (const auto& e : window_) {
    if (out.size() >= limit) break;
    if (!is_decided(e.phrase)) out.push_back(e);
  }
  return out;
}

void CurationSession::check(std::string_view phrase, Action action, std::string_view target) const {
  if (find(phrase) == nullptr) {
    throw CurationError(CurationErrc::not_found, fmt::format("'{}' is not in the window", phrase));
  }
  if (is_decided(phrase)) {
    throw CurationError(CurationErrc::conflict, fmt::format("'{}' is already decided", phrase));
  }
  switch (action) {
    case Action::accept:
      if (complete()) {
        throw CurationError(CurationErrc::complete,
                            fmt::format("session complete: {} topics accepted", options_.target_k));
      }
      break;
    case Action::merge:
      if (absorbed_.find(target) == absorbed_.end()) {
        throw CurationError(CurationErrc::invalid,
                            fmt::format("merge target '{}' is not an accepted topic", target));
      }
      break;
    case Action::block:
      break;
  }
}

void CurationSession::apply(Decision d) {
  decided_.emplace(d.phrase, log_.size());
  if (d.action == Action::accept) {
    accepted_.push_back(d.phrase);
    absorbed_[d.phrase];
  } else if (d.action == Action::merge) {
    absorbed_.find(d.target)->second.insert(d.phrase);
  }
  if (d.action != Action::merge) d.target.clear();
  log_.push_back(std::move(d));
}

const Decision& CurationSession::decide(std::string_view phrase, Action action, std::string_view target,
                                        std::optional<std::string> timestamp) {
  check(phrase, action, target);
  Decision d;
  d.seq = static_cast<int>(log_.size()) + 1;
  d.phrase = std::string(phrase);
  d.action = action;
  d.target = std::string(target);
  d.timestamp = timestamp ? std::move(*timestamp) : utc_timestamp();
  apply(std::move(d));
  return log_.back();
}

void CurationSession::rebuild() {
  auto log = std::move(log_);
  log_.clear();
  accepted_.clear();
  decided_.clear();
  absorbed_.clear();
  for (auto& d : log) apply(std::move(d));
}

void CurationSession::undo() {
  if (log_.empty()) throw CurationError(CurationErrc::not_found, "no decision to undo");
  log_.pop_back();
  rebuild();
}

RuleSet CurationSession::export_rules() const {
  RuleSet rules;
  for (const auto& d : log_) {
    if (d.action == Action::block) rules.blocklist.insert(d.phrase);
  }
  for (const auto& [topic, members] : absorbed_) rules.merge_groups.emplace(topic, members);
  return rules;
}

std::vector<Topic> CurationSession::topics() const {
  std::vector<Topic> out;
  for (const auto& phrase : accepted_) {
    const RankedEntry& row = *find(phrase);
    Topic t{row.phrase, row.display_form, row.weighted_total, row.per_source, {}};
    t.members = absorbed_.find(phrase)->second;
    for (const auto& m : t.members) absorb(t.weighted_total, t.per_source, *find(m));
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(), [](const Topic& a, const Topic& b) {
    if (a.weighted_total != b.weighted_total) return a.weighted_total > b.weighted_total;
    return a.phrase < b.phrase;
  });
  return out;
}

RankedList CurationSession::final_ranking() const {
  RankedList out;
  for (auto& t : topics()) {
    out.push_back({0, t.phrase, t.display_form, t.weighted_total, t.per_source});
  }
  for (const auto& e : window_) {
    if (!is_decided(e.phrase)) out.push_back(e);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i + 1);
  return out;
}

bool operator==(const CurationSession& a, const CurationSession& b) {
  return a.options_.session_id == b.options_.session_id && a.options_.window == b.options_.window &&
         a.options_.target_k == b.options_.target_k && a.window_ == b.window_ && a.log_ == b.log_ &&
         a.accepted_ == b.accepted_ && a.decided_ == b.decided_ && a.absorbed_ == b.absorbed_;
}

}  // namespace mltopics
