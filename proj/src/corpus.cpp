#include "mltopics/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "mltopics/bundled.hpp"
#include "mltopics/error.hpp"

namespace mltopics {
namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) throw DataError(fmt::format("registry line {}: unterminated quote", line_no));
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double parse_weight(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw DataError(fmt::format("registry line {}: bad weight '{}'", line_no, text));
  }
  return value;
}

std::optional<std::int64_t> parse_expected(const std::string& text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0) {
    throw DataError(fmt::format("registry line {}: bad expected_abstracts '{}'", line_no, text));
  }
  return value;
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  return kind == SourceKind::journal ? "journal" : "conference";
}

SourceKind parse_source_kind(std::string_view text) {
  if (text == "journal") return SourceKind::journal;
  if (text == "conference") return SourceKind::conference;
  throw DataError(fmt::format("unknown source kind '{}'", text));
}

Registry::Registry(std::vector<SourceRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.source_id.empty()) throw DataError("source with empty source_id");
    if (!(r.weight >= 0.0)) {
      throw DataError(fmt::format("negative weight for source '{}'", r.source_id));
    }
    if (!index_.emplace(r.source_id, i).second) {
      throw DataError(fmt::format("duplicate source_id '{}'", r.source_id));
    }
  }
}

std::size_t Registry::count(SourceKind kind) const {
  std::size_t n = 0;
  for (const auto& r : records_) n += r.kind == kind ? 1 : 0;
  return n;
}

const SourceRecord* Registry::find(std::string_view source_id) const {
  const auto it = index_.find(std::string(source_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

double Registry::weight(std::string_view source_id) const {
  const auto* r = find(source_id);
  if (r == nullptr) throw DataError(fmt::format("unknown source_id '{}'", source_id));
  return r->weight;
}

Registry Registry::scaled(double factor) const {
  auto copy = records_;
  for (auto& r : copy) r.weight *= factor;
  return Registry(std::move(copy));
}

Registry Registry::without(std::string_view source_id) const {
  std::vector<SourceRecord> copy;
  for (const auto& r : records_) {
    if (r.source_id != source_id) copy.push_back(r);
  }
  return Registry(std::move(copy));
}

Registry parse_registry(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<SourceRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split_csv_line(line, line_no);
    for (auto& f : fields) f = trim(f);
    if (!have_header) {
      const std::vector<std::string> expected{"source_id", "name", "kind", "weight",
                                              "expected_abstracts"};
      if (fields != expected) {
        throw DataError(fmt::format("registry line {}: expected header '{}'", line_no,
                                    fmt::join(expected, ",")));
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 5) {
      throw DataError(
          fmt::format("registry line {}: malformed row ({} fields, want 5)", line_no, fields.size()));
    }
    SourceRecord r;
    r.source_id = fields[0];
    r.name = fields[1];
    try {
      r.kind = parse_source_kind(fields[2]);
    } catch (const DataError& e) {
      throw DataError(fmt::format("registry line {}: {}", line_no, e.what()));
    }
    r.weight = parse_weight(fields[3], line_no);
    if (r.weight < 0.0) {
      throw DataError(fmt::format("registry line {}: negative weight for '{}'", line_no, r.source_id));
    }
    r.expected_abstracts = parse_expected(fields[4], line_no);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw DataError("empty registry");
  return Registry(std::move(records));
}

Registry load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open registry: " + path);
  return parse_registry(in);
}

const Registry& default_registry() {
  static const Registry registry = [] {
    std::istringstream in{std::string(bundled::default_registry_csv())};
    return parse_registry(in);
  }();
  return registry;
}

bool CorpusBuilder::add(AbstractRecord record, std::size_t line) {
  auto reject = [&](std::string reason) {
    issues_.push_back({line, record.abstract_id, std::move(reason)});
    return false;
  };
  if (record.abstract_id.empty()) return reject("empty abstract_id");
  if (!registry_->contains(record.source_id)) {
    return reject(fmt::format("unknown source_id '{}'", record.source_id));
  }
  if (trim(record.text).empty()) return reject("empty text");
  if (seen_.count(record.abstract_id) != 0) {
    return reject(fmt::format("duplicate abstract_id '{}'", record.abstract_id));
  }
  seen_.emplace(record.abstract_id, corpus_.abstracts_.size());
  corpus_.abstracts_.push_back(std::move(record));
  return true;
}

Corpus CorpusBuilder::build() && { return std::move(corpus_); }

IngestResult ingest_abstracts(const std::vector<AbstractRecord>& rows, const Registry& registry) {
  CorpusBuilder builder(registry);
  for (const auto& row : rows) builder.add(row);
  auto issues = builder.issues();
  return {std::move(builder).build(), std::move(issues)};
}

IngestResult ingest_abstracts(std::istream& in, const Registry& registry) {
  CorpusBuilder builder(registry);
  std::vector<IngestIssue> parse_issues;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    AbstractRecord rec;
    try {
      const auto j = nlohmann::json::parse(line);
      rec.abstract_id = j.at("abstract_id").get<std::string>();
      rec.source_id = j.at("source_id").get<std::string>();
      rec.year = j.at("year").get<int>();
      rec.text = j.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      parse_issues.push_back({line_no, rec.abstract_id, fmt::format("malformed record: {}", e.what())});
      continue;
    }
    builder.add(std::move(rec), line_no);
  }
  std::vector<IngestIssue> issues = builder.issues();
  issues.insert(issues.end(), parse_issues.begin(), parse_issues.end());
  std::stable_sort(issues.begin(), issues.end(),
                   [](const IngestIssue& a, const IngestIssue& b) { return a.line < b.line; });
  return {std::move(builder).build(), std::move(issues)};
}

IngestResult load_abstracts(const std::string& path, const Registry& registry) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open abstracts file: " + path);
  return ingest_abstracts(in, registry);
}

std::string to_jsonl(const AbstractRecord& record) {
  nlohmann::ordered_json j;
  j["abstract_id"] = record.abstract_id;
  j["source_id"] = record.source_id;
  j["year"] = record.year;
  j["text"] = record.text;
  return j.dump();
}

const SourceShare* CorpusStats::find(std::string_view source_id) const {
  for (const auto& s : per_source) {
    if (s.source_id == source_id) return &s;
  }
  return nullptr;
}

const SourceShare& CorpusStats::largest() const {
  if (per_source.empty()) throw DataError("no sources");
  const SourceShare* best = &per_source.front();
  for (const auto& s : per_source) {
    if (s.count > best->count) best = &s;
  }
  return *best;
}

CorpusStats stats_from_counts(const std::map<std::string, std::int64_t>& counts,
                              const Registry& registry) {
  CorpusStats stats;
  stats.journals = registry.count(SourceKind::journal);
  stats.conferences = registry.count(SourceKind::conference);
  for (const auto& [id, n] : counts) {
    if (!registry.contains(id)) throw DataError(fmt::format("unknown source_id '{}'", id));
    if (n < 0) throw DataError(fmt::format("negative count for '{}'", id));
    stats.total_abstracts += n;
  }
  if (stats.total_abstracts == 0) throw DataError("empty corpus");
  const auto total = static_cast<double>(stats.total_abstracts);
  for (const auto& r : registry.records()) {
    const auto it = counts.find(r.source_id);
    const std::int64_t n = it == counts.end() ? 0 : it->second;
    stats.per_source.push_back({r.source_id, n, static_cast<double>(n) / total});
  }
  const auto sources = static_cast<double>(registry.size());
  stats.mean_per_source = total / sources;
  stats.mean_share = 1.0 / sources;
  return stats;
}

CorpusStats corpus_stats(const Corpus& corpus, const Registry& registry) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& a : corpus.abstracts()) ++counts[a.source_id];
  return stats_from_counts(counts, registry);
}

CorpusStats expected_stats(const Registry& registry) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& r : registry.records()) counts[r.source_id] = r.expected_abstracts.value_or(0);
  return stats_from_counts(counts, registry);
}

std::string format_percent(double fraction) { return fmt::format("{:.2f}%", fraction * 100.0); }

std::string format_count(std::int64_t value) {
  std::string digits = std::to_string(value < 0 ? -value : value);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return value < 0 ? "-" + out : out;
}

}  // namespace mltopics
