#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mltopics {

enum class SourceKind { journal, conference };

std::string_view to_string(SourceKind kind);
SourceKind parse_source_kind(std::string_view text);

/// A journal or conference. `weight` is the impact factor for journals and
/// the average citation count for conferences.
struct SourceRecord {
  std::string source_id;
  std::string name;
  SourceKind kind = SourceKind::journal;
  double weight = 0.0;
  std::optional<std::int64_t> expected_abstracts;

  friend bool operator==(const SourceRecord&, const SourceRecord&) = default;
};

class Registry {
 public:
  Registry() = default;
  /// Throws DataError on duplicate ids or negative weights.
  explicit Registry(std::vector<SourceRecord> records);

  const std::vector<SourceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  std::size_t count(SourceKind kind) const;

  const SourceRecord* find(std::string_view source_id) const;
  bool contains(std::string_view source_id) const { return find(source_id) != nullptr; }
  /// Throws DataError for an unknown id.
  double weight(std::string_view source_id) const;

  /// Copy with every weight multiplied by `factor`.
  Registry scaled(double factor) const;
  /// Copy without the given source.
  Registry without(std::string_view source_id) const;

 private:
  std::vector<SourceRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Registry table: header row `source_id,name,kind,weight,expected_abstracts`,
/// comma separated, fields optionally double-quoted ("" escapes a quote).
Registry parse_registry(std::istream& in);
Registry load_registry(const std::string& path);
/// The 39-source registry (31 journals, 8 conferences) compiled into the library.
const Registry& default_registry();

struct AbstractRecord {
  std::string abstract_id;
  std::string source_id;
  int year = 0;
  std::string text;

  friend bool operator==(const AbstractRecord&, const AbstractRecord&) = default;
};

struct IngestIssue {
  std::size_t line = 0;  // 1-based; 0 when rows did not come from a file
  std::string abstract_id;
  std::string reason;
};

/// Immutable, validated collection of abstracts in ingestion order.
class Corpus {
 public:
  Corpus() = default;

  const std::vector<AbstractRecord>& abstracts() const { return abstracts_; }
  std::size_t size() const { return abstracts_.size(); }
  bool empty() const { return abstracts_.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  friend class CorpusBuilder;
  std::vector<AbstractRecord> abstracts_;
};

/// Single-writer accumulation of validated rows. Invalid rows are reported
/// and skipped.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(const Registry& registry) : registry_(&registry) {}

  /// Returns false (and records an issue) if the row was rejected.
  bool add(AbstractRecord record, std::size_t line = 0);
  const std::vector<IngestIssue>& issues() const { return issues_; }
  Corpus build() &&;

 private:
  const Registry* registry_;
  Corpus corpus_;
  std::unordered_map<std::string, std::size_t> seen_;
  std::vector<IngestIssue> issues_;
};

struct IngestResult {
  Corpus corpus;
  std::vector<IngestIssue> issues;
};

IngestResult ingest_abstracts(const std::vector<AbstractRecord>& rows, const Registry& registry);
/// Newline-delimited JSON objects with keys abstract_id, source_id, year, text.
/// Blank lines are skipped; unparseable lines become issues.
IngestResult ingest_abstracts(std::istream& in, const Registry& registry);
IngestResult load_abstracts(const std::string& path, const Registry& registry);

std::string to_jsonl(const AbstractRecord& record);

struct SourceShare {
  std::string source_id;
  std::int64_t count = 0;
  double share = 0.0;  // fraction of the total
};

struct CorpusStats {
  std::int64_t total_abstracts = 0;
  std::size_t journals = 0;
  std::size_t conferences = 0;
  std::vector<SourceShare> per_source;  // registry order, every source listed
  double mean_per_source = 0.0;
  double mean_share = 0.0;

  const SourceShare* find(std::string_view source_id) const;
  /// Largest source by count; ties go to the earlier registry row.
  const SourceShare& largest() const;
};

/// Statistics over all registry sources, including those with no abstracts.
/// Throws DataError when the corpus is empty.
CorpusStats corpus_stats(const Corpus& corpus, const Registry& registry);
/// Same statistics computed from each source's expected_abstracts.
CorpusStats expected_stats(const Registry& registry);
CorpusStats stats_from_counts(const std::map<std::string, std::int64_t>& counts,
                              const Registry& registry);

/// "2.56%" style percentage with two decimals.
std::string format_percent(double fraction);
/// "53,526" style integer with thousands separators.
std::string format_count(std::int64_t value);

}  // namespace mltopics
