#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mltopics/corpus.hpp"
#include "mltopics/extract.hpp"

namespace mltopics {

/// How an abstract contributes to a phrase's raw count.
enum class CountMode {
  presence,    // 1 if the abstract's extraction contains the phrase
  occurrence,  // number of times the phrase was generated in the abstract
};

std::string_view to_string(CountMode mode);
CountMode parse_count_mode(std::string_view text);

/// Deduplicated phrases extracted from one abstract.
struct AbstractExtraction {
  std::string abstract_id;
  std::string source_id;
  std::vector<ScoredPhrase> phrases;
};

struct AccumulateOptions {
  CountMode count_mode = CountMode::presence;
  std::optional<int> top_t;  // keep only the first T phrases per abstract (phrase_order)
};

struct PhraseCounts {
  std::map<std::string, std::int64_t> per_source;
  double weighted_total = 0.0;
  std::string display_form;
};

struct WeightedCountTable {
  std::map<std::string, PhraseCounts> rows;
};

/// Exact integer counts, mergeable in any order. Weights are applied once
/// in finalize().
class CountAccumulator {
 public:
  explicit CountAccumulator(AccumulateOptions options = {}) : options_(options) {}

  void add(const AbstractExtraction& extraction);
  void merge(const CountAccumulator& other);
  /// Throws DataError if a counted source is missing from `registry`.
  WeightedCountTable finalize(const Registry& registry) const;

  friend bool operator==(const CountAccumulator& a, const CountAccumulator& b) {
    return a.rows_ == b.rows_;
  }

 private:
  struct Entry {
    std::map<std::string, std::int64_t> per_source;
    std::map<std::string, std::int64_t> surfaces;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  AccumulateOptions options_;
  std::map<std::string, Entry> rows_;
};

/// Σ_s weight(s) × count(s), summed in ascending source_id order.
double weighted_total(const std::map<std::string, std::int64_t>& per_source, const Registry& registry);

/// Throws DataError for abstracts whose source is not in the registry.
WeightedCountTable accumulate(const std::vector<AbstractExtraction>& extractions,
                              const Registry& registry, const AccumulateOptions& options = {});

struct RankedEntry {
  int rank = 0;
  std::string phrase;
  std::string display_form;
  double weighted_total = 0.0;
  std::map<std::string, std::int64_t> per_source;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

using RankedList = std::vector<RankedEntry>;

/// weighted_total descending, then phrase ascending.
bool ranked_order(const RankedEntry& a, const RankedEntry& b);
/// Sorts by ranked_order and assigns ranks 1..n.
void sort_and_renumber(RankedList& list);

/// First `top_k` rows (or fewer) in ranked order. Throws UsageError if top_k < 1.
RankedList rank(const WeightedCountTable& table, std::size_t top_k);

enum class Band { top, grey };
std::string_view to_string(Band band);

struct PlotRow {
  int rank = 0;
  std::string display_form;
  double weighted_total = 0.0;
  Band band = Band::top;

  friend bool operator==(const PlotRow&, const PlotRow&) = default;
};

/// Rows for ranks 1..upto; band top for rank <= highlight_k, grey after.
std::vector<PlotRow> export_plot_data(const RankedList& ranked, int highlight_k = 10, int upto = 20);

/// Ordered key/value provenance written at the head of every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Tab-separated: `# key=value` metadata lines, a column header, then
/// rank, phrase, display_form, weighted_total, per_source ("id:n;id:n").
void write_ranked_tsv(std::ostream& out, const RankedList& list, const Metadata& meta);
RankedList read_ranked_tsv(std::istream& in, Metadata* meta = nullptr);
RankedList load_ranked_tsv(const std::string& path, Metadata* meta = nullptr);

void write_ranked_json(std::ostream& out, const RankedList& list, const Metadata& meta);
void write_plot_tsv(std::ostream& out, const std::vector<PlotRow>& rows, const Metadata& meta);

/// Shortest representation that parses back to the same double.
std::string format_number(double value);

}  // namespace mltopics
