#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mltopics/corpus.hpp"
#include "mltopics/extract.hpp"
#include "mltopics/rank.hpp"
#include "mltopics/textprep.hpp"

namespace mltopics {

enum class Method { ngram, rake };
std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct ExtractOptions {
  Method method = Method::rake;
  RakeConfig rake;
};

PreparedText preprocess(const AbstractRecord& abstract, const StopList& stops);

/// Deduplicated phrases for one abstract. Method-1 output keeps its
/// multiplicities in `occurrences`; ordering follows phrase_order.
AbstractExtraction extract_abstract(const AbstractRecord& abstract, const StopList& stops,
                                    const ExtractOptions& options);

/// Extracts every abstract using `jobs` worker threads. The result is in
/// corpus order whatever the degree of parallelism.
std::vector<AbstractExtraction> extract_corpus(const std::vector<AbstractRecord>& abstracts,
                                               const StopList& stops, const ExtractOptions& options,
                                               int jobs = 1);

/// Parallel accumulation: partial tables per worker, merged in worker order.
WeightedCountTable accumulate_parallel(const std::vector<AbstractExtraction>& extractions,
                                       const Registry& registry, const AccumulateOptions& options,
                                       int jobs = 1);

/// Intermediate spool: a header line {"header":{...config...}} followed by
/// one JSON object per (abstract, phrase):
///   {"abstract_id","source_id","phrase","surface","score","occurrences","mode"}
/// `score` is null for Method 1; `mode` is "ngram" for Method 1, otherwise the
/// co-occurrence mode.
void write_spool_header(std::ostream& out, const Metadata& meta);
void write_spool_records(std::ostream& out, const AbstractExtraction& extraction,
                         const ExtractOptions& options);

struct Spool {
  Metadata meta;
  std::vector<AbstractExtraction> extractions;  // file order
};

/// Throws DataError on malformed lines. A trailing line without a newline
/// (interrupted write) is ignored when `tolerate_partial_tail` is set.
Spool read_spool(std::istream& in, bool tolerate_partial_tail = false);
Spool load_spool(const std::string& path, bool tolerate_partial_tail = false);

}  // namespace mltopics
