#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "mltopics/extract.hpp"
#include "mltopics/pipeline.hpp"
#include "mltopics/rank.hpp"

namespace mltopics {

/// Resolved settings for one CLI run. Precedence: flags > config file > defaults.
struct RunConfig {
  Method method = Method::rake;
  CooccurrenceMode mode = CooccurrenceMode::paper_literal;
  int max_n = 4;
  CountMode count_mode = CountMode::presence;
  std::optional<int> top_t;
  std::size_t window = 500;
  int target_k = 10;
  std::size_t top = 500;  // rows written by `rank`
  int jobs = 1;

  std::string registry;  // empty: bundled registry
  std::string abstracts;
  std::string stoplist;  // empty: bundled Fox list
  std::string rules;
  std::string output;
  std::string extractions;
  std::string ranked;
  std::string log;
  std::string report;
  std::string static_dir;
  std::string host = "127.0.0.1";
  int port = 8734;

  /// Throws UsageError when max_n < 1, target_k < 1, window < target_k,
  /// top < 1, jobs < 1 or top_t < 1.
  void validate() const;
  ExtractOptions extract_options() const;
  AccumulateOptions accumulate_options() const;
};

/// Flat `key=value` lines; '#' starts a comment. Keys use the long flag
/// names with '-' or '_' (e.g. `max_n=3`, `count-mode=occurrence`).
std::map<std::string, std::string> parse_config_file(std::istream& in);

/// Applies one key to `config`. Throws UsageError on unknown keys or bad values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Provenance block for output files. Excludes paths and the job count so
/// outputs are byte-identical across machines and degrees of parallelism.
Metadata extraction_metadata(const RunConfig& config);
Metadata ranking_metadata(const RunConfig& config);

}  // namespace mltopics
