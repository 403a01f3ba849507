#include "mltopics/config.hpp"

#include <algorithm>
#include <charconv>
#include <istream>

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

int to_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(fmt::format("config: '{}' expects an integer, got '{}'", key, value));
  }
  return out;
}

std::size_t to_size(const std::string& key, const std::string& value) {
  const int v = to_int(key, value);
  if (v < 0) throw UsageError(fmt::format("config: '{}' must be non-negative", key));
  return static_cast<std::size_t>(v);
}

}  // namespace

void RunConfig::validate() const {
  if (max_n < 1) throw UsageError("max_n must be >= 1");
  if (target_k < 1) throw UsageError("target_k must be >= 1");
  if (window < static_cast<std::size_t>(target_k)) throw UsageError("window must be >= target_k");
  if (top < 1) throw UsageError("top must be >= 1");
  if (jobs < 1) throw UsageError("jobs must be >= 1");
  if (top_t && *top_t < 1) throw UsageError("top_t must be >= 1");
  if (port < 0 || port > 65535) throw UsageError("port out of range");
}

ExtractOptions RunConfig::extract_options() const { return {method, {max_n, mode}}; }

AccumulateOptions RunConfig::accumulate_options() const { return {count_mode, top_t}; }

std::map<std::string, std::string> parse_config_file(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("config line {}: expected key=value", line_no));
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key.empty()) throw UsageError(fmt::format("config line {}: empty key", line_no));
    values[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return values;
}

void set_config_value(RunConfig& c, const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "method") c.method = parse_method(value);
  else if (key == "mode") c.mode = parse_cooccurrence_mode(value);
  else if (key == "max_n") c.max_n = to_int(key, value);
  else if (key == "count_mode") c.count_mode = parse_count_mode(value);
  else if (key == "top_t") c.top_t = value.empty() ? std::nullopt : std::optional<int>(to_int(key, value));
  else if (key == "window") c.window = to_size(key, value);
  else if (key == "target_k") c.target_k = to_int(key, value);
  else if (key == "top") c.top = to_size(key, value);
  else if (key == "jobs") c.jobs = to_int(key, value);
  else if (key == "registry") c.registry = value;
  else if (key == "abstracts") c.abstracts = value;
  else if (key == "stoplist") c.stoplist = value;
  else if (key == "rules") c.rules = value;
  else if (key == "output") c.output = value;
  else if (key == "extractions") c.extractions = value;
  else if (key == "ranked") c.ranked = value;
  else if (key == "log") c.log = value;
  else if (key == "report") c.report = value;
  else if (key == "static_dir") c.static_dir = value;
  else if (key == "host") c.host = value;
  else if (key == "port") c.port = to_int(key, value);
  else throw UsageError(fmt::format("config: unknown key '{}'", raw_key));
}

Metadata extraction_metadata(const RunConfig& c) {
  Metadata meta{{"method", std::string(to_string(c.method))}};
  if (c.method == Method::rake) {
    meta.emplace_back("mode", std::string(to_string(c.mode)));
    meta.emplace_back("max_n", std::to_string(c.max_n));
  }
  meta.emplace_back("stoplist", c.stoplist.empty() ? "fox" : "custom");
  return meta;
}

Metadata ranking_metadata(const RunConfig& c) {
  Metadata meta = extraction_metadata(c);
  meta.emplace_back("count_mode", std::string(to_string(c.count_mode)));
  meta.emplace_back("top_t", c.top_t ? std::to_string(*c.top_t) : "all");
  meta.emplace_back("registry", c.registry.empty() ? "bundled" : "custom");
  meta.emplace_back("top", std::to_string(c.top));
  return meta;
}

}  // namespace mltopics
