#include "mltopics/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "mltopics/error.hpp"

namespace mltopics {
namespace {

// Runs fn(worker, begin, end) over `jobs` contiguous chunks of [0, n).
template <typename F>
void parallel_chunks(std::size_t n, int jobs, F fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

std::string_view to_string(Method method) { return method == Method::ngram ? "ngram" : "rake"; }

Method parse_method(std::string_view text) {
  if (text == "ngram") return Method::ngram;
  if (text == "rake") return Method::rake;
  throw UsageError(fmt::format("unknown method '{}'", text));
}

PreparedText preprocess(const AbstractRecord& abstract, const StopList& stops) {
  return preprocess(abstract.text, stops);
}

AbstractExtraction extract_abstract(const AbstractRecord& abstract, const StopList& stops,
                                    const ExtractOptions& options) {
  const PreparedText prepared = preprocess(abstract, stops);
  AbstractExtraction out{abstract.abstract_id, abstract.source_id, {}};
  if (options.method == Method::ngram) {
    out.phrases = collapse_occurrences(extract_ngrams_method1(prepared));
  } else {
    out.phrases = extract_rake(prepared, options.rake);
  }
  return out;
}

std::vector<AbstractExtraction> extract_corpus(const std::vector<AbstractRecord>& abstracts,
                                               const StopList& stops, const ExtractOptions& options,
                                               int jobs) {
  std::vector<AbstractExtraction> out(abstracts.size());
  parallel_chunks(abstracts.size(), jobs, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = extract_abstract(abstracts[i], stops, options);
  });
  return out;
}

WeightedCountTable accumulate_parallel(const std::vector<AbstractExtraction>& extractions,
                                       const Registry& registry, const AccumulateOptions& options,
                                       int jobs) {
  for (const auto& x : extractions) {
    if (!registry.contains(x.source_id)) {
      throw DataError(fmt::format("abstract '{}' has unknown source_id '{}'", x.abstract_id, x.source_id));
    }
  }
  std::vector<CountAccumulator> partials(static_cast<std::size_t>(std::max(1, jobs)),
                                         CountAccumulator(options));
  parallel_chunks(extractions.size(), jobs, [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) partials[w].add(extractions[i]);
  });
  CountAccumulator total(options);
  for (const auto& p : partials) total.merge(p);
  return total.finalize(registry);
}

void write_spool_header(std::ostream& out, const Metadata& meta) {
  nlohmann::ordered_json header = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) header[k] = v;
  nlohmann::ordered_json line;
  line["header"] = std::move(header);
  out << line.dump() << '\n';
}

void write_spool_records(std::ostream& out, const AbstractExtraction& extraction,
                         const ExtractOptions& options) {
  const std::string mode =
      options.method == Method::ngram ? "ngram" : std::string(to_string(options.rake.mode));
  for (const auto& p : extraction.phrases) {
    nlohmann::ordered_json j;
    j["abstract_id"] = extraction.abstract_id;
    j["source_id"] = extraction.source_id;
    j["phrase"] = p.phrase;
    j["surface"] = p.surface;
    j["score"] = p.score ? nlohmann::ordered_json(*p.score) : nlohmann::ordered_json();
    j["occurrences"] = p.occurrences;
    j["mode"] = mode;
    out << j.dump() << '\n';
  }
}

Spool read_spool(std::istream& in, bool tolerate_partial_tail) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (tolerate_partial_tail && !text.empty() && text.back() != '\n') {
    const auto last_nl = text.rfind('\n');
    text.erase(last_nl == std::string::npos ? 0 : last_nl + 1);
  }
  Spool spool;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::set<std::string> finished;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::ordered_json::parse(line);
      if (!have_header) {
        if (!j.contains("header")) throw DataError(fmt::format("spool line {}: missing header", line_no));
        for (const auto& [k, v] : j.at("header").items()) spool.meta.emplace_back(k, v.get<std::string>());
        have_header = true;
        continue;
      }
      ScoredPhrase p;
      p.phrase = j.at("phrase").get<std::string>();
      p.surface = j.at("surface").get<std::string>();
      if (!j.at("score").is_null()) p.score = j.at("score").get<double>();
      p.occurrences = j.at("occurrences").get<int>();
      const auto id = j.at("abstract_id").get<std::string>();
      if (spool.extractions.empty() || spool.extractions.back().abstract_id != id) {
        if (!spool.extractions.empty()) finished.insert(spool.extractions.back().abstract_id);
        if (finished.count(id) != 0) {
          throw DataError(fmt::format("spool line {}: records for abstract '{}' are not contiguous", line_no, id));
        }
        spool.extractions.push_back({id, j.at("source_id").get<std::string>(), {}});
      }
      spool.extractions.back().phrases.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("spool line {}: {}", line_no, e.what()));
    }
  }
  if (!have_header) throw DataError("spool: missing header");
  return spool;
}

Spool load_spool(const std::string& path, bool tolerate_partial_tail) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open extraction file: " + path);
  return read_spool(in, tolerate_partial_tail);
}

}  // namespace mltopics
