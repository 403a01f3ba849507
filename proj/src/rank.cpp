#include "mltopics/rank.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include "json.hpp"

#include "mltopics/error.hpp"

namespace mltopics {
namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError(fmt::format("ranked table line {}: bad {} '{}'", line_no, what, text));
  }
  return value;
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

constexpr std::string_view kRankedHeader = "rank\tphrase\tdisplay_form\tweighted_total\tper_source";

}  // namespace

std::string_view to_string(CountMode mode) {
  return mode == CountMode::presence ? "presence" : "occurrence";
}

CountMode parse_count_mode(std::string_view text) {
  if (text == "presence") return CountMode::presence;
  if (text == "occurrence") return CountMode::occurrence;
  throw UsageError(fmt::format("unknown count mode '{}'", text));
}

void CountAccumulator::add(const AbstractExtraction& extraction) {
  std::size_t limit = extraction.phrases.size();
  const ScoredPhrase* phrases = extraction.phrases.data();
  std::vector<ScoredPhrase> ordered;
  if (options_.top_t) {
    ordered = extraction.phrases;
    std::sort(ordered.begin(), ordered.end(), phrase_order);
    limit = std::min(limit, static_cast<std::size_t>(std::max(*options_.top_t, 0)));
    phrases = ordered.data();
  }
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& p = phrases[i];
    const std::int64_t n = options_.count_mode == CountMode::presence ? 1 : p.occurrences;
    auto& entry = rows_[p.phrase];
    entry.per_source[extraction.source_id] += n;
    entry.surfaces[p.surface] += n;
  }
}

void CountAccumulator::merge(const CountAccumulator& other) {
  for (const auto& [phrase, e] : other.rows_) {
    auto& mine = rows_[phrase];
    for (const auto& [s, n] : e.per_source) mine.per_source[s] += n;
    for (const auto& [s, n] : e.surfaces) mine.surfaces[s] += n;
  }
}

double weighted_total(const std::map<std::string, std::int64_t>& per_source, const Registry& registry) {
  double total = 0.0;
  for (const auto& [source, n] : per_source) total += registry.weight(source) * static_cast<double>(n);
  return total;
}

WeightedCountTable CountAccumulator::finalize(const Registry& registry) const {
  WeightedCountTable table;
  for (const auto& [phrase, e] : rows_) {
    PhraseCounts row;
    row.per_source = e.per_source;
    row.weighted_total = weighted_total(e.per_source, registry);
    const auto best = std::max_element(
        e.surfaces.begin(), e.surfaces.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    row.display_form = best == e.surfaces.end() ? phrase : best->first;
    table.rows.emplace(phrase, std::move(row));
  }
  return table;
}

WeightedCountTable accumulate(const std::vector<AbstractExtraction>& extractions,
                              const Registry& registry, const AccumulateOptions& options) {
  CountAccumulator acc(options);
  for (const auto& x : extractions) {
    if (!registry.contains(x.source_id)) {
      throw DataError(fmt::format("abstract '{}' has unknown source_id '{}'", x.abstract_id, x.source_id));
    }
    acc.add(x);
  }
  return acc.finalize(registry);
}

bool ranked_order(const RankedEntry& a, const RankedEntry& b) {
  if (a.weighted_total != b.weighted_total) return a.weighted_total > b.weighted_total;
  return a.phrase < b.phrase;
}

void sort_and_renumber(RankedList& list) {
  std::sort(list.begin(), list.end(), ranked_order);
  for (std::size_t i = 0; i < list.size(); ++i) list[i].rank = static_cast<int>(i + 1);
}

RankedList rank(const WeightedCountTable& table, std::size_t top_k) {
  if (top_k < 1) throw UsageError("top_k must be >= 1");
  RankedList list;
  list.reserve(table.rows.size());
  for (const auto& [phrase, row] : table.rows) {
    list.push_back({0, phrase, row.display_form, row.weighted_total, row.per_source});
  }
  const auto keep = std::min(top_k, list.size());
  std::partial_sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(keep), list.end(),
                    ranked_order);
  list.resize(keep);
  for (std::size_t i = 0; i < list.size(); ++i) list[i].rank = static_cast<int>(i + 1);
  return list;
}

std::string_view to_string(Band band) { return band == Band::top ? "top" : "grey"; }

std::vector<PlotRow> export_plot_data(const RankedList& ranked, int highlight_k, int upto) {
  std::vector<PlotRow> rows;
  for (const auto& e : ranked) {
    if (e.rank > upto) break;
    rows.push_back({e.rank, e.display_form, e.weighted_total, e.rank <= highlight_k ? Band::top : Band::grey});
  }
  return rows;
}

std::string format_number(double value) { return fmt::format("{}", value); }

void write_ranked_tsv(std::ostream& out, const RankedList& list, const Metadata& meta) {
  write_metadata(out, meta);
  out << kRankedHeader << '\n';
  for (const auto& e : list) {
    std::string sources;
    for (const auto& [s, n] : e.per_source) {
      if (!sources.empty()) sources.push_back(';');
      sources += fmt::format("{}:{}", s, n);
    }
    out << e.rank << '\t' << e.phrase << '\t' << e.display_form << '\t'
        << format_number(e.weighted_total) << '\t' << sources << '\n';
  }
}

RankedList read_ranked_tsv(std::istream& in, Metadata* meta) {
  RankedList list;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto start = line.find_first_not_of("# ");
      if (meta != nullptr && start != std::string::npos) {
        const auto body = line.substr(start);
        const auto eq = body.find('=');
        if (eq != std::string::npos) meta->emplace_back(body.substr(0, eq), body.substr(eq + 1));
      }
      continue;
    }
    if (!have_header) {
      if (line != kRankedHeader) {
        throw DataError(fmt::format("ranked table line {}: expected column header", line_no));
      }
      have_header = true;
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() != 5) {
      throw DataError(fmt::format("ranked table line {}: expected 5 columns", line_no));
    }
    RankedEntry e;
    e.rank = parse_number<int>(fields[0], line_no, "rank");
    e.phrase = fields[1];
    e.display_form = fields[2];
    e.weighted_total = parse_number<double>(fields[3], line_no, "weighted_total");
    if (e.phrase.empty()) throw DataError(fmt::format("ranked table line {}: empty phrase", line_no));
    if (!fields[4].empty()) {
      for (const auto& item : split(fields[4], ';')) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos) {
          throw DataError(fmt::format("ranked table line {}: bad per_source '{}'", line_no, item));
        }
        e.per_source[item.substr(0, colon)] =
            parse_number<std::int64_t>(std::string_view(item).substr(colon + 1), line_no, "count");
      }
    }
    list.push_back(std::move(e));
  }
  if (!have_header) throw DataError("ranked table: missing column header");
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].rank != static_cast<int>(i + 1)) {
      throw DataError(fmt::format("ranked table: rank {} out of sequence at row {}", list[i].rank, i + 1));
    }
    if (i > 0 && !ranked_order(list[i - 1], list[i])) {
      throw DataError(fmt::format("ranked table: row {} breaks the ranking order", i + 1));
    }
  }
  return list;
}

RankedList load_ranked_tsv(const std::string& path, Metadata* meta) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open ranked table: " + path);
  return read_ranked_tsv(in, meta);
}

void write_ranked_json(std::ostream& out, const RankedList& list, const Metadata& meta) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) j["config"][k] = v;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& e : list) {
    nlohmann::ordered_json row;
    row["rank"] = e.rank;
    row["phrase"] = e.phrase;
    row["display_form"] = e.display_form;
    row["weighted_total"] = e.weighted_total;
    row["per_source"] = nlohmann::ordered_json::object();
    for (const auto& [s, n] : e.per_source) row["per_source"][s] = n;
    j["rows"].push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

void write_plot_tsv(std::ostream& out, const std::vector<PlotRow>& rows, const Metadata& meta) {
  write_metadata(out, meta);
  out << "rank\tdisplay_form\tweighted_total\tband\n";
  for (const auto& r : rows) {
    out << r.rank << '\t' << r.display_form << '\t' << format_number(r.weighted_total) << '\t'
        << to_string(r.band) << '\n';
  }
}

}  // namespace mltopics
