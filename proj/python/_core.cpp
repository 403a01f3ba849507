#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mltopics/config.hpp"
#include "mltopics/corpus.hpp"
#include "mltopics/curate.hpp"
#include "mltopics/error.hpp"
#include "mltopics/extract.hpp"
#include "mltopics/pipeline.hpp"
#include "mltopics/porter.hpp"
#include "mltopics/rank.hpp"
#include "mltopics/session_store.hpp"
#include "mltopics/textprep.hpp"

namespace py = pybind11;
using namespace mltopics;

namespace {

const StopList& stoplist_or_fox(const std::optional<std::string>& path, std::optional<StopList>& holder) {
  if (!path) return StopList::fox();
  holder = StopList::load(*path);
  return *holder;
}

py::dict stats_dict(const CorpusStats& stats) {
  py::list per_source;
  for (const auto& s : stats.per_source) {
    py::dict row;
    row["source_id"] = s.source_id;
    row["count"] = s.count;
    row["share"] = s.share;
    per_source.append(row);
  }
  py::dict out;
  out["total_abstracts"] = stats.total_abstracts;
  out["journals"] = stats.journals;
  out["conferences"] = stats.conferences;
  out["mean_per_source"] = stats.mean_per_source;
  out["mean_share"] = stats.mean_share;
  out["per_source"] = per_source;
  return out;
}

RuleSet rules_from(const py::dict& d) {
  RuleSet rules;
  if (d.contains("blocklist")) rules.blocklist = d["blocklist"].cast<std::set<std::string>>();
  if (d.contains("merge_groups")) {
    rules.merge_groups = d["merge_groups"].cast<std::map<std::string, std::set<std::string>>>();
  }
  return rules;
}

py::dict rules_to(const RuleSet& rules) {
  py::dict d;
  d["blocklist"] = rules.blocklist;
  d["merge_groups"] = rules.merge_groups;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Key-phrase extraction, weighted ranking and topic curation";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  // Owned by the module for the life of the interpreter.
  static py::handle curation_error = py::exception<CurationError>(m, "CurationError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const CurationError& e) {
      py::object instance = curation_error(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(curation_error.ptr(), instance.ptr());
    }
  });

  m.def("porter_stem", [](const std::string& w) { return porter_stem(w); }, py::arg("word"));

  m.def(
      "tokenize", [](const std::string& text) { return tokenize(text).segments; }, py::arg("text"),
      "Lowercase tokens grouped into delimiter-bounded segments.");

  py::class_<Token>(m, "Token")
      .def_readonly("surface", &Token::surface)
      .def_readonly("stem", &Token::stem)
      .def_readonly("stop", &Token::stop)
      .def("__repr__", [](const Token& t) {
        return "Token(" + t.surface + ", " + t.stem + (t.stop ? ", stop)" : ")");
      });

  m.def(
      "preprocess",
      [](const std::string& text, const std::optional<std::string>& stoplist) {
        std::optional<StopList> holder;
        return preprocess(text, stoplist_or_fox(stoplist, holder)).segments;
      },
      py::arg("text"), py::arg("stoplist") = py::none());

  m.def("is_fox_stopword", [](const std::string& w) { return StopList::fox().contains(w); }, py::arg("word"));

  py::class_<ScoredPhrase>(m, "ScoredPhrase")
      .def_readonly("phrase", &ScoredPhrase::phrase)
      .def_readonly("surface", &ScoredPhrase::surface)
      .def_readonly("score", &ScoredPhrase::score)
      .def_readonly("occurrences", &ScoredPhrase::occurrences)
      .def("__repr__", [](const ScoredPhrase& p) {
        return "ScoredPhrase('" + p.phrase + "', " + (p.score ? format_number(*p.score) : "None") + ")";
      });

  m.def(
      "extract_rake",
      [](const std::string& text, int max_n, const std::string& mode, const std::optional<std::string>& stoplist) {
        std::optional<StopList> holder;
        return extract_rake(preprocess(text, stoplist_or_fox(stoplist, holder)),
                            {max_n, parse_cooccurrence_mode(mode)});
      },
      py::arg("text"), py::arg("max_n") = 4, py::arg("mode") = "paper_literal", py::arg("stoplist") = py::none(),
      "RAKE phrases of one abstract, score descending.");

  m.def(
      "extract_ngrams",
      [](const std::string& text, const std::optional<std::string>& stoplist) {
        std::optional<StopList> holder;
        return collapse_occurrences(extract_ngrams_method1(preprocess(text, stoplist_or_fox(stoplist, holder))));
      },
      py::arg("text"), py::arg("stoplist") = py::none(),
      "Stop-word-removed bigrams and trigrams with occurrence counts.");

  py::enum_<SourceKind>(m, "SourceKind")
      .value("journal", SourceKind::journal)
      .value("conference", SourceKind::conference);

  py::class_<SourceRecord>(m, "SourceRecord")
      .def_readonly("source_id", &SourceRecord::source_id)
      .def_readonly("name", &SourceRecord::name)
      .def_readonly("kind", &SourceRecord::kind)
      .def_readonly("weight", &SourceRecord::weight)
      .def_readonly("expected_abstracts", &SourceRecord::expected_abstracts);

  py::class_<Registry>(m, "Registry")
      .def_static("default", []() { return default_registry(); })
      .def_static("load", &load_registry, py::arg("path"))
      .def_property_readonly("records", &Registry::records)
      .def("weight", &Registry::weight, py::arg("source_id"))
      .def("scaled", &Registry::scaled, py::arg("factor"))
      .def("without", &Registry::without, py::arg("source_id"))
      .def("__len__", &Registry::size)
      .def("__contains__", &Registry::contains);

  m.def(
      "corpus_stats",
      [](const std::optional<Registry>& registry, const std::optional<std::map<std::string, std::int64_t>>& counts) {
        const Registry& reg = registry ? *registry : default_registry();
        return stats_dict(counts ? stats_from_counts(*counts, reg) : expected_stats(reg));
      },
      py::arg("registry") = py::none(), py::arg("counts") = py::none(),
      "Corpus statistics from per-source counts (default: the registry's expected counts).");

  py::class_<RankedEntry>(m, "RankedEntry")
      .def(py::init([](int rank, std::string phrase, std::string display_form, double total,
                       std::map<std::string, std::int64_t> per_source) {
             return RankedEntry{rank, std::move(phrase), std::move(display_form), total, std::move(per_source)};
           }),
           py::arg("rank"), py::arg("phrase"), py::arg("display_form"), py::arg("weighted_total"),
           py::arg("per_source") = std::map<std::string, std::int64_t>{})
      .def_readonly("rank", &RankedEntry::rank)
      .def_readonly("phrase", &RankedEntry::phrase)
      .def_readonly("display_form", &RankedEntry::display_form)
      .def_readonly("weighted_total", &RankedEntry::weighted_total)
      .def_readonly("per_source", &RankedEntry::per_source)
      .def("__repr__", [](const RankedEntry& e) {
        return "RankedEntry(" + std::to_string(e.rank) + ", '" + e.phrase + "', " + format_number(e.weighted_total) +
               ")";
      });

  m.def(
      "rank_abstracts",
      [](const std::vector<std::map<std::string, py::object>>& abstracts, const std::optional<Registry>& registry,
         const std::string& method, const std::string& mode, int max_n, const std::string& count_mode,
         std::optional<int> top_t, std::size_t top, int jobs) {
        const Registry& reg = registry ? *registry : default_registry();
        std::vector<AbstractRecord> rows;
        rows.reserve(abstracts.size());
        for (const auto& a : abstracts) {
          AbstractRecord r;
          r.abstract_id = a.at("abstract_id").cast<std::string>();
          r.source_id = a.at("source_id").cast<std::string>();
          if (const auto y = a.find("year"); y != a.end()) r.year = y->second.cast<int>();
          r.text = a.at("text").cast<std::string>();
          rows.push_back(std::move(r));
        }
        RunConfig config;
        config.method = parse_method(method);
        config.mode = parse_cooccurrence_mode(mode);
        config.max_n = max_n;
        config.count_mode = parse_count_mode(count_mode);
        config.top_t = top_t;
        config.top = top;
        config.jobs = jobs;
        config.validate();
        py::gil_scoped_release release;
        const auto ingested = ingest_abstracts(rows, reg);
        if (!ingested.issues.empty()) {
          const auto& issue = ingested.issues.front();
          throw DataError("abstract '" + issue.abstract_id + "': " + issue.reason);
        }
        const auto extractions =
            extract_corpus(ingested.corpus.abstracts(), StopList::fox(), config.extract_options(), jobs);
        return rank(accumulate_parallel(extractions, reg, config.accumulate_options(), jobs), top);
      },
      py::arg("abstracts"), py::arg("registry") = py::none(), py::arg("method") = "rake",
      py::arg("mode") = "paper_literal", py::arg("max_n") = 4, py::arg("count_mode") = "presence",
      py::arg("top_t") = py::none(), py::arg("top") = 500, py::arg("jobs") = 1,
      "Extracts, weights and ranks phrases over abstracts given as dicts with abstract_id, source_id, text.");

  m.def("load_ranked_tsv", [](const std::string& path) { return load_ranked_tsv(path); }, py::arg("path"));
  m.def(
      "ranked_tsv",
      [](const RankedList& list) {
        std::ostringstream out;
        write_ranked_tsv(out, list, {});
        return out.str();
      },
      py::arg("ranked"));

  py::enum_<Band>(m, "Band").value("top", Band::top).value("grey", Band::grey);
  py::class_<PlotRow>(m, "PlotRow")
      .def_readonly("rank", &PlotRow::rank)
      .def_readonly("display_form", &PlotRow::display_form)
      .def_readonly("weighted_total", &PlotRow::weighted_total)
      .def_readonly("band", &PlotRow::band);
  m.def("export_plot_data", &export_plot_data, py::arg("ranked"), py::arg("highlight_k") = 10, py::arg("upto") = 20);

  m.def(
      "apply_rules", [](const RankedList& ranked, const py::dict& rules) { return apply_rules(ranked, rules_from(rules)); },
      py::arg("ranked"), py::arg("rules"),
      "rules: {'blocklist': [...], 'merge_groups': {canonical: [members]}}");
  m.def(
      "load_rules", [](const std::string& path) { return rules_to(load_rules(path)); }, py::arg("path"));

  py::class_<Decision>(m, "Decision")
      .def_readonly("seq", &Decision::seq)
      .def_readonly("phrase", &Decision::phrase)
      .def_property_readonly("action", [](const Decision& d) { return std::string(to_string(d.action)); })
      .def_readonly("target", &Decision::target)
      .def_readonly("timestamp", &Decision::timestamp);

  py::class_<Topic>(m, "Topic")
      .def_readonly("phrase", &Topic::phrase)
      .def_readonly("display_form", &Topic::display_form)
      .def_readonly("weighted_total", &Topic::weighted_total)
      .def_readonly("per_source", &Topic::per_source)
      .def_readonly("members", &Topic::members);

  py::class_<CurationSession>(m, "CurationSession")
      .def(py::init([](const RankedList& ranked, std::string session_id, std::size_t window, int target_k) {
             return CurationSession(ranked, {std::move(session_id), window, target_k});
           }),
           py::arg("ranked"), py::arg("session_id") = "session", py::arg("window") = 500, py::arg("target_k") = 10)
      .def_static(
          "replay",
          [](const std::string& log_path, const RankedList& ranked, std::string session_id, std::size_t window,
             int target_k) {
            return CurationSession::replay(load_decision_log(log_path), ranked,
                                           {std::move(session_id), window, target_k});
          },
          py::arg("log_path"), py::arg("ranked"), py::arg("session_id") = "session", py::arg("window") = 500,
          py::arg("target_k") = 10, "Rebuilds a session from a decision log file.")
      .def("next_candidate", &CurationSession::next_candidate)
      .def("candidates", &CurationSession::candidates, py::arg("limit") = 20)
      .def(
          "decide",
          [](CurationSession& s, const std::string& phrase, const std::string& action, const std::string& target) {
            return s.decide(phrase, parse_action(action), target);
          },
          py::arg("phrase"), py::arg("action"), py::arg("target") = "")
      .def("undo", &CurationSession::undo)
      .def("export_rules", [](const CurationSession& s) { return rules_to(s.export_rules()); })
      .def("topics", &CurationSession::topics)
      .def("final_ranking", &CurationSession::final_ranking)
      .def_property_readonly("complete", &CurationSession::complete)
      .def_property_readonly("accepted", &CurationSession::accepted)
      .def_property_readonly("log", &CurationSession::log)
      .def("__eq__", [](const CurationSession& a, const CurationSession& b) { return a == b; });
}
