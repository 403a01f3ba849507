// mltopics: key-phrase extraction, weighted ranking and topic curation over
// a corpus of publication abstracts.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mltopics/config.hpp"
#include "mltopics/corpus.hpp"
#include "mltopics/curate.hpp"
#include "mltopics/error.hpp"
#include "mltopics/pipeline.hpp"
#include "mltopics/rank.hpp"
#include "mltopics/service.hpp"
#include "mltopics/session_store.hpp"

namespace fs = std::filesystem;
using namespace mltopics;

namespace {

// Options whose values override the config file only when given on the
// command line.
struct FlagSet {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    options.emplace_back(key, app->add_option("--" + flag, values[key], help));
  }

  RunConfig resolve() const {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config file: " + config_path);
      for (const auto& [k, v] : parse_config_file(in)) set_config_value(config, k, v);
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) set_config_value(config, key, values.at(key));
    }
    config.validate();
    return config;
  }
};

void add_config_flag(CLI::App* app, FlagSet& flags) {
  app->add_option("--config", flags.config_path, "key=value config file (flags take precedence)");
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(fmt::format("--{} is required", flag));
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw UsageError(fmt::format("{} not found: {}", what, path));
}

Registry resolve_registry(const RunConfig& c) {
  if (c.registry.empty()) return default_registry();
  require_file(c.registry, "registry");
  return load_registry(c.registry);
}

StopList resolve_stoplist(const RunConfig& c) {
  if (c.stoplist.empty()) return StopList::fox();
  require_file(c.stoplist, "stop list");
  return StopList::load(c.stoplist);
}

Corpus resolve_corpus(const RunConfig& c, const Registry& registry) {
  require_file(c.abstracts, "abstracts file");
  auto result = load_abstracts(c.abstracts, registry);
  for (const auto& issue : result.issues) {
    std::cerr << fmt::format("{}:{}: skipped row: {}\n", c.abstracts, issue.line, issue.reason);
  }
  if (!result.issues.empty()) {
    std::cerr << fmt::format("{} row(s) rejected, {} accepted\n", result.issues.size(), result.corpus.size());
  }
  return std::move(result.corpus);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

SessionOptions session_options(const RunConfig& c, const std::string& id) {
  SessionOptions o;
  o.session_id = id;
  o.window = c.window;
  o.target_k = c.target_k;
  return o;
}

std::string session_id_for(const RunConfig& c) {
  if (!c.log.empty()) return fs::path(c.log).stem().string();
  return fs::path(c.ranked).stem().string();
}

// ---------------------------------------------------------------- stats

int cmd_stats(const RunConfig& c) {
  const Registry registry = resolve_registry(c);
  CorpusStats stats;
  std::vector<IngestIssue> issues;
  if (c.abstracts.empty()) {
    stats = expected_stats(registry);
  } else {
    stats = corpus_stats(resolve_corpus(c, registry), registry);
  }
  const auto& largest = stats.largest();
  std::cout << fmt::format("{} sources ({} journals + {} conferences), {} abstracts\n", registry.size(),
                           stats.journals, stats.conferences, format_count(stats.total_abstracts));
  std::cout << fmt::format("mean per source: {} abstracts ({})\n",
                           format_count(static_cast<std::int64_t>(stats.mean_per_source)),
                           format_percent(stats.mean_share));
  std::cout << fmt::format("largest source: {} with {} abstracts ({})\n\n", registry.find(largest.source_id)->name,
                           format_count(largest.count), format_percent(largest.share));
  std::cout << fmt::format("{:<10} {:<10} {:>8} {:>9} {:>7}  {}\n", "source_id", "kind", "weight", "abstracts",
                           "share", "name");
  for (const auto& s : stats.per_source) {
    const auto* r = registry.find(s.source_id);
    std::cout << fmt::format("{:<10} {:<10} {:>8} {:>9} {:>7}  {}\n", s.source_id, to_string(r->kind),
                             format_number(r->weight), format_count(s.count), format_percent(s.share), r->name);
  }
  if (!c.report.empty()) {
    nlohmann::ordered_json j;
    j["sources"] = registry.size();
    j["journals"] = stats.journals;
    j["conferences"] = stats.conferences;
    j["total_abstracts"] = stats.total_abstracts;
    j["mean_per_source"] = stats.mean_per_source;
    j["mean_share"] = stats.mean_share;
    j["counts_from"] = c.abstracts.empty() ? "registry" : "abstracts";
    j["per_source"] = nlohmann::ordered_json::array();
    for (const auto& s : stats.per_source) {
      const auto* r = registry.find(s.source_id);
      j["per_source"].push_back({{"source_id", s.source_id},
                                 {"name", r->name},
                                 {"kind", to_string(r->kind)},
                                 {"weight", r->weight},
                                 {"count", s.count},
                                 {"share", s.share}});
    }
    open_output(c.report) << j.dump(2) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- extract

int cmd_extract(const RunConfig& c, bool resume) {
  require(c.abstracts, "abstracts");
  require(c.output, "output");
  const Registry registry = resolve_registry(c);
  const StopList stops = resolve_stoplist(c);
  const Corpus corpus = resolve_corpus(c, registry);
  const ExtractOptions options = c.extract_options();
  const Metadata meta = extraction_metadata(c);

  std::set<std::string> done;
  std::string kept;
  if (resume && fs::exists(c.output)) {
    std::ifstream in(c.output);
    const Spool previous = read_spool(in, /*tolerate_partial_tail=*/true);
    if (previous.meta != meta) throw UsageError("cannot resume: " + c.output + " was written with a different config");
    // The last abstract may have been cut short; redo it.
    std::ostringstream rewritten;
    write_spool_header(rewritten, meta);
    for (std::size_t i = 0; i + 1 < previous.extractions.size(); ++i) {
      done.insert(previous.extractions[i].abstract_id);
      write_spool_records(rewritten, previous.extractions[i], options);
    }
    kept = rewritten.str();
  }

  std::vector<AbstractRecord> todo;
  for (const auto& a : corpus.abstracts()) {
    if (done.count(a.abstract_id) == 0) todo.push_back(a);
  }
  const auto extractions = extract_corpus(todo, stops, options, c.jobs);

  auto out = open_output(c.output);
  if (kept.empty()) {
    write_spool_header(out, meta);
  } else {
    out << kept;
  }
  std::size_t rows = 0;
  for (const auto& x : extractions) {
    write_spool_records(out, x, options);
    rows += x.phrases.size();
  }
  std::cout << fmt::format("extracted {} abstract(s) ({} resumed), {} phrase rows -> {}\n", corpus.size(),
                           done.size(), rows, c.output);
  return 0;
}

// ---------------------------------------------------------------- rank

int cmd_rank(const RunConfig& c, const std::string& plot_path) {
  const Registry registry = resolve_registry(c);
  std::vector<AbstractExtraction> extractions;
  Metadata meta;
  if (!c.extractions.empty()) {
    require_file(c.extractions, "extraction file");
    Spool spool = load_spool(c.extractions);
    extractions = std::move(spool.extractions);
    meta = std::move(spool.meta);
    const Metadata rank_meta = ranking_metadata(c);
    const Metadata extract_meta = extraction_metadata(c);
    for (std::size_t i = extract_meta.size(); i < rank_meta.size(); ++i) meta.push_back(rank_meta[i]);
  } else {
    require(c.abstracts, "abstracts or --extractions");
    const Corpus corpus = resolve_corpus(c, registry);
    extractions = extract_corpus(corpus.abstracts(), resolve_stoplist(c), c.extract_options(), c.jobs);
    meta = ranking_metadata(c);
  }
  const auto table = accumulate_parallel(extractions, registry, c.accumulate_options(), c.jobs);
  const RankedList ranked = rank(table, c.top);

  if (!c.output.empty()) {
    auto out = open_output(c.output);
    write_ranked_tsv(out, ranked, meta);
  }
  if (!c.report.empty()) {
    auto out = open_output(c.report);
    write_ranked_json(out, ranked, meta);
  }
  if (!plot_path.empty()) {
    auto out = open_output(plot_path);
    write_plot_tsv(out, export_plot_data(ranked, c.target_k, 20), meta);
  }
  const std::size_t shown = std::min<std::size_t>(ranked.size(), 20);
  std::cout << fmt::format("{} phrase(s) ranked from {} abstract(s); top {}:\n", ranked.size(), extractions.size(),
                           shown);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& e = ranked[i];
    std::cout << fmt::format("{:>4}  {:>12.2f}  {}\n", e.rank, e.weighted_total, e.display_form);
  }
  return 0;
}

// ---------------------------------------------------------------- curate

void print_candidate(const CurationSession& s) {
  const auto next = s.next_candidate();
  if (!next) {
    std::cout << (s.complete() ? "session complete\n" : "window exhausted\n");
    return;
  }
  for (const auto& e : s.window()) {
    if (e.phrase == *next) {
      std::cout << fmt::format("[{}/{}] #{} {} ({}) total={}\n", s.accepted().size(), s.options().target_k, e.rank,
                               e.display_form, e.phrase, format_number(e.weighted_total));
      return;
    }
  }
}

void print_topics(const CurationSession& s) {
  int rank = 0;
  for (const auto& t : s.topics()) {
    std::cout << fmt::format("{:>3}  {:>12.2f}  {}", ++rank, t.weighted_total, t.display_form);
    if (!t.members.empty()) {
      std::cout << "  <- ";
      bool first = true;
      for (const auto& m : t.members) {
        std::cout << (first ? "" : ", ") << m;
        first = false;
      }
    }
    std::cout << '\n';
  }
}

// Resolves a merge target typed as a topic number (1-based accept order) or a stemmed phrase.
std::string resolve_target(const CurationSession& s, const std::string& arg) {
  if (!arg.empty() && std::all_of(arg.begin(), arg.end(), ::isdigit)) {
    const auto n = static_cast<std::size_t>(std::stoul(arg));
    if (n >= 1 && n <= s.accepted().size()) return s.accepted()[n - 1];
  }
  return arg;
}

constexpr const char* kCurateHelp =
    "commands:\n"
    "  a [phrase]        accept the next candidate (or the given phrase)\n"
    "  b [phrase]        block the next candidate (or the given phrase)\n"
    "  m <topic>         merge the next candidate into an accepted topic (number or phrase)\n"
    "  u                 undo the last decision\n"
    "  l [n]             list the next n candidates (default 10)\n"
    "  t                 show accepted topics\n"
    "  q                 quit\n";

int curate_interactive(const RunConfig& c) {
  require_file(c.ranked, "ranked table");
  const RankedList ranked = load_ranked_tsv(c.ranked);
  std::optional<std::string> log_path;
  if (!c.log.empty()) log_path = c.log;
  SessionStore store(ranked, session_options(c, session_id_for(c)), log_path);

  std::cout << kCurateHelp;
  std::string line;
  while (true) {
    const auto snapshot = store.snapshot();
    print_candidate(snapshot);
    if (snapshot.complete()) {
      print_topics(snapshot);
      return 0;
    }
    std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    std::istringstream words(line);
    std::string cmd;
    words >> cmd;
    std::string rest;
    std::getline(words >> std::ws, rest);
    try {
      const auto next = snapshot.next_candidate();
      if (cmd.empty()) continue;
      if (cmd == "q") break;
      if (cmd == "?" || cmd == "h" || cmd == "help") {
        std::cout << kCurateHelp;
      } else if (cmd == "a" || cmd == "b") {
        const std::string phrase = rest.empty() ? next.value_or("") : rest;
        if (phrase.empty()) throw CurationError(CurationErrc::not_found, "no candidate left");
        store.decide(phrase, cmd == "a" ? Action::accept : Action::block);
      } else if (cmd == "m") {
        if (!next) throw CurationError(CurationErrc::not_found, "no candidate left");
        if (rest.empty()) throw CurationError(CurationErrc::invalid, "merge needs a target topic");
        store.decide(*next, Action::merge, resolve_target(snapshot, rest));
      } else if (cmd == "u") {
        store.undo();
      } else if (cmd == "l") {
        const std::size_t n = rest.empty() ? 10 : std::stoul(rest);
        for (const auto& e : snapshot.candidates(n)) {
          std::cout << fmt::format("  #{} {} ({}) {}\n", e.rank, e.display_form, e.phrase,
                                   format_number(e.weighted_total));
        }
      } else if (cmd == "t") {
        print_topics(snapshot);
      } else {
        std::cout << "unknown command; type h for help\n";
      }
    } catch (const CurationError& e) {
      std::cout << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    } catch (const std::invalid_argument&) {
      std::cout << "error: expected a number\n";
    }
  }
  print_topics(store.snapshot());
  return 0;
}

int curate_batch(const RunConfig& c) {
  require_file(c.ranked, "ranked table");
  require_file(c.rules, "rules file");
  Metadata meta;
  const RankedList ranked = load_ranked_tsv(c.ranked, &meta);
  const RuleSet rules = load_rules(c.rules);
  RankedList cleaned;
  try {
    cleaned = apply_rules(ranked, rules);
  } catch (const CurationError& e) {
    throw DataError(e.what());
  }
  meta.emplace_back("rules", fmt::format("{} blocked, {} merge groups", rules.blocklist.size(),
                                         rules.merge_groups.size()));
  if (!c.output.empty()) {
    auto out = open_output(c.output);
    write_ranked_tsv(out, cleaned, meta);
  }
  const std::size_t shown = std::min<std::size_t>(cleaned.size(), static_cast<std::size_t>(c.target_k));
  std::cout << fmt::format("{} row(s) after rules ({} before); top {}:\n", cleaned.size(), ranked.size(), shown);
  for (std::size_t i = 0; i < shown; ++i) {
    std::cout << fmt::format("{:>4}  {:>12.2f}  {}\n", cleaned[i].rank, cleaned[i].weighted_total,
                             cleaned[i].display_form);
  }
  return 0;
}

// ---------------------------------------------------------------- serve

int cmd_serve(const RunConfig& c) {
  require_file(c.ranked, "ranked table");
  const RankedList ranked = load_ranked_tsv(c.ranked);
  std::optional<std::string> log_path;
  if (!c.log.empty()) log_path = c.log;
  SessionStore store(ranked, session_options(c, session_id_for(c)), log_path);
  CurationApi api(store);
  ServeOptions options{c.host, c.port, c.static_dir};
  HttpServer server(api, options);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = server.bind();
  std::cout << fmt::format("listening on http://{}:{}\n", c.host, port) << std::flush;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.serve();
  if (waiter.joinable()) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  return 0;
}

// ---------------------------------------------------------------- export

int cmd_export(const RunConfig& c, const std::string& plot_path) {
  require_file(c.ranked, "ranked table");
  require_file(c.log, "decision log");
  const RankedList ranked = load_ranked_tsv(c.ranked);
  CurationSession session = [&] {
    try {
      return CurationSession::replay(load_decision_log(c.log), ranked, session_options(c, session_id_for(c)));
    } catch (const CurationError& e) {
      throw DataError(e.what());
    }
  }();
  const RankedList final_list = session.final_ranking();
  const auto plot = export_plot_data(final_list, c.target_k, 20);
  Metadata meta{{"session", session.options().session_id},
                {"window", std::to_string(c.window)},
                {"target_k", std::to_string(c.target_k)},
                {"decisions", std::to_string(session.log().size())},
                {"complete", session.complete() ? "true" : "false"}};

  if (!c.output.empty()) {
    auto out = open_output(c.output);
    RankedList topics_only(final_list.begin(), final_list.begin() + static_cast<std::ptrdiff_t>(
                                                                        session.accepted().size()));
    write_ranked_tsv(out, topics_only, meta);
  }
  if (!plot_path.empty()) {
    auto out = open_output(plot_path);
    write_plot_tsv(out, plot, meta);
  }
  if (!c.report.empty()) {
    auto j = topics_export(session);
    j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : meta) j["config"][k] = v;
    open_output(c.report) << j.dump(2) << '\n';
  }
  std::cout << fmt::format("{}/{} topics accepted{}\n", session.accepted().size(), c.target_k,
                           session.complete() ? "" : " (incomplete)");
  for (const auto& r : plot) {
    std::cout << fmt::format("{:>3}  {:<4}  {:>12.2f}  {}\n", r.rank, to_string(r.band), r.weighted_total,
                             r.display_form);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-phrase extraction, weighted ranking and topic curation for abstract corpora"};
  app.require_subcommand(1);

  FlagSet stats_flags;
  auto* stats = app.add_subcommand("stats", "Corpus statistics for a source registry");
  add_config_flag(stats, stats_flags);
  stats_flags.add(stats, "registry", "Source registry (default: bundled 39-source registry)");
  stats_flags.add(stats, "abstracts", "Abstracts file; without it the registry's expected counts are used");
  stats_flags.add(stats, "report", "Write a JSON report here");

  FlagSet extract_flags;
  bool resume = false;
  auto* extract = app.add_subcommand("extract", "Extract key phrases per abstract into a spool file");
  add_config_flag(extract, extract_flags);
  for (const auto& [k, h] : std::vector<std::pair<std::string, std::string>>{
           {"abstracts", "Abstracts file (JSON lines)"},
           {"registry", "Source registry"},
           {"stoplist", "Stop list (default: bundled Fox list)"},
           {"method", "ngram | rake"},
           {"mode", "paper_literal | classic"},
           {"max_n", "Longest RAKE n-gram"},
           {"output", "Spool file to write"},
           {"jobs", "Worker threads"}}) {
    extract_flags.add(extract, k, h);
  }
  extract->add_flag("--resume", resume, "Continue an interrupted spool file");

  FlagSet rank_flags;
  std::string rank_plot;
  auto* rank_cmd = app.add_subcommand("rank", "Aggregate weighted counts and rank phrases");
  add_config_flag(rank_cmd, rank_flags);
  for (const auto& [k, h] : std::vector<std::pair<std::string, std::string>>{
           {"extractions", "Spool file from `extract`"},
           {"abstracts", "Abstracts file (extracts in memory)"},
           {"registry", "Source registry"},
           {"stoplist", "Stop list"},
           {"method", "ngram | rake"},
           {"mode", "paper_literal | classic"},
           {"max_n", "Longest RAKE n-gram"},
           {"count_mode", "presence | occurrence"},
           {"top_t", "Keep only the top T phrases of each abstract"},
           {"top", "Rows to keep"},
           {"target_k", "Rows highlighted in the plot table"},
           {"output", "Ranked table (TSV)"},
           {"report", "Ranked report (JSON)"},
           {"jobs", "Worker threads"}}) {
    rank_flags.add(rank_cmd, k, h);
  }
  rank_cmd->add_option("--plot", rank_plot, "Plot table (TSV)");

  FlagSet curate_flags;
  auto* curate = app.add_subcommand("curate", "Interactive curation, or batch cleaning with --rules");
  add_config_flag(curate, curate_flags);
  for (const auto& [k, h] : std::vector<std::pair<std::string, std::string>>{
           {"ranked", "Ranked table from `rank`"},
           {"rules", "Rule file; switches to batch mode"},
           {"log", "Decision log (created if missing)"},
           {"window", "Rows considered"},
           {"target_k", "Topics to accept"},
           {"output", "Cleaned ranked table (batch mode)"}}) {
    curate_flags.add(curate, k, h);
  }

  FlagSet serve_flags;
  auto* serve = app.add_subcommand("serve", "HTTP API for a curation session");
  add_config_flag(serve, serve_flags);
  for (const auto& [k, h] : std::vector<std::pair<std::string, std::string>>{
           {"ranked", "Ranked table from `rank`"},
           {"log", "Decision log (created if missing)"},
           {"window", "Rows considered"},
           {"target_k", "Topics to accept"},
           {"host", "Bind address"},
           {"port", "Port (0 picks a free one)"},
           {"static_dir", "UI assets served under /"}}) {
    serve_flags.add(serve, k, h);
  }

  FlagSet export_flags;
  std::string export_plot;
  auto* export_cmd = app.add_subcommand("export", "Final topic table from a curation log");
  add_config_flag(export_cmd, export_flags);
  for (const auto& [k, h] : std::vector<std::pair<std::string, std::string>>{
           {"ranked", "Ranked table the session ran over"},
           {"log", "Decision log"},
           {"window", "Rows considered"},
           {"target_k", "Topics to accept"},
           {"output", "Topic table (TSV)"},
           {"report", "Topics and plot table (JSON)"}}) {
    export_flags.add(export_cmd, k, h);
  }
  export_cmd->add_option("--plot", export_plot, "Plot table (TSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (stats->parsed()) return cmd_stats(stats_flags.resolve());
    if (extract->parsed()) return cmd_extract(extract_flags.resolve(), resume);
    if (rank_cmd->parsed()) return cmd_rank(rank_flags.resolve(), rank_plot);
    if (curate->parsed()) {
      const RunConfig c = curate_flags.resolve();
      return c.rules.empty() ? curate_interactive(c) : curate_batch(c);
    }
    if (serve->parsed()) return cmd_serve(serve_flags.resolve());
    if (export_cmd->parsed()) return cmd_export(export_flags.resolve(), export_plot);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
