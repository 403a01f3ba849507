#include "mltopics/service.hpp"

#include <charconv>

#include <fmt/format.h>

#include "httplib.h"
#include "mltopics/error.hpp"

namespace mltopics {
namespace {

using json = nlohmann::ordered_json;

ApiResponse error_response(CurationErrc code, const std::string& message) {
  json body;
  body["code"] = to_string(code);
  body["message"] = message;
  return {http_status(code), std::move(body)};
}

json entry_json(const RankedEntry& e, bool decided) {
  json j;
  j["rank"] = e.rank;
  j["phrase"] = e.phrase;
  j["display_form"] = e.display_form;
  j["weighted_total"] = e.weighted_total;
  j["decided"] = decided;
  return j;
}

constexpr const char* kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>mltopics</title></head>"
    "<body><h1>mltopics curation service</h1>"
    "<p>No UI assets configured. The JSON API is available under <code>/api</code>:"
    " <a href=\"/api/session\">/api/session</a>,"
    " <a href=\"/api/candidates?limit=20\">/api/candidates</a>,"
    " <a href=\"/api/export/topics\">/api/export/topics</a>.</p></body></html>";

}  // namespace

int http_status(CurationErrc code) {
  switch (code) {
    case CurationErrc::not_found: return 404;
    case CurationErrc::conflict: return 409;
    case CurationErrc::invalid: return 422;
    case CurationErrc::complete: return 409;
  }
  return 422;
}

json session_summary(const CurationSession& session) {
  json j;
  j["session_id"] = session.options().session_id;
  j["target_k"] = session.options().target_k;
  j["accepted"] = session.accepted();
  json members = json::object();
  for (const auto& t : session.topics()) members[t.phrase] = t.members;
  j["members"] = std::move(members);
  j["decisions_count"] = session.log().size();
  j["window_size"] = session.window().size();
  j["complete"] = session.complete();
  const auto next = session.next_candidate();
  j["next_candidate"] = next ? json(*next) : json();
  return j;
}

json topics_export(const CurationSession& session, int plot_upto) {
  json j;
  j["session_id"] = session.options().session_id;
  j["complete"] = session.complete();
  j["target_k"] = session.options().target_k;
  json topics = json::array();
  int rank = 0;
  for (const auto& t : session.topics()) {
    json row;
    row["rank"] = ++rank;
    row["phrase"] = t.phrase;
    row["display_form"] = t.display_form;
    row["weighted_total"] = t.weighted_total;
    row["members"] = t.members;
    topics.push_back(std::move(row));
  }
  j["topics"] = std::move(topics);
  json plot = json::array();
  for (const auto& r : export_plot_data(session.final_ranking(), session.options().target_k, plot_upto)) {
    json row;
    row["rank"] = r.rank;
    row["display_form"] = r.display_form;
    row["weighted_total"] = r.weighted_total;
    row["band"] = to_string(r.band);
    plot.push_back(std::move(row));
  }
  j["plot"] = std::move(plot);
  return j;
}

ApiResponse CurationApi::get_session() const {
  return {200, store_.read([](const CurationSession& s) { return session_summary(s); })};
}

ApiResponse CurationApi::get_candidates(const std::optional<std::string>& limit) const {
  std::size_t n = 20;
  if (limit) {
    long value = 0;
    const auto* end = limit->data() + limit->size();
    const auto [ptr, ec] = std::from_chars(limit->data(), end, value);
    if (limit->empty() || ec != std::errc() || ptr != end || value < 0) {
      return error_response(CurationErrc::invalid, fmt::format("bad limit '{}'", *limit));
    }
    n = static_cast<std::size_t>(value);
  }
  json rows = store_.read([n](const CurationSession& s) {
    json out = json::array();
    for (const auto& e : s.candidates(n)) out.push_back(entry_json(e, false));
    return out;
  });
  return {200, std::move(rows)};
}

ApiResponse CurationApi::post_decision(const std::string& body) {
  std::string phrase;
  std::string target;
  Action action = Action::accept;
  try {
    const auto j = nlohmann::json::parse(body);
    phrase = j.at("phrase").get<std::string>();
    action = parse_action(j.at("action").get<std::string>());
    if (j.contains("target") && !j.at("target").is_null()) target = j.at("target").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    return error_response(CurationErrc::invalid, fmt::format("bad request body: {}", e.what()));
  } catch (const CurationError& e) {
    return error_response(e.code(), e.what());
  }
  if (action == Action::merge && target.empty()) {
    return error_response(CurationErrc::invalid, "merge requires a target");
  }
  try {
    store_.decide(phrase, action, target);
  } catch (const CurationError& e) {
    return error_response(e.code(), e.what());
  }
  return get_session();
}

ApiResponse CurationApi::delete_last_decision() {
  try {
    store_.undo();
  } catch (const CurationError& e) {
    return error_response(e.code(), e.what());
  }
  return get_session();
}

ApiResponse CurationApi::export_topics() const {
  const int upto = plot_upto_;
  return {200, store_.read([upto](const CurationSession& s) { return topics_export(s, upto); })};
}

struct HttpServer::Impl {
  CurationApi& api;
  ServeOptions options;
  httplib::Server server;
  bool bound = false;

  static void reply(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  }

  Impl(CurationApi& a, ServeOptions o) : api(a), options(std::move(o)) {
    server.Get("/api/session", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, api.get_session());
    });
    server.Get("/api/candidates", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> limit;
      if (req.has_param("limit")) limit = req.get_param_value("limit");
      reply(res, api.get_candidates(limit));
    });
    server.Post("/api/decisions", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, api.post_decision(req.body));
    });
    server.Delete("/api/decisions/last", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, api.delete_last_decision());
    });
    server.Get("/api/export/topics", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, api.export_topics());
    });
    if (!options.static_dir.empty()) {
      if (!server.set_mount_point("/", options.static_dir)) {
        throw UsageError("static directory not found: " + options.static_dir);
      }
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kPlaceholderPage, "text/html");
      });
    }
  }
};

HttpServer::HttpServer(CurationApi& api, ServeOptions options)
    : impl_(std::make_unique<Impl>(api, std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  int port = impl_->options.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->options.host);
    if (port < 0) throw DataError("cannot bind to " + impl_->options.host);
  } else if (!impl_->server.bind_to_port(impl_->options.host, port)) {
    throw DataError(fmt::format("cannot bind to {}:{}", impl_->options.host, port));
  }
  impl_->bound = true;
  return port;
}

void HttpServer::serve() {
  if (!impl_->bound) throw UsageError("serve() before bind()");
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace mltopics
