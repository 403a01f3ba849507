#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "mltopics/session_store.hpp"

namespace mltopics {

/// not_found -> 404, conflict -> 409, invalid -> 422, complete -> 409.
int http_status(CurationErrc code);

struct ApiResponse {
  int status = 200;
  nlohmann::ordered_json body;
};

/// Transport-independent handlers for the curation endpoints. Each call
/// observes one consistent snapshot of the session.
class CurationApi {
 public:
  explicit CurationApi(SessionStore& store, int plot_upto = 20) : store_(store), plot_upto_(plot_upto) {}

  ApiResponse get_session() const;
  /// `limit` is the raw query parameter; absent means 20.
  ApiResponse get_candidates(const std::optional<std::string>& limit) const;
  /// Body: {"phrase": ..., "action": "accept"|"block"|"merge", "target"?: ...}
  ApiResponse post_decision(const std::string& body);
  ApiResponse delete_last_decision();
  ApiResponse export_topics() const;

 private:
  SessionStore& store_;
  int plot_upto_;
};

nlohmann::ordered_json session_summary(const CurationSession& session);
nlohmann::ordered_json topics_export(const CurationSession& session, int plot_upto = 20);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8734;        // 0 picks a free port
  std::string static_dir;  // served under / when set
};

/// HTTP front end for CurationApi.
class HttpServer {
 public:
  HttpServer(CurationApi& api, ServeOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket and returns the bound port. Throws DataError on failure.
  int bind();
  /// Serves until stop() is called. Requires bind().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mltopics
