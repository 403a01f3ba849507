#include <gtest/gtest.h>

#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "mltopics/service.hpp"

using namespace mltopics;
using nlohmann::json;

namespace {

RankedList fixture() { return load_ranked_tsv(MLTOPICS_DATA_DIR "/fixtures/top10_window.tsv"); }

std::string decision(const std::string& phrase, const std::string& action, const std::string& target = {}) {
  json j{{"phrase", phrase}, {"action", action}};
  if (!target.empty()) j["target"] = target;
  return j.dump();
}

}  // namespace

TEST(Api, StatusCodes) {
  EXPECT_EQ(http_status(CurationErrc::not_found), 404);
  EXPECT_EQ(http_status(CurationErrc::conflict), 409);
  EXPECT_EQ(http_status(CurationErrc::invalid), 422);
  EXPECT_EQ(http_status(CurationErrc::complete), 409);
}

TEST(Api, DecisionFlow) {
  SessionStore store(fixture(), {"fixture", 500, 10});
  CurationApi api(store);

  auto session = api.get_session();
  EXPECT_EQ(session.status, 200);
  EXPECT_EQ(session.body["next_candidate"], "propos method");
  EXPECT_EQ(session.body["accepted"].size(), 0u);

  EXPECT_EQ(api.post_decision(decision("train data", "merge", "data set")).status, 422);
  EXPECT_EQ(api.post_decision(decision("no such phrase", "accept")).status, 404);
  EXPECT_EQ(api.post_decision("{not json").status, 422);
  EXPECT_EQ(api.post_decision(decision("kernel", "skip")).status, 422);
  EXPECT_EQ(api.post_decision(decision("train data", "merge")).status, 422);

  auto accepted = api.post_decision(decision("support vector machin", "accept"));
  EXPECT_EQ(accepted.status, 200);
  EXPECT_EQ(accepted.body["accepted"], json::array({"support vector machin"}));
  EXPECT_EQ(api.post_decision(decision("support vector machin", "block")).status, 409);

  const auto queue = api.get_candidates(std::string("5")).body;
  ASSERT_EQ(queue.size(), 5u);
  for (const auto& row : queue) EXPECT_NE(row["phrase"], "support vector machin");

  EXPECT_EQ(api.get_candidates(std::string("x")).status, 422);
  EXPECT_EQ(api.get_candidates(std::string("-1")).status, 422);
  EXPECT_EQ(api.get_candidates(std::nullopt).body.size(), 20u);

  EXPECT_EQ(api.delete_last_decision().status, 200);
  EXPECT_EQ(api.delete_last_decision().status, 404);
}

TEST(Api, CompleteSessionRejectsAccepts) {
  SessionStore store(fixture(), {"s", 500, 1});
  CurationApi api(store);
  EXPECT_EQ(api.post_decision(decision("neural network", "accept")).status, 200);
  EXPECT_TRUE(api.get_session().body["complete"].get<bool>());
  EXPECT_EQ(api.post_decision(decision("data set", "accept")).status, 409);
  const auto exported = api.export_topics().body;
  EXPECT_EQ(exported["topics"].size(), 1u);
  EXPECT_EQ(exported["plot"][0]["band"], "top");
  EXPECT_EQ(exported["plot"][1]["band"], "grey");
}

TEST(Http, ServesApi) {
  SessionStore store(fixture(), {"http", 500, 10});
  CurationApi api(store);
  HttpServer server(api, {"127.0.0.1", 0, ""});
  const int port = server.bind();
  std::thread serving([&] { server.serve(); });

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/session");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["session_id"], "http");

  res = client.Post("/api/decisions", decision("support vector machin", "accept"), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client.Get("/api/session");
  EXPECT_EQ(json::parse(res->body)["accepted"], json::array({"support vector machin"}));

  res = client.Get("/api/candidates?limit=3");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body).size(), 3u);
  res = client.Get("/api/candidates?limit=abc");
  EXPECT_EQ(res->status, 422);

  res = client.Post("/api/decisions", decision("support vector machin", "accept"), "application/json");
  EXPECT_EQ(res->status, 409);
  res = client.Delete("/api/decisions/last");
  EXPECT_EQ(res->status, 200);
  res = client.Delete("/api/decisions/last");
  EXPECT_EQ(res->status, 404);

  res = client.Get("/api/export/topics");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client.Get("/");
  ASSERT_TRUE(res);
  EXPECT_NE(res->body.find("/api/session"), std::string::npos);

  server.stop();
  serving.join();
}
