// Drives the playground over a loopback socket. Only 127.0.0.1 is contacted.

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

#include "shipped.hpp"
#include "toolsim/playground.hpp"

using namespace toolsim;

namespace {

class PlaygroundHttp : public ::testing::Test {
 protected:
  PlaygroundHttp()
      : scenario(shipped::scenario("send_message_cellular_off")),
        pg({scenario}),
        server(pg, ServeOptions{"127.0.0.1", 0, "http://ui.test", ""}) {
    port = server.bind();
    EXPECT_GT(port, 0);
    thread = std::jthread([this] { server.run(); });
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    client->set_read_timeout(10, 0);
    for (int i = 0; i < 200 && !client->Get("/scenarios"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds{10});
  }

  ~PlaygroundHttp() override {
    server.stop();
    thread.join();
  }

  std::string open_session() {
    const auto r = client->Post("/sessions", Json{{"scenario_id", scenario.id}}.dump(), "application/json");
    EXPECT_TRUE(r);
    EXPECT_EQ(r->status, 201);
    return Json::parse(r->body)["session_id"].get<std::string>();
  }

  Scenario scenario;
  Playground pg;
  PlaygroundServer server;
  int port = -1;
  std::jthread thread;
  std::unique_ptr<httplib::Client> client;
};

std::vector<std::pair<std::string, Json>> parse_sse(const std::string& body) {
  std::vector<std::pair<std::string, Json>> out;
  std::istringstream lines(body);
  std::string type;
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("event: ", 0) == 0) type = line.substr(7);
    if (line.rfind("data: ", 0) == 0) out.emplace_back(type, Json::parse(line.substr(6)));
  }
  return out;
}

}  // namespace

TEST_F(PlaygroundHttp, RoutesAndCors) {
  auto r = client->Get("/scenarios");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "http://ui.test");
  EXPECT_EQ(Json::parse(r->body)["scenarios"][0]["id"], scenario.id);

  r = client->Options("/sessions");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);

  r = client->Get("/sessions/s42");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);
  r = client->Get("/sessions/s42/events");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);
  r = client->Post("/sessions", "{", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
}

TEST_F(PlaygroundHttp, EventStreamFollowsTheSessionToItsEnd) {
  const auto id = open_session();

  std::string streamed;
  std::jthread listener([&] {
    httplib::Client sse("127.0.0.1", port);
    sse.set_read_timeout(30, 0);
    sse.Get("/sessions/" + id + "/events?role=agent", [&](const char* data, std::size_t n) {
      streamed.append(data, n);
      return true;
    });
  });

  for (const auto& step : scenario.playbooks.at("golden").agent) {
    Json body = step;
    body["role"] = "agent";
    const auto r = client->Post("/sessions/" + id + "/input", body.dump(), "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200) << r->body;
  }
  listener.join();

  const auto events = parse_sse(streamed);
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events.back().first, "status");
  EXPECT_EQ(events.back().second["state"], "ended");
  int messages = 0;
  for (const auto& [type, data] : events) {
    if (type != "message") continue;
    ++messages;
    EXPECT_TRUE(data["message"]["visible_to"].get<RoleSet>().contains(Role::Agent));
  }
  const auto status = client->Get("/sessions/" + id);
  ASSERT_TRUE(status);
  EXPECT_EQ(messages, static_cast<int>(Json::parse(status->body)["views"]["agent"].size()));

  // Resuming past the last event yields nothing further.
  httplib::Headers headers{{"Last-Event-ID", "1000000"}};
  const auto r = client->Get("/sessions/" + id + "/events?role=agent", headers);
  ASSERT_TRUE(r);
  EXPECT_TRUE(parse_sse(r->body).empty());

  const auto eval = client->Get("/sessions/" + id + "/evaluation");
  ASSERT_TRUE(eval);
  EXPECT_EQ(Json::parse(eval->body)["evaluation"]["final_score"], 1.0);
}
