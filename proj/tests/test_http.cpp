#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "riskmcdm/http_service.hpp"
#include "support.hpp"

using namespace riskmcdm;
using namespace riskmcdm::elicitation;
using json = nlohmann::json;

namespace {

struct Server {
  testsupport::TempDir dir;
  ElicitationService service{dir.path()};
  std::unique_ptr<HttpService> http;
  std::thread thread;
  int port = -1;

  explicit Server(std::filesystem::path ui = {}) {
    service.register_hierarchy("default", bundled_hierarchy());
    http = std::make_unique<HttpService>(service, ui);
    port = http->bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    thread = std::thread([this] { http->listen(); });
    for (int k = 0; k < 200 && !http->running(); ++k) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~Server() {
    http->stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json body(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

}  // namespace

TEST_CASE("health, hierarchies, placeholder page") {
  Server s;
  auto c = s.client();
  auto h = c.Get("/healthz");
  REQUIRE(h);
  CHECK(h->status == 200);
  CHECK(body(h).at("status") == "ok");

  auto list = body(c.Get("/api/hierarchies")).at("hierarchies");
  REQUIRE(list.size() == 1);
  CHECK(list[0].at("ref") == "default");
  CHECK(list[0].at("comparison_nodes").size() == 5);

  auto page = c.Get("/");
  REQUIRE(page);
  CHECK(page->status == 200);
  CHECK(page->body.find("<html") != std::string::npos);

  auto missing = c.Get("/api/nothing");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(body(missing).at("error").at("code") == "not_found");
}

TEST_CASE("UI bundle directory is served at /") {
  testsupport::TempDir ui;
  testsupport::spit(ui / "index.html", "<html>bundle</html>");
  Server s(ui.path());
  auto c = s.client();
  auto page = c.Get("/");
  REQUIRE(page);
  CHECK(page->body == "<html>bundle</html>");
}

TEST_CASE("session lifecycle over HTTP") {
  Server s;
  auto c = s.client();

  auto created = c.Post("/api/sessions", json{{"hierarchy", "default"}, {"expert", {{"name", "Ada"}, {"experience_years", 9}, {"degree", "MBA"}}}}.dump(),
                        "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const auto session = body(created);
  const std::string id = session.at("id");
  CHECK(session.at("nodes").size() == 5);
  CHECK(session.at("completion") == 0.0);

  auto bad = c.Post("/api/sessions", json{{"hierarchy", "default"}, {"expert", json::object()}}.dump(), "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 422);
  const auto err = body(bad).at("error");
  CHECK(err.contains("code"));
  CHECK(err.contains("message"));
  CHECK(err.contains("details"));

  auto nohier = c.Post("/api/sessions", json{{"hierarchy", "zzz"}, {"expert", {{"name", "x"}}}}.dump(), "application/json");
  REQUIRE(nohier);
  CHECK(nohier->status == 404);

  auto junk = c.Post("/api/sessions", "{not json", "application/json");
  REQUIRE(junk);
  CHECK(junk->status == 400);

  const std::string base = "/api/sessions/" + id;
  auto put = [&](const json& j) { return c.Put((base + "/judgments").c_str(), j.dump(), "application/json"); };

  auto r1 = put({{"node_id", "LR"}, {"i", 0}, {"j", 1}, {"value", 2}});
  REQUIRE(r1);
  CHECK(r1->status == 200);
  CHECK(body(r1).at("remaining_pairs") == 2);
  put({{"node_id", "LR"}, {"i", 1}, {"j", 2}, {"value", "2"}});
  auto r3 = put({{"node_id", "LR"}, {"i", 0}, {"j", 2}, {"value", "4"}});
  const auto lr = body(r3);
  CHECK(lr.at("complete") == true);
  CHECK(lr.at("consistency").at("verdict") == "Acceptable");
  CHECK(lr.at("worst_triad").is_null());

  auto unknown = put({{"node_id", "XX"}, {"i", 0}, {"j", 1}, {"value", 2}});
  REQUIRE(unknown);
  CHECK(unknown->status == 422);
  auto badpair = put({{"node_id", "LR"}, {"i", 2}, {"j", 1}, {"value", 2}});
  REQUIRE(badpair);
  CHECK(badpair->status == 422);

  // Write-then-read.
  auto st = body(c.Get(base.c_str()));
  CHECK(st.at("nodes")[2].at("filled_pairs") == 3);
  auto cons = body(c.Get((base + "/consistency").c_str()));
  CHECK(cons.at("all_acceptable") == false);
  CHECK(cons.at("nodes")[2].at("consistency").at("cr").get<double>() == lr.at("consistency").at("cr").get<double>());

  auto early = c.Post((base + "/finalize").c_str(), "", "application/json");
  REQUIRE(early);
  CHECK(early->status == 409);
  CHECK(body(early).at("error").at("details").at("blocking").size() == 4);

  // Fill everything with equal importance.
  for (const auto& n : st.at("nodes")) {
    const std::size_t k = n.at("items").size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (n.at("node_id") != "LR") put({{"node_id", n.at("node_id")}, {"i", i}, {"j", j}, {"value", "1"}});
  }
  auto fin = c.Post((base + "/finalize").c_str(), "", "application/json");
  REQUIRE(fin);
  CHECK(fin->status == 200);
  const auto doc = body(fin).at("questionnaire");
  const auto q = questionnaire_from_json(doc);
  const auto replay = evaluate_questionnaire(bundled_hierarchy(), q);
  const auto reported = body(c.Get((base + "/consistency").c_str())).at("nodes");
  for (std::size_t k = 0; k < replay.nodes.size(); ++k)
    CHECK(replay.nodes[k].consistency.cr == reported[k].at("consistency").at("cr").get<double>());

  auto again = c.Post((base + "/finalize").c_str(), "", "application/json");
  REQUIRE(again);
  CHECK(again->status == 409);
  auto late = put({{"node_id", "LR"}, {"i", 0}, {"j", 1}, {"value", 3}});
  REQUIRE(late);
  CHECK(late->status == 409);

  auto gone = c.Get("/api/sessions/ffffffffffffffffffffffffffffffff");
  REQUIRE(gone);
  CHECK(gone->status == 404);
}
