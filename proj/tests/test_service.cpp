#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "httplib.h"
#include "statfinder/service.hpp"
#include "test_support.hpp"

namespace statfinder {
namespace {

using testing::copy_seed_data;
using testing::seed_dir;
using testing::TempDir;

const char* kDegreeSearch = R"({
  "collection": "Permutations", "depth": 1,
  "assigned": [
    {"object": "[1,2]", "value": 0}, {"object": "[2,1]", "value": 1},
    {"object": "[1,2,3]", "value": 0}, {"object": "[1,3,2]", "value": 2},
    {"object": "[2,1,3]", "value": 1}, {"object": "[2,3,1]", "value": 2},
    {"object": "[3,1,2]", "value": 1}, {"object": "[3,2,1]", "value": 3},
    {"object": "[1,2,3,4]", "value": 0}, {"object": "[1,2,4,3]", "value": 3},
    {"object": "[1,3,2,4]", "value": 2}
  ]
})";

// Service over a scratch copy of the seed data, so contributions do not
// touch the repository.
struct ServiceFixture : ::testing::Test {
  TempDir dir;
  std::unique_ptr<Service> service;

  void SetUp() override {
    copy_seed_data(dir.path());
    Config config;
    config.data_dir = dir.path();
    service = std::make_unique<Service>(config);
  }

  Json call(std::string_view method, std::string_view path, std::string_view body, int expected_status) {
    const HttpResponse r = service->handle(method, path, body);
    EXPECT_EQ(r.status, expected_status) << method << " " << path << "\n" << r.body;
    EXPECT_FALSE(r.body.empty());
    EXPECT_EQ(r.body.back(), '\n');
    return Json::parse(r.body);
  }
};

TEST_F(ServiceFixture, SearchRanksMajorIndexFirst) {
  const Json j = call("POST", "/api/search", kDegreeSearch, 200);
  ASSERT_GE(j["results"].size(), 2u);
  EXPECT_EQ(j["results"][0]["statistic"], "St000004");
  EXPECT_EQ(j["results"][0]["kind"], "exact");
  EXPECT_EQ(j["results"][0]["matched_count"], 11);
  EXPECT_EQ(j["results"][0]["path"], Json::array());
  EXPECT_EQ(j["results"][1]["statistic"], "St000018");
  EXPECT_EQ(j["results"][1]["path"], Json::array({"Mp00004"}));
  EXPECT_GT(j["searches_performed"].get<int>(), 0);
}

TEST_F(ServiceFixture, SearchIsDeterministic) {
  const auto a = service->handle("POST", "/api/search", kDegreeSearch);
  const auto b = service->handle("POST", "/api/search", kDegreeSearch);
  EXPECT_EQ(a.body, b.body);
}

TEST_F(ServiceFixture, SearchGroups) {
  const Json j = call("POST", "/api/search",
                      R"({"collection":"Permutations","mode":"distribution","depth":0,"groups":[[0],[0,1],[0,1,1,2,2,3]]})", 200);
  bool maj = false;
  for (const auto& r : j["results"]) {
    EXPECT_EQ(r["kind"], "distribution");
    maj = maj || r["statistic"] == "St000004";
  }
  EXPECT_TRUE(maj);
}

TEST_F(ServiceFixture, SearchErrors) {
  EXPECT_EQ(call("POST", "/api/search", "{not json", 400)["code"], "malformed_json");
  EXPECT_EQ(call("POST", "/api/search", R"({"assigned":[]})", 400)["code"], "invalid_request");
  EXPECT_EQ(call("POST", "/api/search", R"({"collection":"Permutations"})", 400)["code"], "invalid_request");
  EXPECT_EQ(call("POST", "/api/search", R"({"collection":"Graphs","groups":[[1]]})", 422)["code"],
            "unknown_collection");
  EXPECT_EQ(call("POST", "/api/search",
                 R"({"collection":"Permutations","assigned":[{"object":"[1,1]","value":0}]})", 422)["code"],
            "invalid_object");
  EXPECT_EQ(call("POST", "/api/search", R"({"collection":"Permutations","depth":9,"groups":[[1]]})", 422)["code"],
            "depth_exceeded");
  EXPECT_EQ(call("POST", "/api/search", R"({"collection":"Permutations","assigned":[]})", 422)["code"],
            "empty_query");
  const Json err = call("POST", "/api/search", R"({"collection":"Permutations","mode":"fuzzy","groups":[[1]]})", 422);
  EXPECT_EQ(err["code"], "invalid_query");
  EXPECT_TRUE(err["message"].is_string());
}

TEST_F(ServiceFixture, StatisticPage) {
  const Json j = call("GET", "/api/statistics/St000004", "", 200);
  EXPECT_EQ(j["id"], "St000004");
  EXPECT_EQ(j["collection"], "Permutations");
  EXPECT_TRUE(j["has_rule"].get<bool>());
  EXPECT_EQ(j["references"].size(), 2u);
  EXPECT_EQ(j["value_count"], 13);
  EXPECT_EQ(j["sample_values"].size(), 10u);
  ASSERT_EQ(j["distributions"].size(), 9u);
  EXPECT_EQ(j["distributions"][3]["level"], 3);
  EXPECT_EQ(j["distributions"][3]["counts"][1], (Json{{"value", 1}, {"multiplicity", 2}}));

  const Json partial = call("GET", "/api/statistics/St000012", "", 200);
  EXPECT_FALSE(partial["has_rule"].get<bool>());
  for (const auto& d : partial["distributions"]) EXPECT_LE(d["level"].get<int>(), 3);

  EXPECT_EQ(call("GET", "/api/statistics/St999999", "", 404)["code"], "not_found");
  EXPECT_EQ(call("GET", "/api/statistics/maj", "", 404)["code"], "not_found");
}

TEST_F(ServiceFixture, Listings) {
  const Json collections = call("GET", "/api/collections", "", 200);
  ASSERT_EQ(collections.size(), 5u);
  EXPECT_EQ(collections[0]["name"], "Permutations");
  EXPECT_EQ(collections[0]["cap"], 8);
  EXPECT_EQ(call("GET", "/api/statistics", "", 200).size(), 13u);
  const Json maps = call("GET", "/api/maps", "", 200);
  ASSERT_EQ(maps.size(), 10u);
  EXPECT_EQ(maps[3]["name"], "foata");
  EXPECT_EQ(call("GET", "/api/nothing", "", 404)["code"], "not_found");
  EXPECT_EQ(call("DELETE", "/api/statistics", "", 404)["code"], "not_found");
}

TEST_F(ServiceFixture, Contributions) {
  const char* good = R"({"collection":"Permutations","name":"Number of cycles","description":"d",
    "values":[{"object":"[1,2]","value":2},{"object":"[2,1]","value":1},{"object":"[1,2,3]","value":3}]})";
  const Json created = call("POST", "/api/statistics", good, 201);
  EXPECT_EQ(created["id"], "St000019");
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "pending" / "St000019.stat"));
  EXPECT_EQ(call("POST", "/api/statistics", good, 201)["id"], "St000020");

  const Json rejected = call("POST", "/api/statistics",
                             R"({"collection":"Permutations","name":"x","values":[{"object":"[1,2]","value":2},{"object":"[2,1]","value":1}]})",
                             422);
  EXPECT_EQ(rejected["code"], "invalid_contribution");
  bool too_few = false;
  for (const auto& f : rejected["findings"]) too_few = too_few || f["code"] == "too_few_values";
  EXPECT_TRUE(too_few);

  EXPECT_EQ(call("POST", "/api/statistics", R"({"name":"x"})", 400)["code"], "invalid_request");
  EXPECT_EQ(call("POST", "/api/statistics", "[]", 400)["code"], "malformed_json");
  // Pending contributions are not searchable until imported.
  EXPECT_EQ(call("GET", "/api/statistics/St000019", "", 404)["code"], "not_found");
}

TEST_F(ServiceFixture, ImportAndReload) {
  TempDir incoming;
  std::ofstream(incoming.path() / "St000050.stat")
      << "Identifier: St000050\nCollection: Permutations\nName: Number of cycles.\nValues:\n[1] => 1\n[1,2] => 2\n[2,1] => 1\n";
  EXPECT_EQ(service->import_directory(incoming.path()), 1u);
  EXPECT_EQ(call("GET", "/api/statistics/St000050", "", 200)["value_count"], 3);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "St000050.stat"));
  EXPECT_THROW(service->import_directory(incoming.path()), DuplicateIdentifier);
  service->reload();
  EXPECT_EQ(service->snapshot()->registry().size(), 14u);
}

TEST_F(ServiceFixture, SnapshotsSurviveReload) {
  auto before = service->snapshot();
  service->reload();
  EXPECT_NE(before, service->snapshot());
  EXPECT_EQ(before->registry().size(), 13u);
}

TEST(ServiceConstruction, BadDataDirectoryFails) {
  Config config;
  config.data_dir = "/nonexistent/statfinder";
  EXPECT_THROW(Service{config}, IoError);
}

TEST(JsonRenderingTest, SearchJsonFields) {
  const Registry& registry = testing::seed_registry();
  const Engine engine(registry);
  const Json j = search_json(engine.search(testing::degree_query(0)), registry);
  ASSERT_TRUE(j.contains("results"));
  const auto& first = j["results"][0];
  std::vector<std::string> keys;
  for (const auto& [k, v] : first.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"statistic", "name", "path", "kind", "matched_count", "depth"}));
  EXPECT_EQ(first["name"], "The major index of a permutation.");
}

TEST(HttpServerTest, RoundTripOverLoopback) {
  TempDir dir;
  copy_seed_data(dir.path());
  Config config;
  config.data_dir = dir.path();
  config.cors_origin = "http://localhost:5173";
  Service service(config);
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.run(); });

  httplib::Client client("127.0.0.1", port);
  auto search = client.Post("/api/search", kDegreeSearch, "application/json");
  ASSERT_TRUE(search);
  EXPECT_EQ(search->status, 200);
  EXPECT_EQ(search->body, service.handle("POST", "/api/search", kDegreeSearch).body);
  EXPECT_EQ(search->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  EXPECT_EQ(Json::parse(search->body)["results"][0]["statistic"], "St000004");

  auto page = client.Get("/api/statistics/St000004");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->status, 200);

  auto missing = client.Get("/elsewhere");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(Json::parse(missing->body)["code"], "not_found");

  auto preflight = client.Options("/api/search");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);

  server.stop();
  loop.join();
}

}  // namespace
}  // namespace statfinder
