#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "json.hpp"
#include "statfinder/engine.hpp"
#include "statfinder/store.hpp"

namespace httplib {
class Server;
}

namespace statfinder {

using Json = nlohmann::ordered_json;

struct HttpResponse {
  int status = 200;
  std::string body;
};

// JSON renderings shared by the HTTP handlers and the CLI, so that
// `statfinder search --json` prints exactly the service's response body.
Json search_json(const SearchOutcome& outcome, const Registry& registry);
Json statistic_page_json(const Statistic& statistic, const Engine& engine);
Json collections_json(const Engine& engine);
Json statistics_json(const Registry& registry);
Json maps_json();
Json error_json(std::string_view code, std::string_view message);
std::string to_body(const Json& json);

// Parses a /api/search request body. Throws InvalidQuery for missing or
// mistyped fields, InvalidObject / UnknownCollection for bad values.
Query query_from_json(const Json& body);
Contribution contribution_from_json(const Json& body);

// Request handling over an immutable engine snapshot. reload() and
// import_directory() build a new snapshot and swap it in; in-flight
// requests keep the one they started with.
class Service {
 public:
  explicit Service(Config config);
  Service(Config config, Registry registry);

  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  HttpResponse search(std::string_view body) const;
  HttpResponse get_statistic(std::string_view id) const;
  HttpResponse list(std::string_view what) const;
  HttpResponse post_statistic(std::string_view body);

  void reload();
  // Validates the union of the current data directory and `directory`, then
  // copies the new .stat files in. Returns the number of files copied.
  std::size_t import_directory(const std::filesystem::path& directory);

  std::shared_ptr<const Engine> snapshot() const;
  const Config& config() const noexcept { return config_; }

 private:
  Config config_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Engine> engine_;
  ContributionWriter writer_;
};

// Thin cpp-httplib front end routing the six endpoints to a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // Binds without serving; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void run();  // blocks until stop()
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace statfinder
