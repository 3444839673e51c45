#include "statfinder/service.hpp"

#include <algorithm>

#include "httplib.h"
#include "statfinder/error.hpp"

namespace fs = std::filesystem;

namespace statfinder {

namespace {

constexpr std::size_t kSampleValues = 10;

HttpResponse respond(int status, const Json& body) { return HttpResponse{status, to_body(body)}; }

HttpResponse fail(int status, std::string_view code, std::string_view message) {
  return respond(status, error_json(code, message));
}

// Maps library errors onto the API's status codes.
HttpResponse error_response(const std::exception& e) {
  if (dynamic_cast<const InvalidObject*>(&e)) return fail(422, "invalid_object", e.what());
  if (auto* err = dynamic_cast<const Error*>(&e)) {
    const std::string& code = err->code();
    if (code == "unknown_statistic" || code == "unknown_map") return fail(404, "not_found", e.what());
    if (code == "duplicate_identifier") return fail(409, code, e.what());
    if (code == "io_error") return fail(500, code, e.what());
    if (code == "invalid_request") return fail(400, code, e.what());
    return fail(422, code, e.what());
  }
  return fail(500, "internal", e.what());
}

class BadRequest : public Error {
 public:
  explicit BadRequest(const std::string& message) : Error("invalid_request", message) {}
};

template <class T>
T field(const Json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end()) throw BadRequest(std::string("missing field \"") + name + "\"");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw BadRequest(std::string("field \"") + name + "\" has the wrong type");
  }
}

template <class T>
T field_or(const Json& body, const char* name, T fallback) {
  return body.contains(name) ? field<T>(body, name) : fallback;
}

Json path_json(const MapPath& path) {
  Json ids = Json::array();
  for (const auto& id : path.ids()) ids.push_back(id.str());
  return ids;
}

Json distribution_json(const Distribution& d) {
  Json counts = Json::array();
  for (const auto& [value, multiplicity] : d.counts) counts.push_back({{"value", value}, {"multiplicity", multiplicity}});
  return Json{{"level", d.level}, {"counts", std::move(counts)}};
}

}  // namespace

// --- JSON renderings ------------------------------------------------------------

std::string to_body(const Json& json) { return json.dump(2) + "\n"; }

Json error_json(std::string_view code, std::string_view message) {
  return Json{{"code", std::string(code)}, {"message", std::string(message)}};
}

Json search_json(const SearchOutcome& outcome, const Registry& registry) {
  Json results = Json::array();
  for (const auto& r : outcome.results) {
    const Statistic* s = registry.find(r.statistic);
    results.push_back({{"statistic", r.statistic.str()},
                       {"name", s ? s->name : std::string()},
                       {"path", path_json(r.path)},
                       {"kind", std::string(to_string(r.kind))},
                       {"matched_count", r.matched_count},
                       {"depth", r.depth}});
  }
  return Json{{"results", std::move(results)}, {"searches_performed", outcome.searches_performed}};
}

Json statistic_page_json(const Statistic& s, const Engine& engine) {
  Json samples = Json::array();
  if (s.rule_def() != nullptr) {
    const auto& tables = engine.tables();
    for (int level = 0; level <= engine.config().caps.cap(s.collection) && samples.size() < kSampleValues; ++level) {
      const auto& objects = tables.level(s.collection, level).objects;
      const auto& column = tables.column(s, level);
      for (std::size_t i = 0; i < objects.size() && samples.size() < kSampleValues; ++i) {
        samples.push_back({{"object", objects[i].encoding}, {"value", column.values[i]}});
      }
    }
  } else {
    for (const auto& [object, value] : s.values) {
      if (samples.size() == kSampleValues) break;
      samples.push_back({{"object", object.encoding}, {"value", value}});
    }
  }
  Json distributions = Json::array();
  const int top = std::min(engine.config().index_cap, engine.config().caps.cap(s.collection));
  for (int level = 0; level <= top; ++level) {
    if (const Distribution* d = engine.index().distribution(s.id, level)) distributions.push_back(distribution_json(*d));
  }
  return Json{{"id", s.id.str()},
              {"collection", std::string(collection_name(s.collection))},
              {"name", s.name},
              {"description", s.description},
              {"references", s.references},
              {"has_rule", s.rule_def() != nullptr},
              {"value_count", s.values.size()},
              {"sample_values", std::move(samples)},
              {"distributions", std::move(distributions)}};
}

Json collections_json(const Engine& engine) {
  Json out = Json::array();
  for (CollectionId c : kAllCollections) {
    out.push_back({{"name", std::string(collection_name(c))},
                   {"cap", engine.config().caps.cap(c)},
                   {"statistics", engine.registry().on(c).size()}});
  }
  return out;
}

Json statistics_json(const Registry& registry) {
  Json out = Json::array();
  for (const auto& s : registry.all()) {
    out.push_back({{"id", s.id.str()},
                   {"collection", std::string(collection_name(s.collection))},
                   {"name", s.name},
                   {"has_rule", s.rule_def() != nullptr},
                   {"value_count", s.values.size()}});
  }
  return out;
}

Json maps_json() {
  Json out = Json::array();
  for (const auto& m : seed_maps()) {
    out.push_back({{"id", m.id.str()},
                   {"name", std::string(m.name)},
                   {"domain", std::string(collection_name(m.domain))},
                   {"codomain", std::string(collection_name(m.codomain))},
                   {"bijective", m.bijective}});
  }
  return out;
}

Query query_from_json(const Json& body) {
  Query q;
  q.collection = parse_collection(field<std::string>(body, "collection"));
  q.options.mode = parse_search_mode(field_or<std::string>(body, "mode", "auto"));
  q.options.max_depth = field_or<int>(body, "depth", q.options.max_depth);
  q.options.max_results = field_or<int>(body, "max_results", q.options.max_results);
  const bool has_assigned = body.contains("assigned");
  const bool has_groups = body.contains("groups");
  if (has_assigned == has_groups) throw BadRequest("supply exactly one of \"assigned\" and \"groups\"");
  if (has_assigned) {
    q.assigned.emplace();
    const Json& pairs = body.at("assigned");
    if (!pairs.is_array()) throw BadRequest("\"assigned\" must be a list");
    for (const auto& pair : pairs) {
      if (!pair.is_object()) throw BadRequest("\"assigned\" entries are {object, value}");
      CombObject object = parse(q.collection, field<std::string>(pair, "object"));
      const auto value = field<std::int64_t>(pair, "value");
      auto [it, inserted] = q.assigned->emplace(object, value);
      if (!inserted && it->second != value) throw InvalidQuery("conflicting values for " + object.encoding);
    }
  } else {
    q.groups = field<ValueGroups>(body, "groups");
  }
  return q;
}

Contribution contribution_from_json(const Json& body) {
  Contribution c;
  c.collection = parse_collection(field<std::string>(body, "collection"));
  c.name = field<std::string>(body, "name");
  c.description = field_or<std::string>(body, "description", "");
  c.references = field_or<std::vector<std::string>>(body, "references", {});
  const Json& values = body.contains("values") ? body.at("values") : Json::array();
  if (!values.is_array()) throw BadRequest("\"values\" must be a list");
  for (const auto& v : values) {
    if (!v.is_object()) throw BadRequest("\"values\" entries are {object, value}");
    c.values.emplace_back(field<std::string>(v, "object"), field<std::int64_t>(v, "value"));
  }
  return c;
}

// --- Service --------------------------------------------------------------------

Service::Service(Config config) : Service(config, load_registry(config.data_dir)) {}

Service::Service(Config config, Registry registry)
    : config_(std::move(config)),
      engine_(std::make_shared<const Engine>(std::move(registry), config_.engine())),
      writer_(config_.pending_dir(), config_.min_contribution_values) {}

std::shared_ptr<const Engine> Service::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return engine_;
}

void Service::reload() {
  auto fresh = std::make_shared<const Engine>(load_registry(config_.data_dir), config_.engine());
  std::lock_guard lock(snapshot_mutex_);
  engine_ = std::move(fresh);
}

std::size_t Service::import_directory(const fs::path& directory) {
  Registry incoming = load_registry(directory);
  Registry merged = load_registry(config_.data_dir);
  for (const auto& s : incoming.all()) merged.add(s);

  std::size_t copied = 0;
  for (const auto& s : incoming.all()) {
    save_statistic(s, config_.data_dir);
    ++copied;
  }
  auto fresh = std::make_shared<const Engine>(std::move(merged), config_.engine());
  std::lock_guard lock(snapshot_mutex_);
  engine_ = std::move(fresh);
  return copied;
}

HttpResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  constexpr std::string_view kStatisticPrefix = "/api/statistics/";
  if (method == "GET") {
    if (path == "/api/collections") return list("collections");
    if (path == "/api/statistics") return list("statistics");
    if (path == "/api/maps") return list("maps");
    if (path.starts_with(kStatisticPrefix)) return get_statistic(path.substr(kStatisticPrefix.size()));
  } else if (method == "POST") {
    if (path == "/api/search") return search(body);
    if (path == "/api/statistics") return post_statistic(body);
  }
  return fail(404, "not_found", std::string(method) + " " + std::string(path) + " is not an endpoint");
}

HttpResponse Service::search(std::string_view body) const {
  try {
    Json request = Json::parse(body, nullptr, false);
    if (request.is_discarded() || !request.is_object()) return fail(400, "malformed_json", "body is not a JSON object");
    auto engine = snapshot();
    Query query = query_from_json(request);
    return respond(200, search_json(engine->search(query), engine->registry()));
  } catch (const std::exception& e) {
    return error_response(e);
  }
}

HttpResponse Service::get_statistic(std::string_view id) const {
  try {
    if (!StatisticId::valid(id)) return fail(404, "not_found", "no statistic " + std::string(id));
    auto engine = snapshot();
    return respond(200, statistic_page_json(engine->registry().lookup(StatisticId::parse(id)), *engine));
  } catch (const std::exception& e) {
    return error_response(e);
  }
}

HttpResponse Service::list(std::string_view what) const {
  auto engine = snapshot();
  if (what == "collections") return respond(200, collections_json(*engine));
  if (what == "statistics") return respond(200, statistics_json(engine->registry()));
  if (what == "maps") return respond(200, maps_json());
  return fail(404, "not_found", "nothing to list under \"" + std::string(what) + "\"");
}

HttpResponse Service::post_statistic(std::string_view body) {
  try {
    Json request = Json::parse(body, nullptr, false);
    if (request.is_discarded() || !request.is_object()) return fail(400, "malformed_json", "body is not a JSON object");
    Contribution c = contribution_from_json(request);
    auto engine = snapshot();
    auto submission = writer_.submit(c, engine->registry());
    Json findings = Json::array();
    for (const auto& f : submission.findings) {
      Json item{{"severity", std::string(to_string(f.severity))}, {"code", f.code}, {"message", f.message}};
      if (f.key) item["key"] = *f.key;
      if (f.statistic) item["statistic"] = f.statistic->str();
      findings.push_back(std::move(item));
    }
    if (!submission.id) {
      Json err = error_json("invalid_contribution", "the contribution has errors");
      err["findings"] = std::move(findings);
      return respond(422, err);
    }
    return respond(201, Json{{"id", submission.id->str()}, {"findings", std::move(findings)}});
  } catch (const std::exception& e) {
    return error_response(e);
  }
}

// --- HTTP front end -----------------------------------------------------------------

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    HttpResponse r = service_.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
    if (!service_.config().cors_origin.empty()) {
      res.set_header("Access-Control-Allow-Origin", service_.config().cors_origin);
    }
  };
  server_->Get(R"(/api/.*)", forward);
  server_->Post(R"(/api/.*)", forward);
  server_->Options(R"(/api/.*)", [this](const httplib::Request&, httplib::Response& res) {
    if (!service_.config().cors_origin.empty()) {
      res.set_header("Access-Control-Allow-Origin", service_.config().cors_origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }
    res.status = 204;
  });
  server_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(to_body(error_json(res.status == 404 ? "not_found" : "internal",
                                       req.method + " " + req.path + " failed")),
                    "application/json");
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace statfinder
