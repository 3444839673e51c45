// statfinder: command-line front end for the statistic finder.
//
//   statfinder search <collection> [--mode M] [--depth D] [--file F] [--json]
//   statfinder eval <StatId> <object>
//   statfinder list collections|statistics|maps
//   statfinder import <dir>
//   statfinder serve [--addr HOST:PORT]
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "statfinder/error.hpp"
#include "statfinder/query_text.hpp"
#include "statfinder/service.hpp"

namespace {

using namespace statfinder;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void print_search_table(const SearchOutcome& outcome, const Registry& registry) {
  std::cout << pad("#", 4) << pad("statistic", 11) << pad("kind", 14) << pad("depth", 7) << pad("matched", 9)
            << pad("path", 28) << "name\n";
  int rank = 0;
  for (const auto& r : outcome.results) {
    const Statistic* s = registry.find(r.statistic);
    std::string path;
    for (const auto& id : r.path.ids()) path += (path.empty() ? "" : ",") + id.str();
    if (path.empty()) path = "-";
    std::cout << pad(std::to_string(++rank), 4) << pad(r.statistic.str(), 11)
              << pad(std::string(to_string(r.kind)), 14) << pad(std::to_string(r.depth), 7)
              << pad(std::to_string(r.matched_count), 9) << pad(path, 28) << (s ? s->name : "") << "\n";
  }
  if (outcome.results.empty()) std::cout << "(no matches)\n";
  std::cout << "searches performed: " << outcome.searches_performed << "\n";
}

std::pair<std::string, int> split_address(const std::string& addr) {
  auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw UsageError("--addr expects HOST:PORT");
  try {
    return {addr.substr(0, colon), std::stoi(addr.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("--addr expects HOST:PORT");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify combinatorial statistics from data"};
  app.require_subcommand(1);

  std::string data_dir;
  std::string config_file;
  app.add_option("--data", data_dir, "Data directory (default: $STATFINDER_DATA or the seed data)");
  app.add_option("--config", config_file, "Config file with key = value lines");

  std::string collection_name_arg;
  std::string mode = "auto";
  int depth = 2;
  int max_results = 20;
  std::string query_file;
  bool as_json = false;
  auto* search_cmd = app.add_subcommand("search", "Search for statistics matching data read from --file or stdin");
  search_cmd->add_option("collection", collection_name_arg, "Collection of the query objects")->required();
  search_cmd->add_option("--mode", mode, "exact, distribution or auto")->capture_default_str();
  search_cmd->add_option("--depth", depth, "Maximal map path length")->capture_default_str();
  search_cmd->add_option("--max-results", max_results, "Maximal number of results")->capture_default_str();
  search_cmd->add_option("--file", query_file, "Query text file (default: stdin)");
  search_cmd->add_flag("--json", as_json, "Print the JSON response instead of a table");

  std::string stat_id;
  std::string object_text;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a statistic on an object");
  eval_cmd->add_option("statistic", stat_id)->required();
  eval_cmd->add_option("object", object_text)->required();

  std::string what;
  auto* list_cmd = app.add_subcommand("list", "List collections, statistics or maps");
  list_cmd->add_option("what", what)->required()->check(CLI::IsMember({"collections", "statistics", "maps"}));

  std::string import_dir;
  auto* import_cmd = app.add_subcommand("import", "Validate .stat files and copy them into the data directory");
  import_cmd->add_option("dir", import_dir)->required();

  std::string addr = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP JSON API");
  serve_cmd->add_option("--addr", addr, "HOST:PORT to listen on")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    Config config;
    if (const char* env = std::getenv("STATFINDER_DATA"); env && *env) config.data_dir = env;
    else config.data_dir = STATFINDER_DEFAULT_DATA;
    if (!config_file.empty()) config = load_config(config_file, config);
    if (!data_dir.empty()) config.data_dir = data_dir;

    if (*serve_cmd) {
      auto [host, port] = split_address(addr);
      Service service(config);
      HttpServer server(service);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        std::cerr << "statfinder: cannot bind " << addr << "\n";
        return kDataError;
      }
      std::cerr << "statfinder: serving " << service.snapshot()->registry().size() << " statistics on " << host
                << ":" << bound << "\n";
      server.run();
      return 0;
    }

    if (*import_cmd) {
      Service service(config);
      const auto copied = service.import_directory(import_dir);
      std::cout << "imported " << copied << " statistics into " << config.data_dir.string() << "\n";
      return 0;
    }

    const Engine engine(load_registry(config.data_dir), config.engine());

    if (*search_cmd) {
      const CollectionId collection = parse_collection(collection_name_arg);
      std::string text;
      if (query_file.empty()) {
        text = read_all(std::cin);
      } else {
        std::ifstream in(query_file, std::ios::binary);
        if (!in) throw IoError("cannot read " + query_file);
        text = read_all(in);
      }
      Query query = parse_query_text(collection, text);
      query.options.mode = parse_search_mode(mode);
      query.options.max_depth = depth;
      query.options.max_results = max_results;
      const SearchOutcome outcome = engine.search(query);
      if (as_json) {
        std::cout << to_body(search_json(outcome, engine.registry()));
      } else {
        print_search_table(outcome, engine.registry());
      }
      return 0;
    }

    if (*eval_cmd) {
      const Statistic& s = engine.registry().lookup(StatisticId::parse(stat_id));
      std::cout << evaluate(s, parse(s.collection, object_text)) << "\n";
      return 0;
    }

    if (*list_cmd) {
      if (what == "collections") {
        for (CollectionId c : kAllCollections) {
          std::cout << pad(std::string(collection_name(c)), 20) << "cap " << config.caps.cap(c) << "\n";
        }
      } else if (what == "statistics") {
        for (const auto& s : engine.registry().all()) {
          std::cout << pad(s.id.str(), 10) << pad(std::string(collection_name(s.collection)), 19) << s.name << "\n";
        }
      } else {
        for (const auto& m : seed_maps()) {
          std::cout << pad(m.id.str(), 9) << pad(std::string(m.name), 21)
                    << pad(std::string(collection_name(m.domain)), 19) << "-> "
                    << collection_name(m.codomain) << "\n";
        }
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "statfinder: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "statfinder: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
