#include "statfinder/query_text.hpp"

#include <cctype>
#include <charconv>

#include "statfinder/error.hpp"

namespace statfinder {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::int64_t parse_integer(std::string_view text, std::size_t line) {
  text = trim(text);
  std::int64_t value = 0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  auto [end, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidQuery(at_line(line, "\"" + std::string(text) + "\" is not an integer"));
  }
  return value;
}

}  // namespace

Query parse_query_text(CollectionId collection, std::string_view text) {
  Query query;
  query.collection = collection;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (trim(line).empty()) continue;

    if (auto arrow = line.rfind("=>"); arrow != std::string_view::npos) {
      if (query.groups) throw InvalidQuery(at_line(line_no, "object pair after value groups"));
      if (!query.assigned) query.assigned.emplace();
      CombObject object;
      try {
        object = parse(collection, trim(line.substr(0, arrow)));
      } catch (const NonCanonicalError& e) {
        throw NonCanonicalError(at_line(line_no, e.what()), e.canonical());
      } catch (const InvalidObject& e) {
        throw InvalidObject(at_line(line_no, e.what()));
      }
      const std::int64_t value = parse_integer(line.substr(arrow + 2), line_no);
      auto [it, inserted] = query.assigned->emplace(object, value);
      if (!inserted && it->second != value) {
        throw InvalidQuery(at_line(line_no, "conflicting values for " + object.encoding));
      }
    } else {
      if (query.assigned) throw InvalidQuery(at_line(line_no, "value group after object pairs"));
      if (!query.groups) query.groups.emplace();
      std::vector<std::int64_t> group;
      std::size_t start = 0;
      for (;;) {
        auto comma = line.find(',', start);
        group.push_back(parse_integer(line.substr(start, comma - start), line_no));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      query.groups->push_back(std::move(group));
    }
  }
  if (!query.assigned && !query.groups) throw EmptyQuery("query text has no data lines");
  return query;
}

std::string format_query_text(const Query& query) {
  std::string out;
  if (query.assigned) {
    for (const auto& [object, value] : *query.assigned) {
      out += object.encoding + " => " + std::to_string(value) + "\n";
    }
  } else if (query.groups) {
    for (const auto& g : *query.groups) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(g[i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace statfinder
