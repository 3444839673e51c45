#include "statfinder/store.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "statfinder/error.hpp"

namespace fs = std::filesystem;

namespace statfinder {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
  return lines;
}

std::optional<std::int64_t> to_integer(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomically(const fs::path& file, const std::string& content) {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place");
  }
}

[[noreturn]] void parse_fail(const std::string& file, std::size_t line, const std::string& reason) {
  throw ParseError(file + ":" + std::to_string(line) + ": " + reason);
}

bool has_line_break(std::string_view s) { return s.find_first_of("\r\n") != std::string_view::npos; }

}  // namespace

// --- config ---------------------------------------------------------------------

Config parse_config(std::string_view text, Config base, const std::string& origin) {
  Config cfg = std::move(base);
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(origin, i + 1, "expected \"key = value\"");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    auto integer = [&]() -> int {
      auto v = to_integer(value);
      if (!v || *v < 0 || *v > 1000) parse_fail(origin, i + 1, key + " needs a small non-negative integer");
      return static_cast<int>(*v);
    };
    if (key == "data_dir") {
      cfg.data_dir = value;
    } else if (key == "depth_ceiling") {
      cfg.depth_ceiling = integer();
    } else if (key == "index_cap") {
      cfg.index_cap = integer();
    } else if (key == "min_contribution_values") {
      cfg.min_contribution_values = integer();
    } else if (key == "cors_origin") {
      cfg.cors_origin = value;
    } else if (key.rfind("cap.", 0) == 0) {
      try {
        cfg.caps.set(parse_collection(key.substr(4)), integer());
      } catch (const UnknownCollection& e) {
        parse_fail(origin, i + 1, e.what());
      }
    } else {
      parse_fail(origin, i + 1, "unknown key \"" + key + "\"");
    }
  }
  return cfg;
}

Config load_config(const fs::path& file, Config base) {
  return parse_config(read_file(file), std::move(base), file.string());
}

// --- .stat files --------------------------------------------------------------

Statistic parse_statistic(std::string_view text, const std::string& file_name) {
  Statistic s;
  std::optional<StatisticId> id;
  std::optional<CollectionId> collection;
  std::optional<std::string> name;
  std::vector<std::string> description;
  const Rule* rule = nullptr;

  auto lines = split_lines(text);
  std::size_t i = 0;
  bool values_section = false;
  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line == "Values:") {
      values_section = true;
      ++i;
      break;
    }
    auto colon = line.find(": ");
    if (colon == std::string_view::npos) {
      // "Key:" with an empty value.
      if (!line.empty() && line.back() == ':') colon = line.size() - 1;
      else parse_fail(file_name, i + 1, "expected \"Key: Value\"");
    }
    const std::string_view key = line.substr(0, colon);
    const std::string value(colon + 2 <= line.size() ? line.substr(colon + 2) : std::string_view{});
    if (key == "Identifier") {
      if (id) parse_fail(file_name, i + 1, "repeated Identifier");
      if (!StatisticId::valid(value)) parse_fail(file_name, i + 1, "invalid identifier \"" + value + "\"");
      id = StatisticId::parse(value);
    } else if (key == "Collection") {
      if (collection) parse_fail(file_name, i + 1, "repeated Collection");
      try {
        collection = parse_collection(value);
      } catch (const UnknownCollection& e) {
        parse_fail(file_name, i + 1, e.what());
      }
    } else if (key == "Name") {
      if (name) parse_fail(file_name, i + 1, "repeated Name");
      if (value.empty()) parse_fail(file_name, i + 1, "empty Name");
      name = value;
    } else if (key == "Description") {
      description.push_back(value);
    } else if (key == "References") {
      s.references.push_back(value);
    } else {
      parse_fail(file_name, i + 1, "unknown header key \"" + std::string(key) + "\"");
    }
  }
  const std::size_t header_end = i;
  if (!id) parse_fail(file_name, header_end, "missing Identifier");
  if (!collection) parse_fail(file_name, header_end, "missing Collection");
  if (!name) parse_fail(file_name, header_end, "missing Name");
  if (!values_section) parse_fail(file_name, header_end, "missing \"Values:\" line");

  s.id = *id;
  s.collection = *collection;
  s.name = *name;
  for (std::size_t k = 0; k < description.size(); ++k) {
    if (k) s.description += ' ';
    s.description += description[k];
  }
  rule = rule_for(s.id);
  if (rule != nullptr) {
    if (rule->collection != s.collection) {
      parse_fail(file_name, 1, s.id.str() + " is bound to rule " + std::string(rule->name) + " on " +
                                   std::string(collection_name(rule->collection)));
    }
    s.rule = std::string(rule->name);
  }

  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    auto arrow = line.find(" => ");
    if (arrow == std::string_view::npos) parse_fail(file_name, i + 1, "expected \"<object> => <integer>\"");
    CombObject object;
    try {
      object = parse(s.collection, line.substr(0, arrow));
    } catch (const InvalidObject& e) {
      parse_fail(file_name, i + 1, e.what());
    }
    auto value = to_integer(line.substr(arrow + 4));
    if (!value) parse_fail(file_name, i + 1, "value is not an integer");
    if (rule != nullptr && rule->fn(object) != *value) {
      throw RuleValueConflict(file_name + ":" + std::to_string(i + 1) + ": " + s.id.str() + " stores " +
                              std::to_string(*value) + " for " + object.encoding + " but rule " +
                              std::string(rule->name) + " gives " + std::to_string(rule->fn(object)));
    }
    if (!s.values.emplace(std::move(object), *value).second) {
      parse_fail(file_name, i + 1, "duplicate object " + std::string(line.substr(0, arrow)));
    }
  }
  if (s.values.empty() && rule == nullptr) {
    parse_fail(file_name, lines.size(), s.id.str() + " has neither values nor a built-in rule");
  }
  return s;
}

std::string format_statistic(const Statistic& statistic) {
  validate_statistic(statistic);
  if (has_line_break(statistic.name) || has_line_break(statistic.description)) {
    throw InvalidStatistic(statistic.id.str() + ": header fields must be single lines");
  }
  std::string out;
  out += "Identifier: " + statistic.id.str() + "\n";
  out += "Collection: " + std::string(collection_name(statistic.collection)) + "\n";
  out += "Name: " + statistic.name + "\n";
  if (!statistic.description.empty()) out += "Description: " + statistic.description + "\n";
  for (const auto& ref : statistic.references) {
    if (has_line_break(ref)) throw InvalidStatistic(statistic.id.str() + ": reference spans lines");
    out += "References: " + ref + "\n";
  }
  out += "Values:\n";
  for (const auto& [object, value] : statistic.values) {
    out += object.encoding + " => " + std::to_string(value) + "\n";
  }
  return out;
}

Registry load_registry(const fs::path& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) throw IoError("not a directory: " + directory.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".stat") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + directory.string());
  std::sort(files.begin(), files.end());

  Registry registry;
  std::map<StatisticId, fs::path> origin;
  for (const auto& file : files) {
    Statistic s = parse_statistic(read_file(file), file.string());
    if (auto [it, inserted] = origin.emplace(s.id, file); !inserted) {
      throw DuplicateIdentifier(s.id.str() + " is defined in both " + it->second.string() + " and " +
                                file.string());
    }
    registry.add(std::move(s));
  }
  return registry;
}

fs::path save_statistic(const Statistic& statistic, const fs::path& directory) {
  const std::string content = format_statistic(statistic);
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string());
  fs::path file = directory / (statistic.id.str() + ".stat");
  write_file_atomically(file, content);
  return file;
}

// --- contributions ------------------------------------------------------------

std::string_view to_string(Severity severity) noexcept {
  switch (severity) {
    case Severity::Error:
      return "error";
    case Severity::Warning:
      return "warning";
    case Severity::Notice:
      return "notice";
  }
  return "error";
}

bool has_errors(std::span<const Finding> findings) noexcept {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

std::vector<Finding> validate_contribution(const Contribution& c, const Registry& registry, int min_values) {
  std::vector<Finding> findings;
  auto add = [&](Severity sev, std::string code, std::string message, std::optional<std::string> key = {}) {
    findings.push_back(Finding{sev, std::move(code), std::move(message), std::move(key), std::nullopt});
  };

  if (trim(c.name).empty()) add(Severity::Error, "missing_name", "a name is required");
  if (static_cast<int>(c.values.size()) < min_values) {
    add(Severity::Error, "too_few_values",
        "at least " + std::to_string(min_values) + " values are required, got " + std::to_string(c.values.size()));
  }
  if (c.description.empty()) add(Severity::Warning, "missing_description", "describe where the statistic arises");

  std::map<CombObject, std::int64_t> parsed;
  bool parse_failed = false;
  for (const auto& [text, value] : c.values) {
    try {
      CombObject object = parse(c.collection, text);
      if (!parsed.emplace(object, value).second) {
        add(Severity::Error, "duplicate_key", "object " + text + " is listed twice", text);
      }
    } catch (const InvalidObject& e) {
      parse_failed = true;
      add(Severity::Error, "invalid_object", e.what(), text);
    }
  }

  if (!parse_failed && !parsed.empty()) {
    for (const Statistic* s : registry.on(c.collection)) {
      bool same = true;
      for (const auto& [object, value] : parsed) {
        auto known = try_evaluate(*s, object);
        if (!known || *known != value) {
          same = false;
          break;
        }
      }
      if (same) {
        findings.push_back(Finding{Severity::Notice, "probable_duplicate",
                                   "values agree with " + s->id.str() + " (" + s->name + ")", std::nullopt,
                                   s->id});
      }
    }
  }
  return findings;
}

StatisticId assign_identifier(std::span<const StatisticId> existing) {
  long top = 0;
  for (const auto& id : existing) top = std::max(top, id.number());
  if (top >= StatisticId::kMaxNumber) {
    throw IdentifierOverflow("no statistic identifier left after " + StatisticId::from_number(top).str());
  }
  return StatisticId::from_number(top + 1);
}

StatisticId assign_identifier(const Registry& registry) {
  std::vector<StatisticId> ids;
  for (const auto& s : registry.all()) ids.push_back(s.id);
  return assign_identifier(ids);
}

std::vector<StatisticId> identifiers_in(const fs::path& directory) {
  std::vector<StatisticId> ids;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) return ids;
  for (const auto& entry : fs::directory_iterator(directory, ec)) {
    if (entry.path().extension() != ".stat") continue;
    const std::string stem = entry.path().stem().string();
    if (StatisticId::valid(stem)) ids.push_back(StatisticId::parse(stem));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

ContributionWriter::Submission ContributionWriter::submit(const Contribution& contribution,
                                                          const Registry& registry) {
  std::lock_guard lock(mutex_);
  Submission out;
  out.findings = validate_contribution(contribution, registry, min_values_);
  if (has_errors(out.findings)) return out;

  std::vector<StatisticId> taken = identifiers_in(pending_dir_);
  for (const auto& s : registry.all()) taken.push_back(s.id);
  const StatisticId id = assign_identifier(taken);

  auto single_line = [](std::string s) {
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
    return s;
  };
  Statistic s;
  s.id = id;
  s.collection = contribution.collection;
  s.name = single_line(contribution.name);
  s.description = single_line(contribution.description);
  for (const auto& ref : contribution.references) s.references.push_back(single_line(ref));
  for (const auto& [text, value] : contribution.values) s.values.emplace(parse(contribution.collection, text), value);
  out.file = save_statistic(s, pending_dir_);
  out.id = id;
  return out;
}

}  // namespace statfinder
