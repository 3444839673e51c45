#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statfinder/engine.hpp"
#include "statfinder/stats.hpp"

namespace statfinder {

// Line-oriented "key = value" configuration; '#' starts a comment.
//   data_dir, depth_ceiling, index_cap, min_contribution_values, cors_origin,
//   cap.<Collection> (e.g. cap.Permutations = 7)
struct Config {
  EnumerationCaps caps;
  std::filesystem::path data_dir;
  int depth_ceiling = kDefaultDepthCeiling;
  int index_cap = 8;
  int min_contribution_values = 3;
  std::string cors_origin;  // empty: CORS disabled

  std::filesystem::path pending_dir() const { return data_dir / "pending"; }
  EngineConfig engine() const { return EngineConfig{caps, depth_ceiling, index_cap}; }
};

Config parse_config(std::string_view text, Config base = {}, const std::string& origin = "config");
Config load_config(const std::filesystem::path& file, Config base = {});

// --- .stat files ------------------------------------------------------------
//
//   Identifier: St000004
//   Collection: Permutations
//   Name: <text>
//   Description: <text>        (optional, repeatable, joined with spaces)
//   References: <text>         (optional, repeatable)
//   Values:
//   <canonical object> => <integer>   (sorted by canonical object order)
//
// Built-in rules attach by identifier while parsing; a stored value that
// disagrees with the rule raises RuleValueConflict naming file and line.

Statistic parse_statistic(std::string_view text, const std::string& file_name = "<memory>");
std::string format_statistic(const Statistic& statistic);

// Fail-fast: every *.stat file directly inside `directory` must load, or
// nothing does. Throws ParseError, DuplicateIdentifier, RuleValueConflict,
// IoError.
Registry load_registry(const std::filesystem::path& directory);

// Writes <directory>/<id>.stat atomically and returns its path. Throws
// InvalidStatistic before touching the disk, IoError on write failure.
std::filesystem::path save_statistic(const Statistic& statistic, const std::filesystem::path& directory);

// --- contributions ------------------------------------------------------------

struct Contribution {
  CollectionId collection = CollectionId::Permutations;
  std::string name;
  std::string description;
  std::vector<std::string> references;
  std::vector<std::pair<std::string, std::int64_t>> values;  // object text -> value
};

enum class Severity { Error, Warning, Notice };
std::string_view to_string(Severity severity) noexcept;

struct Finding {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::optional<std::string> key;           // offending object text
  std::optional<StatisticId> statistic;     // existing statistic, for duplicate notices

  bool operator==(const Finding&) const = default;
};

inline constexpr int kMinContributionValues = 3;

std::vector<Finding> validate_contribution(const Contribution& contribution, const Registry& registry,
                                           int min_values = kMinContributionValues);

bool has_errors(std::span<const Finding> findings) noexcept;

// "St" + zero padded (largest existing number + 1). Throws IdentifierOverflow.
StatisticId assign_identifier(std::span<const StatisticId> existing);
StatisticId assign_identifier(const Registry& registry);

// Identifiers of the *.stat files in a directory (by file stem).
std::vector<StatisticId> identifiers_in(const std::filesystem::path& directory);

// Single writer for contributions: validation, identifier assignment and
// the write into the pending directory happen under one lock.
class ContributionWriter {
 public:
  struct Submission {
    std::optional<StatisticId> id;
    std::vector<Finding> findings;
    std::filesystem::path file;
  };

  ContributionWriter(std::filesystem::path pending_dir, int min_values = kMinContributionValues)
      : pending_dir_(std::move(pending_dir)), min_values_(min_values) {}

  Submission submit(const Contribution& contribution, const Registry& registry);

 private:
  std::filesystem::path pending_dir_;
  int min_values_;
  std::mutex mutex_;
};

}  // namespace statfinder
