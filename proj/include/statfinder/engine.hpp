#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "statfinder/finder.hpp"
#include "statfinder/kernels.hpp"
#include "statfinder/stats.hpp"

namespace statfinder {

struct IndexEntry {
  StatisticId statistic;
  int level = 0;

  auto operator<=>(const IndexEntry&) const = default;
  bool operator==(const IndexEntry&) const = default;
};

// Fingerprint digest -> (statistic, level) for every complete level up to the
// index cap, plus the distributions themselves.
class FingerprintIndex {
 public:
  void insert(const StatisticId& statistic, const Distribution& distribution);

  // Entries whose canonical multiset equals the fingerprint's, sorted.
  std::vector<IndexEntry> lookup(const Fingerprint& fp) const;
  const Distribution* distribution(const StatisticId& statistic, int level) const;

  std::size_t size() const noexcept { return distributions_.size(); }
  bool operator==(const FingerprintIndex&) const = default;

 private:
  std::map<std::uint64_t, std::vector<std::pair<std::string, IndexEntry>>> by_digest_;
  std::map<IndexEntry, Distribution> distributions_;
};

FingerprintIndex build_index(const Registry& registry, const LevelTables& tables, int index_cap);

struct EngineConfig {
  EnumerationCaps caps;
  int depth_ceiling = kDefaultDepthCeiling;
  int index_cap = 8;
};

// A registry snapshot with its caches and fingerprint index. Immutable after
// construction; search() may run concurrently from several threads.
class Engine {
 public:
  explicit Engine(Registry registry, EngineConfig config = {});
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Candidate (path, statistic) checks fan out over OpenMP threads and are
  // ranked afterwards, so the outcome never depends on the schedule.
  SearchOutcome search(const Query& query) const;

  const Registry& registry() const noexcept { return registry_; }
  const EngineConfig& config() const noexcept { return config_; }
  const LevelTables& tables() const noexcept { return *tables_; }
  const FingerprintIndex& index() const noexcept { return index_; }

  // Level distribution through the index when possible, else the kernel.
  std::optional<Distribution> level_distribution(const Statistic& statistic, const MapPath& path,
                                                 int level) const;

 private:
  Registry registry_;
  EngineConfig config_;
  std::unique_ptr<LevelTables> tables_;
  FingerprintIndex index_;
};

}  // namespace statfinder
