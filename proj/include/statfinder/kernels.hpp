#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "statfinder/maps.hpp"
#include "statfinder/objects.hpp"
#include "statfinder/stats.hpp"

namespace statfinder {

// One enumerated level with a reverse index from encoding to position.
struct LevelTable {
  std::vector<CombObject> objects;
  std::unordered_map<std::string, std::uint32_t> position;
};

// For each object of a domain level, the position of its image in the
// codomain level.
using ImageTable = std::vector<std::uint32_t>;

// Statistic values aligned with a level's enumeration order.
struct StatColumn {
  std::vector<std::int64_t> values;
  std::vector<std::uint8_t> known;
  bool complete = false;
};

// Lazily built, thread-safe caches of levels, map images and statistic
// columns. Entries are computed once and never change, so references stay
// valid for the lifetime of the object. Statistic columns are keyed by
// identifier: one LevelTables instance must serve a single registry.
class LevelTables {
 public:
  explicit LevelTables(EnumerationCaps caps = {}) : caps_(caps) {}
  LevelTables(const LevelTables&) = delete;
  LevelTables& operator=(const LevelTables&) = delete;

  const EnumerationCaps& caps() const noexcept { return caps_; }

  const LevelTable& level(CollectionId collection, int level) const;
  const ImageTable& image(const CombMap& map, int level) const;
  const StatColumn& column(const Statistic& statistic, int level) const;

 private:
  template <class T>
  struct Slot {
    std::once_flag once;
    T value;
  };
  template <class Key, class T, class Build>
  const T& get(std::map<Key, std::unique_ptr<Slot<T>>>& cache, const Key& key, Build&& build) const;

  EnumerationCaps caps_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<CollectionId, int>, std::unique_ptr<Slot<LevelTable>>> levels_;
  mutable std::map<std::pair<std::string, int>, std::unique_ptr<Slot<ImageTable>>> images_;
  mutable std::map<std::pair<std::string, int>, std::unique_ptr<Slot<StatColumn>>> columns_;
};

namespace kernels {

// Position in the target level of every source-level object's image under
// the path (identity positions for the empty path). Parallel gather.
std::vector<std::uint32_t> path_image(const LevelTables& tables, const MapPath& path, int level);

// Multiset of statistic-after-path over a source level, or nullopt if the
// statistic is not known on every image. Parallel gather and reduction.
std::optional<Distribution> path_distribution(const LevelTables& tables, const Statistic& statistic,
                                              const MapPath& path, int level);

// Serial twin of path_distribution evaluated object by object; kept as the
// reference the parallel kernel is tested and benchmarked against.
std::optional<Distribution> path_distribution_serial(const Statistic& statistic, const MapPath& path,
                                                     int level, const EnumerationCaps& caps);

}  // namespace kernels

}  // namespace statfinder
