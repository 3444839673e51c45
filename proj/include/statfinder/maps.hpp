#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statfinder/ids.hpp"
#include "statfinder/objects.hpp"

namespace statfinder {

using MapFn = CombObject (*)(const CombObject&);

// A built-in, level-preserving map between two collections.
struct CombMap {
  MapId id;
  std::string_view name;
  CollectionId domain;
  CollectionId codomain;
  bool bijective;
  MapFn fn;
  std::string_view level_map = "identity";
};

// The seed registry, sorted by identifier.
std::span<const CombMap> seed_maps();

// Throws UnknownMap.
const CombMap& find_map(const MapId& id);
const CombMap& find_map(std::string_view id);

namespace mapfns {
CombObject inverse(const CombObject& permutation);
CombObject reverse(const CombObject& permutation);
CombObject complement(const CombObject& permutation);
CombObject foata(const CombObject& permutation);
CombObject descent_composition(const CombObject& permutation);
CombObject bst_shape(const CombObject& permutation);
CombObject tree_to_dyck(const CombObject& tree);
CombObject conjugate(const CombObject& partition);
CombObject reverse_composition(const CombObject& composition);
CombObject sort_decreasing(const CombObject& composition);
}  // namespace mapfns

// Throws DomainMismatch when the object is not in the map's domain.
CombObject apply(const CombMap& map, const CombObject& object);

// The fundamental transformation: inv(foata(p)) == maj(p). Throws
// DomainMismatch for non-permutations.
CombObject foata(const CombObject& permutation);

// A composable sequence of maps applied left to right. The empty path is
// the identity on its source collection.
class MapPath {
 public:
  explicit MapPath(CollectionId source = CollectionId::Permutations) : source_(source), target_(source) {}
  // Throws DomainMismatch if consecutive steps do not compose.
  MapPath(CollectionId source, std::vector<const CombMap*> steps);

  CollectionId source() const noexcept { return source_; }
  CollectionId target() const noexcept { return target_; }
  std::span<const CombMap* const> steps() const noexcept { return steps_; }
  int depth() const noexcept { return static_cast<int>(steps_.size()); }
  bool empty() const noexcept { return steps_.empty(); }

  MapPath then(const CombMap& map) const;
  std::vector<MapId> ids() const;

  // "Mp00004 then Mp00005" style rendering; "identity" for the empty path.
  std::string describe() const;

  bool operator==(const MapPath& other) const;
  // By source, then depth, then the MapId sequence.
  std::strong_ordering operator<=>(const MapPath& other) const;

 private:
  CollectionId source_;
  CollectionId target_;
  std::vector<const CombMap*> steps_;
};

CombObject compose(const MapPath& path, const CombObject& object);

inline constexpr int kDefaultDepthCeiling = 4;
inline constexpr int kPathProbeLevel = 4;

// Every composable path from `source` of length 0..max_depth, breadth first,
// ordered by MapId sequence within a depth. A path acting on levels
// 0..min(kPathProbeLevel, cap) exactly like an earlier kept path is pruned
// together with its extensions. Throws DepthExceeded.
std::vector<MapPath> enumerate_paths(CollectionId source, int max_depth,
                                     const EnumerationCaps& caps = {},
                                     int depth_ceiling = kDefaultDepthCeiling);

// Unpruned variant used to audit the pruning.
std::vector<MapPath> enumerate_all_paths(CollectionId source, int max_depth);

// True iff the map is injective on the level.
bool check_bijective(const CombMap& map, int level, const EnumerationCaps& caps = {});

}  // namespace statfinder
