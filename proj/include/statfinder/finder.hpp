#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statfinder/maps.hpp"
#include "statfinder/objects.hpp"
#include "statfinder/stats.hpp"

namespace statfinder {

enum class SearchMode { Exact, Distribution, Auto };
enum class MatchKind { Exact, Distribution };

std::string_view to_string(SearchMode mode) noexcept;
std::string_view to_string(MatchKind kind) noexcept;
SearchMode parse_search_mode(std::string_view text);  // throws InvalidQuery

struct QueryOptions {
  int max_depth = 2;
  SearchMode mode = SearchMode::Auto;
  int max_results = 20;
};

using AssignedValues = std::map<CombObject, std::int64_t>;
using ValueGroups = std::vector<std::vector<std::int64_t>>;

// Exactly one of `assigned` (object -> value) and `groups` (value multisets
// with no object attached) is set.
struct Query {
  CollectionId collection = CollectionId::Permutations;
  std::optional<AssignedValues> assigned;
  std::optional<ValueGroups> groups;
  QueryOptions options;
};

// Throws EmptyQuery, InvalidQuery, DepthExceeded or CapExceeded.
void validate_query(const Query& query, const EnumerationCaps& caps, int depth_ceiling);

// Assigned values partitioned by the level of their object, in level order.
ValueGroups groups_by_level(const AssignedValues& assigned);

// Canonical text "v1^m1,v2^m2,..." of a value multiset and its FNV-1a digest.
struct Fingerprint {
  std::string canonical;
  std::uint64_t digest = 0;

  bool operator==(const Fingerprint&) const = default;
};

Fingerprint fingerprint(std::span<const std::int64_t> values);  // throws EmptyInput
Fingerprint fingerprint(const Distribution& distribution);

struct MatchResult {
  StatisticId statistic;
  MapPath path;
  MatchKind kind = MatchKind::Exact;
  std::int64_t matched_count = 0;
  int depth = 0;
  std::int64_t searches_performed = 0;
  // Distribution matches: the level each query group was assigned to.
  std::vector<int> levels;

  bool operator==(const MatchResult&) const = default;
};

struct SearchOutcome {
  std::vector<MatchResult> results;
  std::int64_t searches_performed = 0;

  bool operator==(const SearchOutcome&) const = default;
};

// Agreement of statistic-after-path with every assigned pair, evaluated
// object by object. A missing value fails the match.
std::optional<MatchResult> match_exact(const AssignedValues& assigned, const Statistic& statistic,
                                       const MapPath& path, std::int64_t* comparisons = nullptr);

// Per-level image multiset of statistic-after-path, or nullptr when the
// level cannot be fully evaluated. Pointers must stay valid for the call.
using LevelDistributions = std::function<const Distribution*(int level)>;

// Injective assignment of groups to levels 0..max_level. A group matches a
// level if it equals the level multiset, or is a proper sub-multiset of it.
// Groups are placed in the given order, levels tried in increasing order,
// with backtracking. Every group/level comparison increments `comparisons`.
std::optional<std::vector<int>> assign_groups(std::span<const Distribution> groups, int max_level,
                                              const std::function<std::uint64_t(int)>& level_size,
                                              const LevelDistributions& level_distribution,
                                              std::int64_t* comparisons = nullptr);

bool is_sub_multiset(const Distribution& part, const Distribution& whole) noexcept;

// Direct route: level multisets recomputed by enumerate + compose + evaluate.
std::optional<MatchResult> match_distribution(const ValueGroups& groups, const Statistic& statistic,
                                              const MapPath& path, const EnumerationCaps& caps = {},
                                              std::int64_t* comparisons = nullptr);

// Sorts by (kind, depth, matched_count descending, statistic, path), keeps
// the best path per (statistic, kind), truncates to max_results and stamps
// searches_performed on every result.
SearchOutcome finalize_results(std::vector<MatchResult> results, std::int64_t searches_performed,
                               int max_results);

}  // namespace statfinder
