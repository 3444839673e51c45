#include "statfinder/reference.hpp"

#include "statfinder/error.hpp"

namespace statfinder::reference {

SearchOutcome search(const Query& query, const Registry& registry, const EnumerationCaps& caps,
                     int depth_ceiling) {
  validate_query(query, caps, depth_ceiling);
  const SearchMode mode = query.options.mode;
  if (mode == SearchMode::Exact && !query.assigned) {
    throw InvalidQuery("exact mode needs object/value pairs");
  }
  const auto paths = enumerate_paths(query.collection, query.options.max_depth, caps, depth_ceiling);

  std::int64_t comparisons = 0;
  std::vector<MatchResult> matches;
  if (query.assigned && mode != SearchMode::Distribution) {
    for (const auto& p : paths) {
      for (const Statistic* s : registry.on(p.target())) {
        if (auto m = match_exact(*query.assigned, *s, p, &comparisons)) matches.push_back(std::move(*m));
      }
    }
  }
  if (mode == SearchMode::Distribution || (mode == SearchMode::Auto && matches.empty())) {
    const ValueGroups groups = query.groups ? *query.groups : groups_by_level(*query.assigned);
    for (const auto& p : paths) {
      for (const Statistic* s : registry.on(p.target())) {
        if (auto m = match_distribution(groups, *s, p, caps, &comparisons)) matches.push_back(std::move(*m));
      }
    }
  }
  return finalize_results(std::move(matches), comparisons, query.options.max_results);
}

}  // namespace statfinder::reference
