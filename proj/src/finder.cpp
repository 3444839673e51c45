#include "statfinder/finder.hpp"

#include <algorithm>
#include <set>

#include "statfinder/error.hpp"

namespace statfinder {

std::string_view to_string(SearchMode mode) noexcept {
  switch (mode) {
    case SearchMode::Exact:
      return "exact";
    case SearchMode::Distribution:
      return "distribution";
    case SearchMode::Auto:
      return "auto";
  }
  return "auto";
}

std::string_view to_string(MatchKind kind) noexcept {
  return kind == MatchKind::Exact ? "exact" : "distribution";
}

SearchMode parse_search_mode(std::string_view text) {
  for (SearchMode m : {SearchMode::Exact, SearchMode::Distribution, SearchMode::Auto}) {
    if (to_string(m) == text) return m;
  }
  throw InvalidQuery("unknown search mode \"" + std::string(text) + "\" (exact, distribution, auto)");
}

void validate_query(const Query& query, const EnumerationCaps& caps, int depth_ceiling) {
  if (!query.assigned && !query.groups) throw EmptyQuery("query carries no data");
  if (query.assigned && query.groups) throw InvalidQuery("query has both assigned values and groups");
  if (query.options.max_depth < 0 || query.options.max_depth > depth_ceiling) {
    throw DepthExceeded("depth " + std::to_string(query.options.max_depth) + " outside 0.." +
                        std::to_string(depth_ceiling));
  }
  if (query.options.max_results < 1) throw InvalidQuery("max_results must be positive");
  if (query.assigned) {
    if (query.assigned->empty()) throw EmptyQuery("query has no values");
    for (const auto& [object, value] : *query.assigned) {
      if (object.collection != query.collection) {
        throw InvalidQuery("object \"" + object.encoding + "\" is not in " +
                           std::string(collection_name(query.collection)));
      }
      caps.check(object.collection, object.level);
    }
  } else {
    if (query.groups->empty()) throw EmptyQuery("query has no groups");
    for (const auto& g : *query.groups) {
      if (g.empty()) throw InvalidQuery("empty value group");
    }
  }
}

ValueGroups groups_by_level(const AssignedValues& assigned) {
  std::map<int, std::vector<std::int64_t>> by_level;
  for (const auto& [object, value] : assigned) by_level[object.level].push_back(value);
  ValueGroups groups;
  for (auto& [level, values] : by_level) groups.push_back(std::move(values));
  return groups;
}

Fingerprint fingerprint(std::span<const std::int64_t> values) {
  if (values.empty()) throw EmptyInput("cannot fingerprint an empty multiset");
  return fingerprint(Distribution::from_values(0, {values.begin(), values.end()}));
}

Fingerprint fingerprint(const Distribution& distribution) {
  if (distribution.counts.empty()) throw EmptyInput("cannot fingerprint an empty multiset");
  Fingerprint fp;
  for (const auto& [value, multiplicity] : distribution.counts) {
    if (!fp.canonical.empty()) fp.canonical += ',';
    fp.canonical += std::to_string(value);
    fp.canonical += '^';
    fp.canonical += std::to_string(multiplicity);
  }
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : fp.canonical) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  fp.digest = hash;
  return fp;
}

std::optional<MatchResult> match_exact(const AssignedValues& assigned, const Statistic& statistic,
                                       const MapPath& path, std::int64_t* comparisons) {
  if (assigned.empty() || path.target() != statistic.collection) return std::nullopt;
  if (comparisons) ++*comparisons;
  for (const auto& [object, value] : assigned) {
    auto actual = try_evaluate(statistic, compose(path, object));
    if (!actual || *actual != value) return std::nullopt;
  }
  MatchResult r;
  r.statistic = statistic.id;
  r.path = path;
  r.kind = MatchKind::Exact;
  r.matched_count = static_cast<std::int64_t>(assigned.size());
  r.depth = path.depth();
  return r;
}

bool is_sub_multiset(const Distribution& part, const Distribution& whole) noexcept {
  auto it = whole.counts.begin();
  for (const auto& [value, multiplicity] : part.counts) {
    while (it != whole.counts.end() && it->first < value) ++it;
    if (it == whole.counts.end() || it->first != value || it->second < multiplicity) return false;
  }
  return true;
}

std::optional<std::vector<int>> assign_groups(std::span<const Distribution> groups, int max_level,
                                              const std::function<std::uint64_t(int)>& level_size,
                                              const LevelDistributions& level_distribution,
                                              std::int64_t* comparisons) {
  std::vector<int> assignment(groups.size(), -1);
  std::vector<bool> used(static_cast<std::size_t>(max_level) + 1, false);

  std::function<bool(std::size_t)> place = [&](std::size_t g) -> bool {
    if (g == groups.size()) return true;
    const auto size = static_cast<std::uint64_t>(groups[g].total());
    for (int level = 0; level <= max_level; ++level) {
      if (used[level] || level_size(level) < size) continue;
      const Distribution* image = level_distribution(level);
      if (image == nullptr) continue;
      if (comparisons) ++*comparisons;
      const bool fits = level_size(level) == size ? groups[g].counts == image->counts
                                                  : is_sub_multiset(groups[g], *image);
      if (!fits) continue;
      used[level] = true;
      assignment[g] = level;
      if (place(g + 1)) return true;
      used[level] = false;
    }
    return false;
  };

  if (!place(0)) return std::nullopt;
  return assignment;
}

namespace {

std::vector<Distribution> as_distributions(const ValueGroups& groups) {
  std::vector<Distribution> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(Distribution::from_values(0, g));
  return out;
}

std::int64_t total_values(const ValueGroups& groups) {
  std::int64_t n = 0;
  for (const auto& g : groups) n += static_cast<std::int64_t>(g.size());
  return n;
}

}  // namespace

std::optional<MatchResult> match_distribution(const ValueGroups& groups, const Statistic& statistic,
                                              const MapPath& path, const EnumerationCaps& caps,
                                              std::int64_t* comparisons) {
  if (groups.empty() || path.target() != statistic.collection || statistic.rule_def() == nullptr) {
    return std::nullopt;
  }
  const CollectionId source = path.source();
  std::map<int, Distribution> cache;
  LevelDistributions images = [&](int level) -> const Distribution* {
    auto it = cache.find(level);
    if (it == cache.end()) {
      std::vector<std::int64_t> values;
      for (const auto& x : enumerate(source, level, caps)) values.push_back(evaluate(statistic, compose(path, x)));
      it = cache.emplace(level, Distribution::from_values(level, std::move(values))).first;
    }
    return &it->second;
  };
  auto sizes = [&](int level) { return cardinality(source, level, caps); };
  auto wanted = as_distributions(groups);
  auto levels = assign_groups(wanted, caps.cap(source), sizes, images, comparisons);
  if (!levels) return std::nullopt;

  MatchResult r;
  r.statistic = statistic.id;
  r.path = path;
  r.kind = MatchKind::Distribution;
  r.matched_count = total_values(groups);
  r.depth = path.depth();
  r.levels = std::move(*levels);
  return r;
}

SearchOutcome finalize_results(std::vector<MatchResult> results, std::int64_t searches_performed,
                               int max_results) {
  std::sort(results.begin(), results.end(), [](const MatchResult& a, const MatchResult& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.matched_count != b.matched_count) return a.matched_count > b.matched_count;
    if (a.statistic != b.statistic) return a.statistic < b.statistic;
    return a.path < b.path;
  });
  SearchOutcome out;
  out.searches_performed = searches_performed;
  std::set<std::pair<StatisticId, MatchKind>> reported;
  for (auto& r : results) {
    if (static_cast<int>(out.results.size()) >= max_results) break;
    if (!reported.emplace(r.statistic, r.kind).second) continue;
    r.searches_performed = searches_performed;
    out.results.push_back(std::move(r));
  }
  return out;
}

}  // namespace statfinder
