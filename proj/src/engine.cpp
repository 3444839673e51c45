#include "statfinder/engine.hpp"

#include <algorithm>
#include <exception>

#include "statfinder/error.hpp"

namespace statfinder {

void FingerprintIndex::insert(const StatisticId& statistic, const Distribution& distribution) {
  IndexEntry entry{statistic, distribution.level};
  Fingerprint fp = fingerprint(distribution);
  auto& bucket = by_digest_[fp.digest];
  bucket.emplace_back(std::move(fp.canonical), entry);
  std::sort(bucket.begin(), bucket.end());
  distributions_.insert_or_assign(entry, distribution);
}

std::vector<IndexEntry> FingerprintIndex::lookup(const Fingerprint& fp) const {
  std::vector<IndexEntry> out;
  auto it = by_digest_.find(fp.digest);
  if (it == by_digest_.end()) return out;
  for (const auto& [canonical, entry] : it->second) {
    if (canonical == fp.canonical) out.push_back(entry);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const Distribution* FingerprintIndex::distribution(const StatisticId& statistic, int level) const {
  auto it = distributions_.find(IndexEntry{statistic, level});
  return it == distributions_.end() ? nullptr : &it->second;
}

FingerprintIndex build_index(const Registry& registry, const LevelTables& tables, int index_cap) {
  FingerprintIndex index;
  for (const auto& s : registry.all()) {
    const int top = std::min(index_cap, tables.caps().cap(s.collection));
    for (int level = 0; level <= top; ++level) {
      const StatColumn& col = tables.column(s, level);
      if (!col.complete) continue;
      index.insert(s.id, Distribution::from_values(level, col.values));
    }
  }
  return index;
}

Engine::Engine(Registry registry, EngineConfig config)
    : registry_(std::move(registry)),
      config_(config),
      tables_(std::make_unique<LevelTables>(config.caps)),
      index_(build_index(registry_, *tables_, config.index_cap)) {}

std::optional<Distribution> Engine::level_distribution(const Statistic& statistic, const MapPath& path,
                                                       int level) const {
  if (path.empty()) {
    if (const Distribution* d = index_.distribution(statistic.id, level)) return *d;
  }
  return kernels::path_distribution(*tables_, statistic, path, level);
}

namespace {

struct Candidate {
  const MapPath* path;
  const Statistic* statistic;
};

// Runs `check` over every candidate in parallel, then rethrows the first
// failure in candidate order.
template <class Check>
std::vector<std::optional<MatchResult>> run_candidates(const std::vector<Candidate>& candidates,
                                                       std::int64_t& comparisons, Check check) {
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
  std::vector<std::optional<MatchResult>> found(candidates.size());
  std::vector<std::int64_t> counts(candidates.size(), 0);
  std::vector<std::exception_ptr> errors(candidates.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      found[i] = check(candidates[i], &counts[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::int64_t c : counts) comparisons += c;
  return found;
}

}  // namespace

SearchOutcome Engine::search(const Query& query) const {
  validate_query(query, config_.caps, config_.depth_ceiling);
  const SearchMode mode = query.options.mode;
  if (mode == SearchMode::Exact && !query.assigned) {
    throw InvalidQuery("exact mode needs object/value pairs");
  }

  const auto paths = enumerate_paths(query.collection, query.options.max_depth, config_.caps,
                                     config_.depth_ceiling);
  std::vector<Candidate> candidates;
  for (const auto& p : paths) {
    for (const Statistic* s : registry_.on(p.target())) candidates.push_back({&p, s});
  }

  std::int64_t comparisons = 0;
  std::vector<MatchResult> matches;
  auto collect = [&](std::vector<std::optional<MatchResult>> found) {
    for (auto& f : found) {
      if (f) matches.push_back(std::move(*f));
    }
  };

  if (query.assigned && mode != SearchMode::Distribution) {
    collect(run_candidates(candidates, comparisons, [&](const Candidate& c, std::int64_t* count) {
      return match_exact(*query.assigned, *c.statistic, *c.path, count);
    }));
  }

  const bool fall_back = mode == SearchMode::Auto && matches.empty();
  if (mode == SearchMode::Distribution || fall_back) {
    const ValueGroups groups = query.groups ? *query.groups : groups_by_level(*query.assigned);
    std::vector<Distribution> wanted;
    for (const auto& g : groups) wanted.push_back(Distribution::from_values(0, g));
    const CollectionId source = query.collection;
    const int max_level = config_.caps.cap(source);
    auto sizes = [&](int level) { return cardinality(source, level, config_.caps); };

    collect(run_candidates(candidates, comparisons,
                           [&](const Candidate& c, std::int64_t* count) -> std::optional<MatchResult> {
      if (c.statistic->rule_def() == nullptr) return std::nullopt;
      std::map<int, std::optional<Distribution>> cache;
      LevelDistributions images = [&](int level) -> const Distribution* {
        auto it = cache.find(level);
        if (it == cache.end()) it = cache.emplace(level, level_distribution(*c.statistic, *c.path, level)).first;
        return it->second ? &*it->second : nullptr;
      };
      auto levels = assign_groups(wanted, max_level, sizes, images, count);
      if (!levels) return std::nullopt;
      MatchResult r;
      r.statistic = c.statistic->id;
      r.path = *c.path;
      r.kind = MatchKind::Distribution;
      for (const auto& g : groups) r.matched_count += static_cast<std::int64_t>(g.size());
      r.depth = c.path->depth();
      r.levels = std::move(*levels);
      return r;
    }));
  }

  return finalize_results(std::move(matches), comparisons, query.options.max_results);
}

}  // namespace statfinder
