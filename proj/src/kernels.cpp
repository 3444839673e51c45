#include "statfinder/kernels.hpp"

#include <numeric>

#include "statfinder/error.hpp"

namespace statfinder {

template <class Key, class T, class Build>
const T& LevelTables::get(std::map<Key, std::unique_ptr<Slot<T>>>& cache, const Key& key,
                          Build&& build) const {
  Slot<T>* slot = nullptr;
  {
    std::lock_guard lock(mutex_);
    auto& entry = cache[key];
    if (!entry) entry = std::make_unique<Slot<T>>();
    slot = entry.get();
  }
  std::call_once(slot->once, [&] { slot->value = build(); });
  return slot->value;
}

const LevelTable& LevelTables::level(CollectionId collection, int level) const {
  return get(levels_, std::pair{collection, level}, [&] {
    LevelTable table;
    table.objects = enumerate(collection, level, caps_);
    table.position.reserve(table.objects.size());
    for (std::uint32_t i = 0; i < table.objects.size(); ++i) table.position.emplace(table.objects[i].encoding, i);
    return table;
  });
}

const ImageTable& LevelTables::image(const CombMap& map, int level) const {
  return get(images_, std::pair{map.id.str(), level}, [&] {
    const LevelTable& from = this->level(map.domain, level);
    const LevelTable& to = this->level(map.codomain, level);
    const auto n = static_cast<std::ptrdiff_t>(from.objects.size());
    ImageTable out(from.objects.size());
    int stray = 0;
#pragma omp parallel for schedule(static) reduction(+ : stray)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      auto it = to.position.find(map.fn(from.objects[i]).encoding);
      if (it == to.position.end()) {
        ++stray;
      } else {
        out[i] = it->second;
      }
    }
    if (stray > 0) {
      throw DomainMismatch(map.id.str() + " sent " + std::to_string(stray) + " objects of level " +
                           std::to_string(level) + " outside its codomain level");
    }
    return out;
  });
}

const StatColumn& LevelTables::column(const Statistic& statistic, int level) const {
  return get(columns_, std::pair{statistic.id.str(), level}, [&] {
    const LevelTable& table = this->level(statistic.collection, level);
    const auto n = static_cast<std::ptrdiff_t>(table.objects.size());
    StatColumn col;
    col.values.assign(table.objects.size(), 0);
    col.known.assign(table.objects.size(), 0);
    const Rule* rule = statistic.rule_def();
    int unknown = 0;
#pragma omp parallel for schedule(static) reduction(+ : unknown)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const CombObject& x = table.objects[i];
      if (auto it = statistic.values.find(x); it != statistic.values.end()) {
        col.values[i] = it->second;
        col.known[i] = 1;
      } else if (rule != nullptr) {
        col.values[i] = rule->fn(x);
        col.known[i] = 1;
      } else {
        ++unknown;
      }
    }
    col.complete = unknown == 0;
    return col;
  });
}

namespace kernels {

std::vector<std::uint32_t> path_image(const LevelTables& tables, const MapPath& path, int level) {
  std::vector<std::uint32_t> current(tables.level(path.source(), level).objects.size());
  std::iota(current.begin(), current.end(), 0u);
  const auto n = static_cast<std::ptrdiff_t>(current.size());
  for (const CombMap* step : path.steps()) {
    const ImageTable& img = tables.image(*step, level);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) current[i] = img[current[i]];
  }
  return current;
}

std::optional<Distribution> path_distribution(const LevelTables& tables, const Statistic& statistic,
                                              const MapPath& path, int level) {
  if (path.target() != statistic.collection) {
    throw DomainMismatch(statistic.id.str() + " is not defined on the target of " + path.describe());
  }
  const StatColumn& col = tables.column(statistic, level);
  auto image = path_image(tables, path, level);
  const auto n = static_cast<std::ptrdiff_t>(image.size());
  std::vector<std::int64_t> values(image.size());
  int missing = 0;
#pragma omp parallel for schedule(static) reduction(+ : missing)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    values[i] = col.values[image[i]];
    missing += col.known[image[i]] == 0;
  }
  if (missing > 0) return std::nullopt;
  return Distribution::from_values(level, std::move(values));
}

std::optional<Distribution> path_distribution_serial(const Statistic& statistic, const MapPath& path,
                                                     int level, const EnumerationCaps& caps) {
  std::vector<std::int64_t> values;
  for (const auto& x : enumerate(path.source(), level, caps)) {
    auto v = try_evaluate(statistic, compose(path, x));
    if (!v) return std::nullopt;
    values.push_back(*v);
  }
  return Distribution::from_values(level, std::move(values));
}

}  // namespace kernels

}  // namespace statfinder
