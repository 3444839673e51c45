#include "statfinder/stats.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "statfinder/error.hpp"

namespace statfinder {

namespace rules {

std::int64_t major_index(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::int64_t maj = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i] > p[i + 1]) maj += static_cast<std::int64_t>(i + 1);
  }
  return maj;
}

std::int64_t inversions(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::int64_t inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
  }
  return inv;
}

std::int64_t descents(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::int64_t des = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) des += p[i] > p[i + 1];
  return des;
}

std::int64_t fixed_points(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::int64_t fixed = 0;
  for (std::size_t i = 0; i < p.size(); ++i) fixed += p[i] == static_cast<int>(i + 1);
  return fixed;
}

std::int64_t exceedances(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::int64_t exc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) exc += p[i] > static_cast<int>(i + 1);
  return exc;
}

// Full cells between the path and the lowest path: each up step contributes
// the height it starts from.
std::int64_t area(const CombObject& dyck_path) {
  std::int64_t total = 0;
  int height = 0;
  for (char c : dyck_path.encoding) {
    if (c == '1') {
      total += height;
      ++height;
    } else {
      --height;
    }
  }
  return total;
}

std::int64_t peaks(const CombObject& dyck_path) {
  const auto& w = dyck_path.encoding;
  std::int64_t count = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) count += w[i] == '1' && w[i + 1] == '0';
  return count;
}

std::int64_t returns(const CombObject& dyck_path) {
  std::int64_t count = 0;
  int height = 0;
  for (char c : dyck_path.encoding) {
    height += c == '1' ? 1 : -1;
    count += height == 0;
  }
  return count;
}

std::int64_t tree_height(const CombObject& tree) {
  auto t = binary_tree_of(tree);
  if (t.empty()) return 0;
  std::function<std::int64_t(int)> height = [&](int node) -> std::int64_t {
    if (node < 0) return 0;
    return 1 + std::max(height(t.nodes[node].left), height(t.nodes[node].right));
  };
  return height(0);
}

std::int64_t partition_length(const CombObject& partition) {
  return static_cast<std::int64_t>(parts_of(partition).size());
}

std::int64_t largest_part(const CombObject& partition) {
  auto parts = parts_of(partition);
  return parts.empty() ? 0 : parts.front();
}

std::int64_t composition_length(const CombObject& composition) {
  return static_cast<std::int64_t>(parts_of(composition).size());
}

}  // namespace rules

namespace {

constexpr std::array kRules = {
    Rule{"major_index", CollectionId::Permutations, &rules::major_index},
    Rule{"inversions", CollectionId::Permutations, &rules::inversions},
    Rule{"descents", CollectionId::Permutations, &rules::descents},
    Rule{"fixed_points", CollectionId::Permutations, &rules::fixed_points},
    Rule{"exceedances", CollectionId::Permutations, &rules::exceedances},
    Rule{"area", CollectionId::DyckPaths, &rules::area},
    Rule{"peaks", CollectionId::DyckPaths, &rules::peaks},
    Rule{"returns", CollectionId::DyckPaths, &rules::returns},
    Rule{"tree_height", CollectionId::BinaryTrees, &rules::tree_height},
    Rule{"partition_length", CollectionId::IntegerPartitions, &rules::partition_length},
    Rule{"largest_part", CollectionId::IntegerPartitions, &rules::largest_part},
    Rule{"composition_length", CollectionId::Compositions, &rules::composition_length},
};

struct Binding {
  std::string_view id;
  std::string_view rule;
};

constexpr std::array kBindings = {
    Binding{"St000001", "descents"},          Binding{"St000002", "fixed_points"},
    Binding{"St000003", "area"},              Binding{"St000004", "major_index"},
    Binding{"St000005", "peaks"},             Binding{"St000006", "tree_height"},
    Binding{"St000007", "partition_length"},  Binding{"St000008", "largest_part"},
    Binding{"St000009", "composition_length"}, Binding{"St000010", "exceedances"},
    Binding{"St000011", "returns"},           Binding{"St000018", "inversions"},
};

}  // namespace

std::span<const Rule> builtin_rules() noexcept { return kRules; }

const Rule* find_rule(std::string_view name) noexcept {
  for (const auto& r : kRules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Rule* rule_for(const StatisticId& id) noexcept {
  for (const auto& b : kBindings) {
    if (b.id == id.str()) return find_rule(b.rule);
  }
  return nullptr;
}

void validate_statistic(const Statistic& statistic) {
  const std::string& id = statistic.id.str();
  if (!StatisticId::valid(id)) throw InvalidStatistic("statistic has no valid identifier");
  if (statistic.name.empty()) throw InvalidStatistic(id + ": empty name");
  const Rule* rule = nullptr;
  if (statistic.rule) {
    rule = find_rule(*statistic.rule);
    if (rule == nullptr) throw InvalidStatistic(id + ": unknown rule \"" + *statistic.rule + "\"");
    if (rule->collection != statistic.collection) {
      throw InvalidStatistic(id + ": rule " + *statistic.rule + " is not defined on " +
                             std::string(collection_name(statistic.collection)));
    }
  } else if (statistic.values.empty()) {
    throw InvalidStatistic(id + ": neither values nor a rule");
  }
  for (const auto& [object, value] : statistic.values) {
    if (object.collection != statistic.collection) {
      throw InvalidStatistic(id + ": value key \"" + object.encoding + "\" is not in " +
                             std::string(collection_name(statistic.collection)));
    }
    if (rule != nullptr && rule->fn(object) != value) {
      throw RuleValueConflict(id + ": stored value " + std::to_string(value) + " for " +
                              object.encoding + " contradicts rule " + std::string(rule->name) +
                              " (" + std::to_string(rule->fn(object)) + ")");
    }
  }
}

std::optional<std::int64_t> try_evaluate(const Statistic& statistic, const CombObject& object) {
  if (object.collection != statistic.collection) {
    throw DomainMismatch(statistic.id.str() + " is defined on " +
                         std::string(collection_name(statistic.collection)) + ", not " +
                         std::string(collection_name(object.collection)));
  }
  if (auto it = statistic.values.find(object); it != statistic.values.end()) return it->second;
  if (const Rule* rule = statistic.rule_def()) return rule->fn(object);
  return std::nullopt;
}

std::int64_t evaluate(const Statistic& statistic, const CombObject& object) {
  if (auto v = try_evaluate(statistic, object)) return *v;
  throw NotComputable(statistic.id.str() + " has no value for " + object.encoding);
}

LevelValues values_on_level(const Statistic& statistic, int level, const EnumerationCaps& caps) {
  caps.check(statistic.collection, level);
  LevelValues out;
  out.level = level;
  if (statistic.rule_def() != nullptr) {
    for (const auto& object : enumerate(statistic.collection, level, caps)) {
      out.values.emplace(object, evaluate(statistic, object));
    }
    out.complete = true;
    return out;
  }
  for (const auto& [object, value] : statistic.values) {
    if (object.level == level) out.values.emplace(object, value);
  }
  out.complete = out.values.size() == cardinality(statistic.collection, level, caps);
  return out;
}

Distribution Distribution::from_values(int level, std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  Distribution d;
  d.level = level;
  for (std::int64_t v : values) {
    if (d.counts.empty() || d.counts.back().first != v) {
      d.counts.emplace_back(v, 1);
    } else {
      ++d.counts.back().second;
    }
  }
  return d;
}

std::int64_t Distribution::total() const noexcept {
  std::int64_t total = 0;
  for (const auto& [value, multiplicity] : counts) total += multiplicity;
  return total;
}

Distribution distribution(const Statistic& statistic, int level, const EnumerationCaps& caps) {
  auto table = values_on_level(statistic, level, caps);
  if (!table.complete) {
    throw IncompleteStatistic(statistic.id.str() + " is not known on all of level " +
                              std::to_string(level));
  }
  std::vector<std::int64_t> values;
  values.reserve(table.values.size());
  for (const auto& [object, value] : table.values) values.push_back(value);
  return Distribution::from_values(level, std::move(values));
}

Registry::Registry(std::vector<Statistic> statistics) {
  for (auto& s : statistics) add(std::move(s));
}

void Registry::add(Statistic statistic) {
  validate_statistic(statistic);
  auto it = std::lower_bound(statistics_.begin(), statistics_.end(), statistic.id,
                             [](const Statistic& s, const StatisticId& id) { return s.id < id; });
  if (it != statistics_.end() && it->id == statistic.id) {
    throw DuplicateIdentifier("duplicate statistic identifier " + statistic.id.str());
  }
  statistics_.insert(it, std::move(statistic));
}

const Statistic* Registry::find(const StatisticId& id) const noexcept {
  auto it = std::lower_bound(statistics_.begin(), statistics_.end(), id,
                             [](const Statistic& s, const StatisticId& key) { return s.id < key; });
  return it != statistics_.end() && it->id == id ? &*it : nullptr;
}

const Statistic& Registry::lookup(const StatisticId& id) const {
  if (const Statistic* s = find(id)) return *s;
  throw UnknownStatistic("unknown statistic " + id.str());
}

std::vector<const Statistic*> Registry::on(CollectionId collection) const {
  std::vector<const Statistic*> out;
  for (const auto& s : statistics_) {
    if (s.collection == collection) out.push_back(&s);
  }
  return out;
}

}  // namespace statfinder
