#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statfinder/ids.hpp"
#include "statfinder/objects.hpp"

namespace statfinder {

using RuleFn = std::int64_t (*)(const CombObject&);

// A built-in evaluation procedure. Statistics pick one up by identifier
// when the registry is loaded.
struct Rule {
  std::string_view name;
  CollectionId collection;
  RuleFn fn;
};

std::span<const Rule> builtin_rules() noexcept;
const Rule* find_rule(std::string_view name) noexcept;

// The rule bound to a statistic identifier, or nullptr for values-only ids.
const Rule* rule_for(const StatisticId& id) noexcept;

namespace rules {
std::int64_t major_index(const CombObject& permutation);
std::int64_t inversions(const CombObject& permutation);
std::int64_t descents(const CombObject& permutation);
std::int64_t fixed_points(const CombObject& permutation);
std::int64_t exceedances(const CombObject& permutation);
std::int64_t area(const CombObject& dyck_path);
std::int64_t peaks(const CombObject& dyck_path);
std::int64_t returns(const CombObject& dyck_path);
std::int64_t tree_height(const CombObject& tree);
std::int64_t partition_length(const CombObject& partition);
std::int64_t largest_part(const CombObject& partition);
std::int64_t composition_length(const CombObject& composition);
}  // namespace rules

// st: S -> Z given by a (possibly partial) value table and/or a rule.
struct Statistic {
  StatisticId id;
  CollectionId collection{};
  std::string name;
  std::string description;
  std::vector<std::string> references;
  std::map<CombObject, std::int64_t> values;
  std::optional<std::string> rule;

  const Rule* rule_def() const noexcept { return rule ? find_rule(*rule) : nullptr; }

  bool operator==(const Statistic&) const = default;
};

// Checks the structural invariants: keys in the right collection, at least
// one of values/rule, rule collection matches, stored values agree with the
// rule. Throws InvalidStatistic or RuleValueConflict.
void validate_statistic(const Statistic& statistic);

// Stored value first, then the rule. Throws NotComputable when neither is
// available and DomainMismatch for objects of another collection.
std::int64_t evaluate(const Statistic& statistic, const CombObject& object);
std::optional<std::int64_t> try_evaluate(const Statistic& statistic, const CombObject& object);

struct LevelValues {
  int level = 0;
  std::map<CombObject, std::int64_t> values;
  bool complete = false;
};

LevelValues values_on_level(const Statistic& statistic, int level, const EnumerationCaps& caps = {});

// Value multiset of one level as (value, multiplicity) pairs with strictly
// increasing values: the coefficient list of sum_x q^st(x).
struct Distribution {
  int level = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> counts;

  static Distribution from_values(int level, std::vector<std::int64_t> values);
  std::int64_t total() const noexcept;

  bool operator==(const Distribution&) const = default;
};

// Throws IncompleteStatistic when the level is not fully computable.
Distribution distribution(const Statistic& statistic, int level, const EnumerationCaps& caps = {});

// Immutable-after-load set of statistics, kept sorted by identifier.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<Statistic> statistics);

  // Validates and inserts. Throws DuplicateIdentifier on a clash.
  void add(Statistic statistic);

  const Statistic& lookup(const StatisticId& id) const;
  const Statistic* find(const StatisticId& id) const noexcept;

  std::span<const Statistic> all() const noexcept { return statistics_; }
  std::vector<const Statistic*> on(CollectionId collection) const;
  bool empty() const noexcept { return statistics_.empty(); }
  std::size_t size() const noexcept { return statistics_.size(); }

 private:
  std::vector<Statistic> statistics_;
};

}  // namespace statfinder
