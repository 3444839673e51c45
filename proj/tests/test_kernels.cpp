#include <gtest/gtest.h>

#include <thread>

#include "statfinder/engine.hpp"
#include "statfinder/kernels.hpp"
#include "statfinder/reference.hpp"
#include "test_support.hpp"

namespace statfinder {
namespace {

using C = CollectionId;
using testing::groups_query;
using testing::degree_query;
using testing::seed_registry;

TEST(KernelTest, ParallelDistributionMatchesSerial) {
  LevelTables tables;
  for (C source : kAllCollections) {
    for (const auto& path : enumerate_paths(source, 2)) {
      for (const Statistic* s : seed_registry().on(path.target())) {
        for (int n = 0; n <= std::min(6, tables.caps().cap(source)); ++n) {
          ASSERT_EQ(kernels::path_distribution(tables, *s, path, n),
                    kernels::path_distribution_serial(*s, path, n, tables.caps()))
              << s->id.str() << " " << path.describe() << " n=" << n;
        }
      }
    }
  }
}

TEST(KernelTest, PathImageAgreesWithCompose) {
  LevelTables tables;
  const MapPath path = MapPath(C::Permutations).then(find_map("Mp00006")).then(find_map("Mp00007"));
  const auto image = kernels::path_image(tables, path, 5);
  const auto& source = tables.level(C::Permutations, 5);
  const auto& target = tables.level(C::DyckPaths, 5);
  ASSERT_EQ(image.size(), source.objects.size());
  for (std::size_t i = 0; i < image.size(); ++i) EXPECT_EQ(target.objects[image[i]], compose(path, source.objects[i]));
}

TEST(KernelTest, IncompleteColumnYieldsNoDistribution) {
  LevelTables tables;
  const Statistic& partial = seed_registry().lookup(StatisticId::parse("St000012"));
  EXPECT_TRUE(kernels::path_distribution(tables, partial, MapPath(C::Permutations), 3));
  EXPECT_FALSE(kernels::path_distribution(tables, partial, MapPath(C::Permutations), 4));
  EXPECT_FALSE(tables.column(partial, 4).complete);
}

TEST(KernelTest, ConcurrentCacheAccessIsConsistent) {
  LevelTables tables;
  const Statistic& maj = seed_registry().lookup(StatisticId::parse("St000004"));
  const MapPath path = MapPath(C::Permutations).then(find_map("Mp00004"));
  std::vector<std::optional<Distribution>> seen(8);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t) {
    threads.emplace_back([&, t] { seen[t] = kernels::path_distribution(tables, maj, path, 7); });
  }
  for (auto& th : threads) th.join();
  const auto expected = kernels::path_distribution_serial(maj, path, 7, tables.caps());
  for (const auto& d : seen) EXPECT_EQ(d, expected);
}

// The engine (caches, index, OpenMP fan-out) must reproduce the serial
// reference search exactly, including searches_performed.
TEST(EngineTest, AgreesWithReferenceSearch) {
  EngineConfig config;
  config.caps.set(C::Permutations, 6);
  config.caps.set(C::IntegerPartitions, 10);
  config.caps.set(C::Compositions, 10);
  const Engine engine(seed_registry(), config);

  std::vector<Query> queries;
  for (int depth = 0; depth <= 2; ++depth) {
    for (SearchMode mode : {SearchMode::Exact, SearchMode::Distribution, SearchMode::Auto}) {
      queries.push_back(degree_query(depth, mode));
    }
    queries.push_back(groups_query({{0}, {0, 1}, {0, 1, 1, 2, 2, 3}}, depth));
    queries.push_back(groups_query({{1, 1, 2}}, depth));
    Query dyck;
    dyck.collection = C::DyckPaths;
    dyck.groups = ValueGroups{{0, 1}, {0, 1, 1, 2, 3}};
    dyck.options.max_depth = depth;
    queries.push_back(dyck);
    Query parts;
    parts.collection = C::IntegerPartitions;
    parts.assigned = AssignedValues{{parse(C::IntegerPartitions, "[3,1]"), 2}, {parse(C::IntegerPartitions, "[2,2]"), 2}};
    parts.options.max_depth = depth;
    queries.push_back(parts);
  }
  for (const auto& q : queries) {
    EXPECT_EQ(engine.search(q), reference::search(q, seed_registry(), config.caps))
        << collection_name(q.collection) << " mode " << to_string(q.options.mode) << " depth " << q.options.max_depth;
  }
}

TEST(EngineTest, ConcurrentSearchesAgree) {
  const Engine engine(seed_registry());
  const auto q = degree_query(2);
  const auto expected = engine.search(q);
  std::vector<SearchOutcome> got(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < got.size(); ++t) threads.emplace_back([&, t] { got[t] = engine.search(q); });
  for (auto& th : threads) th.join();
  for (const auto& g : got) EXPECT_EQ(g, expected);
}

TEST(EngineTest, LevelDistributionUsesIndexOrKernel) {
  const Engine engine(seed_registry());
  const Statistic& inv = seed_registry().lookup(StatisticId::parse("St000018"));
  const MapPath foata_path = MapPath(C::Permutations).then(find_map("Mp00004"));
  const Statistic& maj = seed_registry().lookup(StatisticId::parse("St000004"));
  EXPECT_EQ(engine.level_distribution(inv, foata_path, 6), distribution(maj, 6));
  EXPECT_EQ(engine.level_distribution(inv, MapPath(C::Permutations), 6), distribution(inv, 6));
}

}  // namespace
}  // namespace statfinder
