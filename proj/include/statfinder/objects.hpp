#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace statfinder {

enum class CollectionId : std::uint8_t {
  Permutations,
  DyckPaths,
  BinaryTrees,
  IntegerPartitions,
  Compositions,
};

inline constexpr std::array<CollectionId, 5> kAllCollections = {
    CollectionId::Permutations, CollectionId::DyckPaths, CollectionId::BinaryTrees,
    CollectionId::IntegerPartitions, CollectionId::Compositions};

std::string_view collection_name(CollectionId c) noexcept;

// Throws UnknownCollection for anything outside the closed set.
CollectionId parse_collection(std::string_view name);

constexpr std::size_t index_of(CollectionId c) noexcept { return static_cast<std::size_t>(c); }

// Largest enumerable level per collection. Defaults keep a full-level scan
// well under a second; the config file may override them.
struct EnumerationCaps {
  std::array<int, kAllCollections.size()> max_level{8, 10, 10, 20, 20};

  int cap(CollectionId c) const noexcept { return max_level[index_of(c)]; }
  void set(CollectionId c, int level) noexcept { max_level[index_of(c)] = level; }

  // Throws CapExceeded naming the cap when `level` is out of range.
  void check(CollectionId c, int level) const;

  bool operator==(const EnumerationCaps&) const = default;
};

// An element of a collection held by its canonical text encoding. Two objects
// are equal iff collection and encoding agree; the level is derived.
struct CombObject {
  CollectionId collection{};
  int level = 0;
  std::string encoding;

  // Canonical order: collection, then level, then encoding bytes.
  auto operator<=>(const CombObject&) const = default;
  bool operator==(const CombObject&) const = default;
};

// Accepts exactly the canonical spelling. Whitespace, leading zeros, letter
// forms of Dyck words ("UD") and unsorted partitions are recognised as the
// same object but rejected with NonCanonicalError carrying the canonical form.
CombObject parse(CollectionId collection, std::string_view text);

inline const std::string& format(const CombObject& object) noexcept { return object.encoding; }

// Every object of the level exactly once, sorted by encoding bytes.
std::vector<CombObject> enumerate(CollectionId collection, int level,
                                  const EnumerationCaps& caps = {});

std::uint64_t cardinality(CollectionId collection, int level, const EnumerationCaps& caps = {});

// ---------------------------------------------------------------------------
// Native views used by statistics and maps. The `*_of` readers assume a
// canonical encoding and do not re-validate; the `make_*` builders produce
// canonical objects from native data.

std::vector<int> permutation_of(const CombObject& object);
CombObject make_permutation(std::span<const int> one_line);

// Dyck word as booleans, true = up step.
std::vector<bool> dyck_of(const CombObject& object);
CombObject make_dyck_path(const std::vector<bool>& steps);

std::vector<int> parts_of(const CombObject& object);
CombObject make_partition(std::vector<int> parts);  // sorts into decreasing order
CombObject make_composition(std::span<const int> parts);

// Array-backed binary tree. Node 0 is the root when the tree is non-empty;
// child index -1 stands for a leaf.
struct BinaryTree {
  struct Node {
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;

  bool empty() const noexcept { return nodes.empty(); }
  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

BinaryTree binary_tree_of(const CombObject& object);
CombObject make_binary_tree(const BinaryTree& tree);

}  // namespace statfinder
