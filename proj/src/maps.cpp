#include "statfinder/maps.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <unordered_set>

#include "statfinder/error.hpp"

namespace statfinder {

namespace mapfns {

CombObject inverse(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::vector<int> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i] - 1] = static_cast<int>(i + 1);
  return make_permutation(q);
}

CombObject reverse(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::reverse(p.begin(), p.end());
  return make_permutation(p);
}

CombObject complement(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  const int n = static_cast<int>(p.size());
  for (int& letter : p) letter = n + 1 - letter;
  return make_permutation(p);
}

// Letter-by-letter construction: with w = image of the prefix and next
// letter a, cut w after every letter on the same side of a as w's last
// letter, rotate each block's last letter to its front, then append a.
CombObject foata(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::vector<int> word;
  word.reserve(p.size());
  std::vector<int> rotated;
  rotated.reserve(p.size());
  for (int a : p) {
    if (!word.empty()) {
      const bool below = word.back() < a;
      rotated.clear();
      std::size_t block_start = 0;
      for (std::size_t i = 0; i < word.size(); ++i) {
        if ((word[i] < a) == below) {
          rotated.push_back(word[i]);
          rotated.insert(rotated.end(), word.begin() + static_cast<std::ptrdiff_t>(block_start),
                         word.begin() + static_cast<std::ptrdiff_t>(i));
          block_start = i + 1;
        }
      }
      word.swap(rotated);
    }
    word.push_back(a);
  }
  return make_permutation(word);
}

// Lengths of the maximal ascending runs.
CombObject descent_composition(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  std::vector<int> parts;
  int run = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ++run;
    if (i + 1 == p.size() || p[i] > p[i + 1]) {
      parts.push_back(run);
      run = 0;
    }
  }
  return make_composition(parts);
}

CombObject bst_shape(const CombObject& permutation) {
  auto p = permutation_of(permutation);
  BinaryTree tree;
  std::vector<int> key;
  for (int letter : p) {
    const int self = tree.size();
    tree.nodes.emplace_back();
    key.push_back(letter);
    if (self == 0) continue;
    int node = 0;
    for (;;) {
      int& child = letter < key[node] ? tree.nodes[node].left : tree.nodes[node].right;
      if (child < 0) {
        child = self;
        break;
      }
      node = child;
    }
  }
  return make_binary_tree(tree);
}

namespace {
void tree_word(const BinaryTree& tree, int node, std::vector<bool>& steps) {
  if (node < 0) return;
  steps.push_back(true);
  tree_word(tree, tree.nodes[node].left, steps);
  steps.push_back(false);
  tree_word(tree, tree.nodes[node].right, steps);
}
}  // namespace

CombObject tree_to_dyck(const CombObject& tree) {
  auto t = binary_tree_of(tree);
  std::vector<bool> steps;
  steps.reserve(2 * t.nodes.size());
  tree_word(t, t.empty() ? -1 : 0, steps);
  return make_dyck_path(steps);
}

CombObject conjugate(const CombObject& partition) {
  auto parts = parts_of(partition);
  std::vector<int> conj(parts.empty() ? 0 : parts.front(), 0);
  for (int part : parts) {
    for (int i = 0; i < part; ++i) ++conj[i];
  }
  return make_partition(std::move(conj));
}

CombObject reverse_composition(const CombObject& composition) {
  auto parts = parts_of(composition);
  std::reverse(parts.begin(), parts.end());
  return make_composition(parts);
}

CombObject sort_decreasing(const CombObject& composition) { return make_partition(parts_of(composition)); }

}  // namespace mapfns

namespace {

using C = CollectionId;

const std::array<CombMap, 10>& registry() {
  static const std::array<CombMap, 10> maps = {
      CombMap{MapId::parse("Mp00001"), "inverse", C::Permutations, C::Permutations, true, &mapfns::inverse},
      CombMap{MapId::parse("Mp00002"), "reverse", C::Permutations, C::Permutations, true, &mapfns::reverse},
      CombMap{MapId::parse("Mp00003"), "complement", C::Permutations, C::Permutations, true, &mapfns::complement},
      CombMap{MapId::parse("Mp00004"), "foata", C::Permutations, C::Permutations, true, &mapfns::foata},
      CombMap{MapId::parse("Mp00005"), "descent_composition", C::Permutations, C::Compositions, false,
              &mapfns::descent_composition},
      CombMap{MapId::parse("Mp00006"), "bst_shape", C::Permutations, C::BinaryTrees, false, &mapfns::bst_shape},
      CombMap{MapId::parse("Mp00007"), "tree_to_dyck", C::BinaryTrees, C::DyckPaths, true, &mapfns::tree_to_dyck},
      CombMap{MapId::parse("Mp00008"), "conjugate", C::IntegerPartitions, C::IntegerPartitions, true,
              &mapfns::conjugate},
      CombMap{MapId::parse("Mp00009"), "reverse", C::Compositions, C::Compositions, true,
              &mapfns::reverse_composition},
      CombMap{MapId::parse("Mp00010"), "sort_decreasing", C::Compositions, C::IntegerPartitions, false,
              &mapfns::sort_decreasing},
  };
  return maps;
}

void require_domain(const CombMap& map, const CombObject& object) {
  if (object.collection != map.domain) {
    throw DomainMismatch(map.id.str() + " (" + std::string(map.name) + ") expects " +
                         std::string(collection_name(map.domain)) + ", got " +
                         std::string(collection_name(object.collection)));
  }
}

// Images of every probe object; equal signatures mean equal action on the probe.
std::vector<std::string> probe_signature(const MapPath& path, std::span<const CombObject> probe) {
  std::vector<std::string> images;
  images.reserve(probe.size() + 1);
  images.emplace_back(collection_name(path.target()));
  for (const auto& x : probe) images.push_back(compose(path, x).encoding);
  return images;
}

}  // namespace

std::span<const CombMap> seed_maps() { return registry(); }

const CombMap& find_map(const MapId& id) {
  for (const auto& m : registry()) {
    if (m.id == id) return m;
  }
  throw UnknownMap("unknown map " + id.str());
}

const CombMap& find_map(std::string_view id) { return find_map(MapId::parse(id)); }

CombObject apply(const CombMap& map, const CombObject& object) {
  require_domain(map, object);
  return map.fn(object);
}

CombObject foata(const CombObject& permutation) { return apply(find_map("Mp00004"), permutation); }

MapPath::MapPath(CollectionId source, std::vector<const CombMap*> steps)
    : source_(source), target_(source) {
  steps_.reserve(steps.size());
  for (const CombMap* step : steps) *this = then(*step);
}

MapPath MapPath::then(const CombMap& map) const {
  if (map.domain != target_) {
    throw DomainMismatch("cannot follow a path ending in " + std::string(collection_name(target_)) +
                         " with " + map.id.str() + " on " + std::string(collection_name(map.domain)));
  }
  MapPath next = *this;
  next.steps_.push_back(&map);
  next.target_ = map.codomain;
  return next;
}

std::vector<MapId> MapPath::ids() const {
  std::vector<MapId> out;
  out.reserve(steps_.size());
  for (const CombMap* step : steps_) out.push_back(step->id);
  return out;
}

std::string MapPath::describe() const {
  if (steps_.empty()) return "identity";
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (i) out += " then ";
    out += steps_[i]->id.str();
  }
  return out;
}

bool MapPath::operator==(const MapPath& other) const { return (*this <=> other) == 0; }

std::strong_ordering MapPath::operator<=>(const MapPath& other) const {
  if (auto c = source_ <=> other.source_; c != 0) return c;
  if (auto c = steps_.size() <=> other.steps_.size(); c != 0) return c;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (auto c = steps_[i]->id <=> other.steps_[i]->id; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

CombObject compose(const MapPath& path, const CombObject& object) {
  if (object.collection != path.source()) {
    throw DomainMismatch("path starts at " + std::string(collection_name(path.source())) + ", got " +
                         std::string(collection_name(object.collection)));
  }
  CombObject current = object;
  for (const CombMap* step : path.steps()) current = apply(*step, current);
  return current;
}

std::vector<MapPath> enumerate_paths(CollectionId source, int max_depth, const EnumerationCaps& caps,
                                     int depth_ceiling) {
  if (max_depth < 0 || max_depth > depth_ceiling) {
    throw DepthExceeded("depth " + std::to_string(max_depth) + " outside 0.." + std::to_string(depth_ceiling));
  }
  std::vector<CombObject> probe;
  for (int level = 0; level <= std::min(kPathProbeLevel, caps.cap(source)); ++level) {
    auto objects = enumerate(source, level, caps);
    probe.insert(probe.end(), objects.begin(), objects.end());
  }

  std::set<std::vector<std::string>> seen;
  std::vector<MapPath> kept{MapPath(source)};
  seen.insert(probe_signature(kept.front(), probe));
  std::size_t frontier_begin = 0;
  for (int depth = 1; depth <= max_depth; ++depth) {
    const std::size_t frontier_end = kept.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& map : registry()) {
        if (map.domain != kept[i].target()) continue;
        MapPath candidate = kept[i].then(map);
        if (seen.insert(probe_signature(candidate, probe)).second) kept.push_back(std::move(candidate));
      }
    }
    frontier_begin = frontier_end;
  }
  return kept;
}

std::vector<MapPath> enumerate_all_paths(CollectionId source, int max_depth) {
  std::vector<MapPath> all{MapPath(source)};
  std::size_t frontier_begin = 0;
  for (int depth = 1; depth <= max_depth; ++depth) {
    const std::size_t frontier_end = all.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& map : registry()) {
        if (map.domain == all[i].target()) all.push_back(all[i].then(map));
      }
    }
    frontier_begin = frontier_end;
  }
  return all;
}

bool check_bijective(const CombMap& map, int level, const EnumerationCaps& caps) {
  std::unordered_set<std::string> images;
  for (const auto& x : enumerate(map.domain, level, caps)) {
    if (!images.insert(apply(map, x).encoding).second) return false;
  }
  return true;
}

}  // namespace statfinder
