#include "statfinder/objects.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>

#include "statfinder/error.hpp"

namespace statfinder {

namespace {

constexpr std::array<std::string_view, kAllCollections.size()> kCollectionNames = {
    "Permutations", "DyckPaths", "BinaryTrees", "IntegerPartitions", "Compositions"};

constexpr int kMaxTreeNesting = 4096;

std::string join_list(std::span<const int> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  out += ']';
  return out;
}

// Lenient reader for "[a,b,...]": tolerates whitespace, signs and leading
// zeros so that the caller can report the canonical spelling.
class ListReader {
 public:
  ListReader(CollectionId c, std::string_view text) : collection_(c), text_(text) {}

  std::vector<long long> read() {
    std::vector<long long> out;
    skip_ws();
    expect('[');
    skip_ws();
    if (peek() == ']') {
      ++pos_;
    } else {
      for (;;) {
        out.push_back(read_int());
        skip_ws();
        char c = next();
        if (c == ']') break;
        if (c != ',') fail("expected ',' or ']'");
        skip_ws();
      }
    }
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return out;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char next() {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    return text_[pos_++];
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (next() != c) fail(std::string("expected '") + c + "'");
  }
  long long read_int() {
    bool negative = false;
    if (peek() == '-' || peek() == '+') negative = next() == '-';
    std::size_t start = pos_;
    long long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (next() - '0');
      if (value > 1'000'000'000) fail("number too large");
    }
    if (pos_ == start) fail("expected a number");
    return negative ? -value : value;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw SyntaxError(std::string(collection_name(collection_)) + " \"" + std::string(text_) +
                      "\": " + why + " at offset " + std::to_string(pos_));
  }

  CollectionId collection_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void invalid(CollectionId c, std::string_view text, const std::string& why) {
  throw ValidityError(std::string(collection_name(c)) + " \"" + std::string(text) + "\": " + why);
}

CombObject require_canonical(CombObject object, std::string_view text) {
  if (object.encoding != text) {
    throw NonCanonicalError(std::string(collection_name(object.collection)) + " \"" +
                                std::string(text) + "\" is not canonical; write \"" +
                                object.encoding + "\"",
                            object.encoding);
  }
  return object;
}

std::vector<int> positive_parts(CollectionId c, std::string_view text) {
  auto raw = ListReader(c, text).read();
  std::vector<int> parts;
  parts.reserve(raw.size());
  for (long long v : raw) {
    if (v <= 0) invalid(c, text, "parts must be positive");
    parts.push_back(static_cast<int>(v));
  }
  return parts;
}

CombObject parse_permutation(std::string_view text) {
  auto raw = ListReader(CollectionId::Permutations, text).read();
  const auto n = static_cast<long long>(raw.size());
  std::vector<bool> seen(raw.size() + 1, false);
  std::vector<int> one_line;
  one_line.reserve(raw.size());
  for (long long v : raw) {
    if (v < 1 || v > n) invalid(CollectionId::Permutations, text, "letter out of range 1.." + std::to_string(n));
    if (seen[v]) invalid(CollectionId::Permutations, text, "repeated letter " + std::to_string(v));
    seen[v] = true;
    one_line.push_back(static_cast<int>(v));
  }
  return require_canonical(make_permutation(one_line), text);
}

CombObject parse_dyck(std::string_view text) {
  std::vector<bool> steps;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '1' || c == 'U' || c == 'u') {
      steps.push_back(true);
    } else if (c == '0' || c == 'D' || c == 'd') {
      steps.push_back(false);
    } else {
      throw SyntaxError("DyckPaths \"" + std::string(text) + "\": unexpected character '" +
                        std::string(1, c) + "'");
    }
  }
  int height = 0;
  for (bool up : steps) {
    height += up ? 1 : -1;
    if (height < 0) invalid(CollectionId::DyckPaths, text, "prefix goes below zero");
  }
  if (height != 0) invalid(CollectionId::DyckPaths, text, "unbalanced word");
  return require_canonical(make_dyck_path(steps), text);
}

class TreeReader {
 public:
  explicit TreeReader(std::string_view text) : text_(text) {}

  BinaryTree read() {
    BinaryTree tree;
    skip_ws();
    node(tree, 0);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return tree;
  }

 private:
  // Returns the index of the parsed node, or -1 for a leaf.
  int node(BinaryTree& tree, int depth) {
    if (depth > kMaxTreeNesting) fail("nesting too deep");
    char c = next();
    if (c == '.') return -1;
    if (c != '[') fail("expected '.' or '['");
    int self = tree.size();
    tree.nodes.emplace_back();
    skip_ws();
    int left = node(tree, depth + 1);
    skip_ws();
    if (next() != ',') fail("expected ','");
    skip_ws();
    int right = node(tree, depth + 1);
    skip_ws();
    if (next() != ']') fail("expected ']'");
    tree.nodes[self].left = left;
    tree.nodes[self].right = right;
    return self;
  }
  char next() {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    return text_[pos_++];
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw SyntaxError("BinaryTrees \"" + std::string(text_) + "\": " + why + " at offset " +
                      std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void write_tree(const BinaryTree& tree, int node, std::string& out) {
  if (node < 0) {
    out += '.';
    return;
  }
  out += '[';
  write_tree(tree, tree.nodes[node].left, out);
  out += ',';
  write_tree(tree, tree.nodes[node].right, out);
  out += ']';
}

std::vector<CombObject> wrap_sorted(CollectionId c, int level, std::vector<std::string> encodings) {
  std::sort(encodings.begin(), encodings.end());
  std::vector<CombObject> out;
  out.reserve(encodings.size());
  for (auto& e : encodings) out.push_back(CombObject{c, level, std::move(e)});
  return out;
}

std::vector<std::string> permutation_encodings(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::string> out;
  do {
    out.push_back(join_list(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::string> dyck_encodings(int n) {
  std::vector<std::string> out;
  std::string word;
  std::function<void(int, int)> extend = [&](int ups, int downs) {
    if (ups == n && downs == n) {
      out.push_back(word);
      return;
    }
    if (downs < ups) {
      word.push_back('0');
      extend(ups, downs + 1);
      word.pop_back();
    }
    if (ups < n) {
      word.push_back('1');
      extend(ups + 1, downs);
      word.pop_back();
    }
  };
  extend(0, 0);
  return out;
}

std::vector<std::string> tree_encodings(int n) {
  std::vector<std::vector<std::string>> by_size(n + 1);
  by_size[0] = {"."};
  for (int size = 1; size <= n; ++size) {
    for (int left = 0; left < size; ++left) {
      for (const auto& l : by_size[left]) {
        for (const auto& r : by_size[size - 1 - left]) by_size[size].push_back("[" + l + "," + r + "]");
      }
    }
  }
  return std::move(by_size[n]);
}

std::vector<std::string> partition_encodings(int n) {
  std::vector<std::string> out;
  std::vector<int> parts;
  std::function<void(int, int)> extend = [&](int remaining, int largest) {
    if (remaining == 0) {
      out.push_back(join_list(parts));
      return;
    }
    for (int part = std::min(remaining, largest); part >= 1; --part) {
      parts.push_back(part);
      extend(remaining - part, part);
      parts.pop_back();
    }
  };
  extend(n, n);
  return out;
}

std::vector<std::string> composition_encodings(int n) {
  std::vector<std::string> out;
  std::vector<int> parts;
  std::function<void(int)> extend = [&](int remaining) {
    if (remaining == 0) {
      out.push_back(join_list(parts));
      return;
    }
    for (int part = 1; part <= remaining; ++part) {
      parts.push_back(part);
      extend(remaining - part);
      parts.pop_back();
    }
  };
  extend(n);
  return out;
}

std::uint64_t catalan(int n) {
  std::uint64_t c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

std::uint64_t partition_count(int n) {
  std::vector<std::uint64_t> ways(n + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= n; ++part) {
    for (int total = part; total <= n; ++total) ways[total] += ways[total - part];
  }
  return ways[n];
}

}  // namespace

std::string_view collection_name(CollectionId c) noexcept { return kCollectionNames[index_of(c)]; }

CollectionId parse_collection(std::string_view name) {
  for (CollectionId c : kAllCollections) {
    if (collection_name(c) == name) return c;
  }
  throw UnknownCollection("unknown collection \"" + std::string(name) + "\"");
}

void EnumerationCaps::check(CollectionId c, int level) const {
  if (level < 0) throw CapExceeded("negative level " + std::to_string(level));
  if (level > cap(c)) {
    throw CapExceeded(std::string(collection_name(c)) + " level " + std::to_string(level) +
                      " exceeds the enumeration cap " + std::to_string(cap(c)));
  }
}

CombObject parse(CollectionId collection, std::string_view text) {
  switch (collection) {
    case CollectionId::Permutations:
      return parse_permutation(text);
    case CollectionId::DyckPaths:
      return parse_dyck(text);
    case CollectionId::BinaryTrees:
      return require_canonical(make_binary_tree(TreeReader(text).read()), text);
    case CollectionId::IntegerPartitions:
      return require_canonical(make_partition(positive_parts(collection, text)), text);
    case CollectionId::Compositions:
      return require_canonical(make_composition(positive_parts(collection, text)), text);
  }
  throw UnknownCollection("unknown collection");
}

std::vector<CombObject> enumerate(CollectionId collection, int level, const EnumerationCaps& caps) {
  caps.check(collection, level);
  switch (collection) {
    case CollectionId::Permutations:
      return wrap_sorted(collection, level, permutation_encodings(level));
    case CollectionId::DyckPaths:
      return wrap_sorted(collection, level, dyck_encodings(level));
    case CollectionId::BinaryTrees:
      return wrap_sorted(collection, level, tree_encodings(level));
    case CollectionId::IntegerPartitions:
      return wrap_sorted(collection, level, partition_encodings(level));
    case CollectionId::Compositions:
      return wrap_sorted(collection, level, composition_encodings(level));
  }
  return {};
}

std::uint64_t cardinality(CollectionId collection, int level, const EnumerationCaps& caps) {
  caps.check(collection, level);
  switch (collection) {
    case CollectionId::Permutations: {
      std::uint64_t f = 1;
      for (int k = 2; k <= level; ++k) f *= static_cast<std::uint64_t>(k);
      return f;
    }
    case CollectionId::DyckPaths:
    case CollectionId::BinaryTrees:
      return catalan(level);
    case CollectionId::IntegerPartitions:
      return partition_count(level);
    case CollectionId::Compositions:
      return level == 0 ? 1 : std::uint64_t{1} << (level - 1);
  }
  return 0;
}

std::vector<int> permutation_of(const CombObject& object) { return parts_of(object); }

CombObject make_permutation(std::span<const int> one_line) {
  return CombObject{CollectionId::Permutations, static_cast<int>(one_line.size()), join_list(one_line)};
}

std::vector<bool> dyck_of(const CombObject& object) {
  std::vector<bool> steps;
  steps.reserve(object.encoding.size());
  for (char c : object.encoding) steps.push_back(c == '1');
  return steps;
}

CombObject make_dyck_path(const std::vector<bool>& steps) {
  std::string word;
  word.reserve(steps.size());
  for (bool up : steps) word.push_back(up ? '1' : '0');
  return CombObject{CollectionId::DyckPaths, static_cast<int>(steps.size() / 2), std::move(word)};
}

std::vector<int> parts_of(const CombObject& object) {
  std::vector<int> out;
  int current = 0;
  bool in_number = false;
  for (char c : object.encoding) {
    if (c >= '0' && c <= '9') {
      current = current * 10 + (c - '0');
      in_number = true;
    } else if (in_number) {
      out.push_back(current);
      current = 0;
      in_number = false;
    }
  }
  return out;
}

CombObject make_partition(std::vector<int> parts) {
  std::sort(parts.begin(), parts.end(), std::greater<>());
  int weight = std::accumulate(parts.begin(), parts.end(), 0);
  return CombObject{CollectionId::IntegerPartitions, weight, join_list(parts)};
}

CombObject make_composition(std::span<const int> parts) {
  int weight = std::accumulate(parts.begin(), parts.end(), 0);
  return CombObject{CollectionId::Compositions, weight, join_list(parts)};
}

BinaryTree binary_tree_of(const CombObject& object) { return TreeReader(object.encoding).read(); }

CombObject make_binary_tree(const BinaryTree& tree) {
  std::string out;
  out.reserve(4 * tree.nodes.size() + 1);
  write_tree(tree, tree.empty() ? -1 : 0, out);
  return CombObject{CollectionId::BinaryTrees, tree.size(), std::move(out)};
}

}  // namespace statfinder
