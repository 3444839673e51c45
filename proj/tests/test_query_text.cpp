#include <gtest/gtest.h>

#include "statfinder/error.hpp"
#include "statfinder/query_text.hpp"

namespace statfinder {
namespace {

using C = CollectionId;

TEST(QueryTextTest, Pairs) {
  const Query q = parse_query_text(C::Permutations, "[1,2] => 0\n\n[2,1]=>1\r\n[1,3,2] => +2\n");
  ASSERT_TRUE(q.assigned);
  EXPECT_FALSE(q.groups);
  EXPECT_EQ(q.assigned->size(), 3u);
  EXPECT_EQ(q.assigned->at(parse(C::Permutations, "[1,3,2]")), 2);
}

TEST(QueryTextTest, Groups) {
  const Query q = parse_query_text(C::Permutations, "0\n0, 1\n-1,2,2\n");
  ASSERT_TRUE(q.groups);
  EXPECT_EQ(*q.groups, (ValueGroups{{0}, {0, 1}, {-1, 2, 2}}));
}

TEST(QueryTextTest, DyckPathsUseTheLastArrow) {
  const Query q = parse_query_text(C::DyckPaths, "1100 => 1\n => 0\n");
  EXPECT_EQ(q.assigned->at(parse(C::DyckPaths, "")), 0);
  EXPECT_EQ(q.assigned->at(parse(C::DyckPaths, "1100")), 1);
}

TEST(QueryTextTest, ErrorsCarryLineNumbers) {
  auto message = [](std::string_view text) -> std::string {
    try {
      parse_query_text(C::Permutations, text);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_EQ(message("[1,2] => 0\n[1,1] => 2\n").rfind("line 2: ", 0), 0u);
  EXPECT_EQ(message("[1,2] => 0\n\n0,1\n").rfind("line 3: ", 0), 0u);
  EXPECT_EQ(message("[1,2] => x\n").rfind("line 1: ", 0), 0u);
  EXPECT_EQ(message("0,,1\n").rfind("line 1: ", 0), 0u);
  EXPECT_THROW(parse_query_text(C::Permutations, "[1,1] => 2\n"), InvalidObject);
  EXPECT_THROW(parse_query_text(C::Permutations, "[1, 2] => 2\n"), NonCanonicalError);
  EXPECT_THROW(parse_query_text(C::Permutations, "[1,2] => 0\n[1,2] => 1\n"), InvalidQuery);
  EXPECT_THROW(parse_query_text(C::Permutations, "\n  \n"), EmptyQuery);
}

TEST(QueryTextTest, RoundTrip) {
  const char* pairs = "[1,2] => 0\n[2,1] => 1\n[1,3,2] => 2\n";
  const Query q = parse_query_text(C::Permutations, pairs);
  EXPECT_EQ(parse_query_text(C::Permutations, format_query_text(q)).assigned, q.assigned);
  const Query g = parse_query_text(C::Permutations, "0\n0,1\n");
  EXPECT_EQ(format_query_text(g), "0\n0,1\n");
}

}  // namespace
}  // namespace statfinder
