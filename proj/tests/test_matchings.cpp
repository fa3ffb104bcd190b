#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "pdsp/matchings.hpp"

using namespace pdsp;

namespace {

// Catalan numbers for the single-position-per-block case.
long long catalan(int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::set<Matching> as_set(const std::vector<Matching>& ms) {
  return {ms.begin(), ms.end()};
}

} // namespace

TEST_CASE("predicates") {
  CHECK(is_noncrossing({{0, 1}, {2, 3}}));
  CHECK(is_noncrossing({{0, 3}, {1, 2}}));
  CHECK(!is_noncrossing({{0, 2}, {1, 3}}));
  CHECK(is_jumping({{0, 2}, {1, 3}}, {0, 0, 1, 1}));
  CHECK(!is_jumping({{0, 1}, {2, 3}}, {0, 0, 1, 1}));
}

TEST_CASE("singleton blocks give Catalan counts") {
  // p positions, each its own block: jumping is vacuous.
  for (int pairs = 1; pairs <= 5; ++pairs) {
    std::vector<int> blocks(2 * pairs);
    for (int j = 0; j < 2 * pairs; ++j) blocks[j] = j;
    auto ms = noncrossing_jumping_matchings(blocks);
    CHECK((long long)ms.size() == catalan(pairs));
    for (const auto& m : ms) {
      CHECK(is_noncrossing(m));
      CHECK((int)m.size() == pairs);
    }
  }
  // Frozen spot checks.
  CHECK(noncrossing_jumping_matchings({0, 1, 2, 3}).size() == 2);
  CHECK(noncrossing_jumping_matchings({0, 1, 2, 3, 4, 5}).size() == 5);
}

TEST_CASE("two blocks force a single ladder") {
  // All pairs must jump between the blocks and stay non-crossing: only the
  // nested ladder 0-(2n-1), 1-(2n-2), ... survives.
  for (int half = 1; half <= 4; ++half) {
    std::vector<int> blocks(2 * half);
    for (int j = 0; j < half; ++j) blocks[j] = 0;
    for (int j = half; j < 2 * half; ++j) blocks[j] = 1;
    auto ms = noncrossing_jumping_matchings(blocks);
    REQUIRE(ms.size() == 1);
    for (int j = 0; j < half; ++j) {
      CHECK(ms[0][j].first == j);
      CHECK(ms[0][j].second == 2 * half - 1 - j);
    }
  }
}

TEST_CASE("odd position counts have no perfect matching") {
  CHECK(noncrossing_jumping_matchings({0, 1, 2}).empty());
  CHECK(noncrossing_jumping_matchings({0}).empty());
  CHECK(noncrossing_jumping_matchings({}).size() == 1); // the empty matching
}

TEST_CASE("matches the filtering oracle") {
  std::mt19937 rng(11);
  for (int round = 0; round < 60; ++round) {
    int p = int(rng() % 11);
    std::vector<int> blocks(p);
    int b = 0;
    for (int j = 0; j < p; ++j) {
      blocks[j] = b;
      if (rng() % 3 == 0) ++b;
    }
    auto fast = noncrossing_jumping_matchings(blocks);
    auto slow = noncrossing_jumping_matchings_brute(blocks);
    CHECK(as_set(fast) == as_set(slow));
    CHECK(fast.size() == slow.size()); // also no duplicates
    for (const auto& m : fast) {
      CHECK(is_noncrossing(m));
      CHECK(is_jumping(m, blocks));
    }
  }
}

TEST_CASE("five block mixed shape") {
  // Blocks of sizes 2,1,2,2,1: eight positions.
  std::vector<int> blocks = {0, 0, 1, 2, 2, 3, 3, 4};
  auto fast = noncrossing_jumping_matchings(blocks);
  auto slow = noncrossing_jumping_matchings_brute(blocks);
  CHECK(as_set(fast) == as_set(slow));
  for (const auto& m : fast) {
    CHECK(is_noncrossing(m));
    CHECK(is_jumping(m, blocks));
  }
}
