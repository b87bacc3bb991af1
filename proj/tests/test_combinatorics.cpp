#include <doctest.h>

#include "extconvex/combinatorics.hpp"

using namespace extconvex;

TEST_SUITE_BEGIN("combinatorics");

TEST_CASE("binomial basics") {
  CHECK(binomial(6, 2) == 15);
  CHECK(binomial(6, 0) == 1);
  CHECK(binomial(4, 5) == 0);
  CHECK(binomial(9, 4) == 126);
}

TEST_CASE("rank and unrank are inverse, lex order") {
  for (int n = 1; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto& all = multi_indices(n, k);
      REQUIRE(all.size() == binomial(n, k));
      for (std::size_t r = 0; r < all.size(); ++r) {
        CHECK(multi_index_rank(n, all[r]) == static_cast<int>(r));
        CHECK(multi_index_at(n, k, static_cast<int>(r)) == all[r]);
        if (r + 1 < all.size()) CHECK(all[r] < all[r + 1]);  // lexicographic
      }
    }
}

TEST_CASE("merge sign counts transpositions") {
  MultiIndex merged;
  CHECK(merge_sign({1}, {2}, &merged) == 1);
  CHECK(merged == MultiIndex{1, 2});
  CHECK(merge_sign({2}, {1}, &merged) == -1);
  CHECK(merged == MultiIndex{1, 2});
  CHECK(merge_sign({1, 3}, {2}, &merged) == -1);  // 2 jumps over 3
  CHECK(merge_sign({1, 2}, {2, 3}) == 0);         // overlap
  CHECK(merge_sign({}, {1, 2}) == 1);
  // pair swap of blocks: e^{34} before e^{12} needs 4 transpositions
  CHECK(merge_sign({3, 4}, {1, 2}) == 1);
  CHECK(merge_sign({2, 3}, {1, 4}) == 1);
}

TEST_CASE("complement") {
  CHECK(complement({1, 3}, 4) == MultiIndex{2, 4});
  CHECK(complement({}, 3) == MultiIndex{1, 2, 3});
  CHECK(complement({1, 2, 3}, 3) == MultiIndex{});
}

TEST_SUITE_END();
