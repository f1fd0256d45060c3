#include <doctest.h>

#include <set>

#include "ekrlab/bitset.hpp"
#include "ekrlab/rng.hpp"

using namespace ekrlab;

namespace {

std::set<std::size_t> to_set(const Bitset& b) {
  std::set<std::size_t> s;
  b.for_each([&](std::size_t i) { s.insert(i); });
  return s;
}

}  // namespace

TEST_CASE("bitset algebra agrees with a set reference") {
  SplitRng rng(1, 0);
  for (std::size_t size : {1u, 63u, 64u, 65u, 130u}) {
    for (int t = 0; t < 50; ++t) {
      Bitset a = rng.bernoulli_mask(size, 0.4);
      Bitset b = rng.bernoulli_mask(size, 0.4);
      auto sa = to_set(a), sb = to_set(b);

      std::set<std::size_t> su = sa, si, sd;
      su.insert(sb.begin(), sb.end());
      for (auto v : sa)
        if (sb.count(v)) si.insert(v);
      for (auto v : sa)
        if (!sb.count(v)) sd.insert(v);

      REQUIRE(to_set(a | b) == su);
      REQUIRE(to_set(a & b) == si);
      REQUIRE(to_set(a - b) == sd);
      REQUIRE(a.count_and(b) == si.size());
      REQUIRE(a.count_minus(b) == sd.size());
      REQUIRE(a.is_subset_of(b) == sd.empty());
      REQUIRE(a.intersects(b) == !si.empty());
      REQUIRE(to_set(~a).size() == size - sa.size());
      REQUIRE((a ^ b).count() == su.size() - si.size());
    }
  }
}

TEST_CASE("bitset edges") {
  Bitset b(70);
  CHECK(b.none());
  CHECK(b.find_first() == 70);
  b.set(69);
  CHECK(b.find_first() == 69);
  CHECK(b.count() == 1);
  CHECK(Bitset::full(70).count() == 70);
  CHECK((~Bitset::full(70)).none());
  Bitset other(71);
  CHECK_THROWS_AS(b |= other, std::invalid_argument);
  CHECK(b != other);
}
