#include <doctest.h>

#include <algorithm>
#include <bit>

#include "ekrlab/layer_graph.hpp"
#include "ekrlab/rng.hpp"
#include "ekrlab/sperner.hpp"
#include "oracles.hpp"

using namespace ekrlab;

TEST_CASE("width of the full cube is the middle binomial") {
  for (int n = 2; n <= 8; ++n) {
    CubeSample full = CubeSample::draw(n, 1.0, 1);
    WidthResult w = width(full);
    CHECK(w.width == oracles::binom_slow(n, n / 2));
    CHECK(w.certified);
    CHECK(check_wwxx(full));
  }
}

TEST_CASE("width of a chain is one") {
  CubeSample x = CubeSample::of_masks(5, {0b00000, 0b00001, 0b00011, 0b00111, 0b01111});
  WidthResult w = width(x);
  CHECK(w.width == 1);
  CHECK(w.chains.size() == 1);
  CHECK(w.certified);
}

TEST_CASE("width equals the brute-force maximum antichain") {
  SplitRng rng(5, 0);
  int done = 0;
  for (int t = 0; t < 2000 && done < 1000; ++t) {
    int n = 5 + static_cast<int>(rng.below(3));
    double p = n == 7 ? 0.25 : 0.5;
    CubeSample x = CubeSample::draw(n, p, 900, t);
    if (x.size() > 40) continue;
    ++done;
    WidthResult w = width(x);
    REQUIRE(w.certified);
    REQUIRE(w.width == oracles::brute_force_width(x.masks()));
  }
  CHECK(done == 1000);
}

TEST_CASE("width is at least the middle-layer count") {
  SplitRng rng(6, 0);
  for (int t = 0; t < 300; ++t) {
    CubeSample x = CubeSample::draw(6, 0.6, 901, t);
    WidthResult w = width(x);
    REQUIRE(w.width >= w.layer_max);
    REQUIRE(w.certified);
  }
}

TEST_CASE("a sample missing both middle layers usually fails the identity") {
  // n = 5: keep only levels 0,1,4,5
  std::vector<uint32_t> masks;
  for (uint32_t m = 0; m < 32; ++m) {
    int pc = std::popcount(m);
    if (pc <= 1 || pc >= 4) masks.push_back(m);
  }
  CubeSample x = CubeSample::of_masks(5, masks);
  WidthResult w = width(x);
  CHECK(w.layer_max == 0);
  CHECK(w.width > 0);
  CHECK_FALSE(check_wwxx(x));
}

TEST_CASE("shadow events at p = 1 hold below the middle") {
  for (int n : {5, 6, 7}) {
    ShadowEventChecker checker(n);
    CubeSample full = CubeSample::draw(n, 1.0, 1);
    auto rep = checker.check(full);
    CHECK(rep.x1_holds);
    CHECK(rep.x2_holds);
    CHECK(rep.x1_checked > 0);
    CHECK(rep.x2_checked > 0);
    WidthResult w = width(full);
    checker.check_middle_instances(full, w.antichain, rep);
    CHECK(rep.middle_instances_ok);
    CHECK(rep.middle_lazy == (n == 7));
  }
}

TEST_CASE("strict shadow growth below the middle at p = 1 (normalized matching)") {
  // |shadow(A)| > |A| for every nonempty A strictly below the middle level.
  for (int n : {5, 6, 7}) {
    for (int i = 1; 2 * i + 1 < n; ++i) {
      LayerGraph lg(n, i);
      SplitRng rng(7, static_cast<uint64_t>(10 * n + i));
      for (int t = 0; t < 200; ++t) {
        Bitset a = rng.bernoulli_mask(lg.lower_count(), 0.3);
        if (a.none()) continue;
        REQUIRE(lg.upper_shadow(a).count() > a.count());
      }
    }
  }
}

TEST_CASE("events imply the width identity on every tested sample") {
  for (int n : {5, 6, 7}) {
    ShadowEventChecker checker(n);
    int events_held = 0;
    for (int t = 0; t < (n == 7 ? 30 : 60); ++t) {
      CubeSample x = CubeSample::draw(n, 0.95, 77, t);
      auto rep = checker.check(x);
      WidthResult w = width(x);
      checker.check_middle_instances(x, w.antichain, rep);
      auto replay = replay_width_argument(x, w, rep);
      REQUIRE(replay.implication_ok);
      REQUIRE_FALSE(replay.replacement_found);
      if (rep.holds()) {
        ++events_held;
        REQUIRE(w.width == w.layer_max);
        if (n % 2 == 1) {
          REQUIRE(replay.odd_case_checked);
          REQUIRE(replay.closures_antichain);
        }
      }
    }
    // at p = .95 the events do hold reasonably often
    CHECK(events_held > 0);
  }
}

TEST_CASE("replacement argument catches planted violations") {
  // A maximum antichain strictly below the middle must trigger the
  // replacement when the shadow sample is full.
  CubeSample full = CubeSample::draw(5, 1.0, 1);
  ShadowEventChecker checker(5);
  auto rep = checker.check(full);
  REQUIRE(rep.x1_holds);
  // a fake "certificate": the singletons (level 1)
  WidthResult fake;
  fake.width = 5;
  fake.layer_max = 10;
  for (uint32_t b = 0; b < 5; ++b) fake.antichain.push_back(uint32_t{1} << b);
  auto replay = replay_width_argument(full, fake, rep);
  CHECK(replay.replacement_found);
}

TEST_CASE("cube sample guards") {
  CHECK_THROWS_AS(CubeSample::draw(25, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(CubeSample::of_masks(3, {9}), std::invalid_argument);
  // exact width is guarded by sample size
  CubeSample big = CubeSample::draw(13, 1.0, 1);
  CHECK_THROWS_AS(width(big), std::domain_error);
}
