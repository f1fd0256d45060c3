#include <doctest.h>

#include <cmath>

#include "ekrlab/containers.hpp"
#include "ekrlab/experiments.hpp"
#include "ekrlab/rng.hpp"

using namespace ekrlab;

namespace {

Bitset layer_star(const LayerGraph& lg, int e) {
  Bitset b(lg.lower_count());
  for (uint32_t r = 0; r < lg.lower_count(); ++r)
    if (lg.lower_bits(r) >> e & 1) b.set(r);
  return b;
}

}  // namespace

TEST_CASE("walk counts on the full layer and a singleton") {
  ContainerParams params;
  for (int k : {3, 4, 5}) {
    LayerGraph lg(2 * k, k);
    Bitset full = Bitset::full(lg.lower_count());
    // brute-force walk oracle on one vertex
    uint64_t expected = 0;
    uint32_t v = 0;
    lg.down_mask(v).for_each([&](std::size_t x1) {
      lg.up_mask(static_cast<uint32_t>(x1)).for_each([&](std::size_t y) {
        expected += lg.down_mask(static_cast<uint32_t>(y)).count();
      });
    });
    CHECK(good_walk_count(lg, full, v) == expected);
    CHECK(expected == static_cast<uint64_t>(k + 1) * k * (k + 1));
    // every shadow vertex passes the threshold: G0 = G
    CHECK(g0_set(lg, full, params) == lg.upper_shadow(full));
  }
  // singleton at k=3: G0 empty
  LayerGraph lg(6, 3);
  Bitset single(lg.lower_count());
  single.set(7);
  CHECK(g0_set(lg, single, params).none());
}

TEST_CASE("filtration: full layer has empty H") {
  LayerGraph lg(6, 3);
  ContainerParams params;
  auto f = filtration(lg, Bitset::full(lg.lower_count()), params);
  CHECK(f.h.none());
  CHECK(f.b.none());
  auto chk = check_filtration(lg, Bitset::full(lg.lower_count()), params);
  CHECK(chk.all());
}

TEST_CASE("filtration checks: exhaustive over closed sets at k=3") {
  LayerGraph lg(6, 3);
  ContainerParams params;
  lg.for_each_closed(1, [&](const Bitset& a) {
    auto chk = check_filtration(lg, a, params);
    REQUIRE(chk.g0_containment);
    REQUIRE(chk.degree_identity);
    REQUIRE(chk.h_edge_chain);
    REQUIRE(chk.b_chain);
    REQUIRE(chk.i_chain);
    REQUIRE(chk.c_chain);
    REQUIRE(chk.witness_paths);
  });
}

TEST_CASE("filtration checks: sampled closed sets at k=4") {
  LayerGraph lg(8, 4);
  ContainerParams params;
  SplitRng rng(41, 0);
  for (int t = 0; t < 50; ++t) {
    Bitset a = lg.closure(rng.bernoulli_mask(lg.lower_count(), 0.1));
    if (a.none()) continue;
    REQUIRE(check_filtration(lg, a, params).all());
  }
}

TEST_CASE("filtration at the half-layer star, k = 3 and 4") {
  ContainerParams params;
  for (int k : {3, 4}) {
    LayerGraph lg(2 * k, k);
    Bitset star = layer_star(lg, 0);
    CHECK(lg.delta(star) == doctest::Approx(0.0));
    auto chk = check_filtration(lg, star, params);
    CHECK(chk.all());
  }
}

TEST_CASE("record identities on the degenerate full choice T = A") {
  LayerGraph lg(6, 3);
  // T = A: W contains the shadow and Z equals it.
  Bitset a = layer_star(lg, 0);
  Bitset g = lg.upper_shadow(a);
  Bitset z = z_from_ta(lg, a, a);
  CHECK(z == g);
  Bitset w = lg.upper_shadow(lg.lower_shadow(lg.upper_shadow(a)) | a);
  CHECK(g.is_subset_of(w));
}

TEST_CASE("record construction and exact identities at k=3 (sampled set)") {
  LayerGraph lg(6, 3);
  ContainerParams params;
  ContainerBuilder builder(lg, params);
  SplitRng rng(3, 9);
  int built = 0;
  for (int t = 0; t < 60; ++t) {
    Bitset a = sample_closed_two_linked(lg, rng);
    ContainerRecord rec = builder.build(a, 500 + t);
    auto chk = check_record(lg, rec, params);
    REQUIRE(chk.z_in_w_and_g);
    REQUIRE(chk.w_minus_g_bound);
    REQUIRE(chk.z_two_routes);
    REQUIRE(chk.sprime_chain);
    REQUIRE(chk.reconstruct_ok);
    REQUIRE(chk.filtration.all());
    CHECK(rec.t.is_subset_of(rec.a));
    CHECK(rec.u.is_subset_of(rec.w - rec.g));
    ++built;
  }
  CHECK(built == 60);
}

TEST_CASE("records are deterministic per seed") {
  LayerGraph lg(6, 3);
  ContainerBuilder builder(lg);
  SplitRng rng(10, 1);
  Bitset a = sample_closed_two_linked(lg, rng);
  auto r1 = builder.build(a, 77);
  auto r2 = builder.build(a, 77);
  CHECK(r1.t == r2.t);
  CHECK(r1.u == r2.u);
  CHECK(r1.f == r2.f);
  auto r3 = builder.build(a, 78);
  // different seed normally draws a different T (not guaranteed, but the
  // draw streams differ); at least the records stay internally consistent
  CHECK(check_record(lg, r3, builder.params()).all());
}

TEST_CASE("U stage: empty U keeps S, members avoid the shadow") {
  LayerGraph lg(6, 3);
  ContainerBuilder builder(lg);
  SplitRng rng(12, 2);
  for (int t = 0; t < 30; ++t) {
    Bitset a = sample_closed_two_linked(lg, rng);
    ContainerRecord rec = builder.build(a, 900 + t);
    // S' differs from S only through N(U)
    if (rec.u.none()) CHECK(rec.sprime == rec.s);
    // (S \ A) \ L members have more than k/4 shadow neighbors
    Bitset w_minus_g = rec.w - rec.g;
    (rec.s - rec.a).for_each([&](std::size_t x) {
      std::size_t d_wg = lg.up_mask(static_cast<uint32_t>(x)).count_and(w_minus_g);
      if (4 * d_wg < static_cast<std::size_t>(lg.lower_k())) {
        std::size_t d_g = lg.up_mask(static_cast<uint32_t>(x)).count_and(rec.g);
        REQUIRE(4 * d_g > static_cast<std::size_t>(lg.lower_k()));
      }
    });
  }
}

TEST_CASE("reconstruction across record-sharing pairs") {
  // For closed A, B with G = shadow(A): A ∩ B = {x in B : N(x) ⊆ G ∩ shadow(B)}.
  LayerGraph lg(6, 3);
  SplitRng rng(21, 3);
  std::vector<Bitset> closed;
  lg.for_each_closed(1, [&](const Bitset& a) {
    if (closed.size() < 400 && rng.bernoulli(0.1)) closed.push_back(a);
  });
  REQUIRE(closed.size() >= 100);
  for (std::size_t i = 0; i < closed.size(); i += 7)
    for (std::size_t j = 0; j < closed.size(); j += 11) {
      const Bitset& a = closed[i];
      const Bitset& b = closed[j];
      Bitset g = lg.upper_shadow(a);
      Bitset gb = lg.upper_shadow(b);
      bool ok = false;
      Bitset rec = reconstruct(lg, b, gb, a - b, g & gb, &ok);
      REQUIRE(rec == a);
      REQUIRE(ok);
    }
}

TEST_CASE("large-delta specification") {
  LayerGraph lg(6, 3);
  ContainerParams params;
  // singleton: delta = k-1 = 2 > 1
  Bitset single(lg.lower_count());
  single.set(11);
  auto spec = specify_large_delta(lg, single, 4.0, 5, params);
  CHECK(spec.four_linked);
  CHECK(spec.forest_roundtrip);

  // every closed 2-linked set with delta > 1 at k = 3
  int checked = 0;
  lg.for_each_closed(1, [&](const Bitset& a) {
    if (!lg.is_linked(a, 2)) return;
    double d = lg.delta(a);
    if (!(d > 1.0)) return;
    auto s = specify_large_delta(lg, a, 4.0, 17, params);
    REQUIRE(s.four_linked);
    REQUIRE(s.forest_roundtrip);
    ++checked;
  });
  CHECK(checked == 1745);  // delta > 1 closed 2-linked sets at k = 3

  // guard: small delta rejected
  Bitset star = layer_star(lg, 0);
  CHECK_THROWS_AS(specify_large_delta(lg, star, 4.0, 1, params), std::invalid_argument);
}

TEST_CASE("retry-cap exhaustion returns a flagged best-so-far record") {
  LayerGraph lg(6, 3);
  ContainerParams strict;
  strict.accept_factor = 0.0;  // nothing can be accepted, only the fallback path
  strict.retry_cap = 16;
  strict.pilot_rounds = 8;
  ContainerBuilder builder(lg, strict);
  SplitRng rng(15, 5);
  Bitset a = sample_closed_two_linked(lg, rng);
  ContainerRecord rec = builder.build(a, 1);
  CHECK(rec.t_fallback);
  // the fallback record still satisfies every exact identity
  CHECK(check_record(lg, rec, strict).all());
}

TEST_CASE("reconstruct flags inconsistent inputs") {
  LayerGraph lg(6, 3);
  // A star with one member removed is not closed (the closure restores the
  // member), so inputs claiming it as A \ A* cannot come from a real record.
  Bitset broken = layer_star(lg, 0);
  broken.reset(broken.find_first());
  REQUIRE_FALSE(lg.is_closed(broken));
  bool ok = true;
  Bitset rec = reconstruct(lg, Bitset(lg.lower_count()), Bitset(lg.upper_count()), broken,
                           Bitset(lg.upper_count()), &ok);
  CHECK(rec == broken);
  CHECK_FALSE(ok);
}

TEST_CASE("single-root forest fallback at an extreme threshold") {
  LayerGraph lg(6, 3);
  ContainerParams params;
  SplitRng rng(16, 6);
  for (int t = 0; t < 20; ++t) {
    Bitset a = sample_closed_two_linked(lg, rng);
    if (!(lg.delta(a) > 1.0) || a.count() < 2) continue;
    // a huge threshold constant empties S, forcing the single-root forest
    auto spec = specify_large_delta(lg, a, 50.0, 3, params);
    CHECK(spec.single_root_fallback);
    CHECK(spec.forest_roundtrip);
    CHECK(spec.forest.roots.size() == 1);
  }
}

TEST_CASE("builder parameter validation") {
  LayerGraph lg(6, 3);
  ContainerParams bad;
  bad.zeta = 0;
  CHECK_THROWS_AS(ContainerBuilder(lg, bad), std::invalid_argument);
  LayerGraph off(7, 3);
  CHECK_THROWS_AS(ContainerBuilder(off, ContainerParams{}), std::invalid_argument);
}

TEST_CASE("record json dump carries the reproducibility fields") {
  LayerGraph lg(6, 3);
  ContainerBuilder builder(lg);
  SplitRng rng(14, 4);
  Bitset a = sample_closed_two_linked(lg, rng);
  ContainerRecord rec = builder.build(a, 123);
  std::string j = record_to_json(rec, builder.params(), 3);
  CHECK(j.find("\"seed\": 123") != std::string::npos);
  CHECK(j.find("\"t1\"") != std::string::npos);
  CHECK(j.find("\"f\"") != std::string::npos);
}
