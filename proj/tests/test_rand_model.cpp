#include <doctest.h>

#include <cmath>

#include "ekrlab/ekr.hpp"
#include "ekrlab/rand_model.hpp"

using namespace ekrlab;

TEST_CASE("sampling endpoints") {
  auto u = make_universe(5, 2);
  CHECK(SampleX::draw(u, 1.0, 1).size() == 10);
  CHECK(SampleX::draw(u, 0.0, 1).size() == 0);
}

TEST_CASE("sample mean within three sigma") {
  auto u = make_universe(5, 2);
  const double p = 0.99;
  const int trials = 10000;
  double sum = 0;
  for (int t = 0; t < trials; ++t) sum += static_cast<double>(SampleX::draw(u, p, 99, t).size());
  double mean = sum / trials;
  double sigma = std::sqrt(10 * p * (1 - p) / trials);
  CHECK(std::abs(mean - 10 * p) <= 3 * sigma + 1e-9);
}

TEST_CASE("determinism per seed and trial") {
  auto u = make_universe(7, 3);
  for (int t = 0; t < 20; ++t)
    CHECK(SampleX::draw(u, 0.5, 42, t).members() == SampleX::draw(u, 0.5, 42, t).members());
  CHECK(SampleX::draw(u, 0.5, 42, 0).members() != SampleX::draw(u, 0.5, 43, 0).members());
}

TEST_CASE("upper-layer counting via complementation") {
  MCorrespondence corr(7, 3);
  auto u = corr.universe();
  const auto& lg = corr.sigma();
  const int x = 7;

  // Full upper layer counts exactly |X ∩ K_x|.
  SampleX s = SampleX::draw(u, 0.7, 5);
  Bitset full_upper = Bitset::full(lg.upper_count());
  CHECK(s.count_upper(corr, x, full_upper) == s.count_k(corr.kx_mask(x)));

  // p = 1: |X ∩ G_A| - |X ∩ A| = delta * a exactly.
  SampleX all = SampleX::draw(u, 1.0, 5);
  SplitRng rng(8, 0);
  for (int t = 0; t < 50; ++t) {
    Bitset a = lg.closure(rng.bernoulli_mask(lg.lower_count(), 0.15));
    if (a.none()) continue;
    Bitset g = lg.upper_shadow(a);
    uint64_t xa = all.count_lower(corr, x, a);
    uint64_t xg = all.count_upper(corr, x, g);
    CHECK(xa == a.count());
    CHECK(xg == g.count());
  }
}

TEST_CASE("key identity: layer counts vs family counts") {
  // |X∩A| - |X∩J| = |X∩H| - |X∩K_x| for every catalog family and witness.
  MCorrespondence corr(5, 2);
  auto catalog = corr.all_m();
  auto u = corr.universe();
  for (int t = 0; t < 200; ++t) {
    SampleX s = SampleX::draw(u, 0.6, 31, t);
    for (const auto& m : catalog) {
      for (int x = 1; x <= corr.n(); ++x) {
        Bitset a_layer = corr.decompose(m.members, x);
        Bitset j_k = corr.kx_mask(x) - m.members.members();
        int64_t lhs = static_cast<int64_t>(s.count_lower(corr, x, a_layer)) -
                      static_cast<int64_t>(s.count_k(j_k));
        int64_t rhs = static_cast<int64_t>(s.count_k(m.members.members())) -
                      static_cast<int64_t>(s.count_k(corr.kx_mask(x)));
        REQUIRE(lhs == rhs);
        // and J reads as the upper shadow through complementation
        Bitset g = corr.sigma().upper_shadow(a_layer);
        REQUIRE(s.count_upper(corr, x, g) == s.count_k(j_k));
      }
    }
  }
}

TEST_CASE("wilson interval endpoints") {
  auto all = wilson_interval(100, 100);
  CHECK(all.estimate == doctest::Approx(1.0));
  CHECK(all.hi == doctest::Approx(1.0));
  CHECK(all.lo < 1.0);
  auto none = wilson_interval(0, 50);
  CHECK(none.lo == doctest::Approx(0.0));
  CHECK(none.hi > 0.0);
  CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
}

TEST_CASE("mc_estimate: constant events and thread determinism") {
  auto u = make_universe(5, 2);
  auto yes = mc_estimate(u, 0.5, 500, 7, [](const SampleX&) { return true; });
  CHECK(yes.successes == 500);
  CHECK(yes.interval.hi == doctest::Approx(1.0));

  auto event = [](const SampleX& x) { return x.size() >= 5; };
  auto serial = mc_estimate(u, 0.5, 4000, 11, event, 1);
  auto parallel = mc_estimate(u, 0.5, 4000, 11, event, 4);
  CHECK(serial.successes == parallel.successes);
}

TEST_CASE("empty-sample probability matches (1-p)^10") {
  auto u = make_universe(5, 2);
  const double p = 0.5;
  auto est = mc_estimate(u, p, 100000, 3,
                         [](const SampleX& x) { return x.size() == 0; });
  double exact = std::pow(1 - p, 10);
  double sigma = std::sqrt(exact * (1 - exact) / 100000);
  CHECK(std::abs(est.interval.estimate - exact) <= 3 * sigma + 1e-9);
}

TEST_CASE("exact_prob basics") {
  auto u = make_universe(5, 2);
  CHECK(exact_prob(u, 0.37, [](const RankedFamily&) { return true; }) == doctest::Approx(1.0));
  CHECK(exact_prob(u, 0.37, [](const RankedFamily& f) { return f.size() == 10; }) ==
        doctest::Approx(std::pow(0.37, 10)));
  auto big = make_universe(8, 4);
  CHECK_THROWS_AS(exact_prob(big, 0.5, [](const RankedFamily&) { return true; }),
                  std::domain_error);
}

TEST_CASE("mc_estimate consistent with exact_prob") {
  auto u = make_universe(5, 2);
  auto event_f = [](const RankedFamily& f) {
    return f.size() >= 6 && is_intersecting(f) == false;
  };
  double exact = exact_prob(u, 0.6, event_f);
  auto est = mc_estimate(u, 0.6, 100000, 17,
                         [&](const SampleX& x) { return event_f(x.family()); });
  double half = (est.interval.hi - est.interval.lo) / 2;
  CHECK(std::abs(est.interval.estimate - exact) <= 3 * half);
}

TEST_CASE("deviation events: exact threshold and complement view") {
  MCorrespondence corr(7, 3);
  auto u = corr.universe();
  // p = 1: no deviation occurs for eta > 0.
  SampleX full = SampleX::draw(u, 1.0, 9);
  std::vector<Bitset> targets{corr.kx_mask(1), corr.kx_mask(2)};
  auto scan = deviation_scan(full, targets, 0.08, 3.0);
  CHECK_FALSE(scan.any_occurred);
  for (const auto& e : scan.events) {
    CHECK(e.count == static_cast<uint64_t>(e.expected));
    CHECK(e.complement_count == 0);
  }
  // per-sample equivalence of the two formulations
  for (int t = 0; t < 100; ++t) {
    SampleX s = SampleX::draw(u, 0.9, 77, t);
    auto sc = deviation_scan(s, targets, 0.08, 2.0);
    for (const auto& e : sc.events) {
      double lhs = std::abs(static_cast<double>(e.count) - e.expected);
      double b_size = e.expected / s.p();
      double rhs = std::abs(static_cast<double>(e.complement_count) - b_size * s.eps());
      REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-12));
      REQUIRE(e.occurred == (lhs > e.threshold));
    }
  }
}

TEST_CASE("single-target deviation frequency matches the binomial tail") {
  MCorrespondence corr(7, 3);
  auto u = corr.universe();
  Bitset b = corr.kx_mask(1);  // |B| = 15
  const double p = 0.9, eta = 0.08;
  const double delta_a = 4.0;  // benchmark scale
  const double thr = eta * delta_a * p;
  // exact via binomial over |B|: |count - 15 p| > thr
  double exact = 0;
  for (int c = 0; c <= 15; ++c) {
    if (std::abs(c - 15 * p) <= thr) continue;
    double term = 1;
    for (int j = 0; j < c; ++j) term *= p * (15 - j) / (j + 1);
    for (int j = 0; j < 15 - c; ++j) term *= (1 - p);
    exact += term;
  }
  uint64_t hits = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    SampleX s = SampleX::draw(u, p, 1234, t);
    auto sc = deviation_scan(s, {b}, eta, delta_a);
    hits += sc.any_occurred;
  }
  double freq = static_cast<double>(hits) / trials;
  double sigma = std::sqrt(exact * (1 - exact) / trials);
  CHECK(std::abs(freq - exact) <= 4 * sigma + 1e-9);
}
