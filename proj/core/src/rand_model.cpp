#include "ekrlab/rand_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ekrlab {

SampleX SampleX::draw(const UniversePtr& u, double p, uint64_t master_seed, uint64_t trial) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("SampleX::draw: p in [0,1] required");
  SplitRng rng(master_seed, trial);
  Bitset members = rng.bernoulli_mask(u->kset_count(), p);
  return SampleX(u, std::move(members), p, master_seed);
}

WilsonInterval wilson_interval(uint64_t successes, uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials >= 1 required");
  const double z = 1.959963984540054;  // 97.5th normal quantile
  double n = static_cast<double>(trials);
  double phat = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (phat + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
  return WilsonInterval{phat, std::max(0.0, center - half), std::min(1.0, center + half)};
}

McEstimate mc_estimate(const UniversePtr& u, double p, uint64_t trials, uint64_t master_seed,
                       const std::function<bool(const SampleX&)>& event, int threads) {
  if (trials == 0) throw std::invalid_argument("mc_estimate: trials >= 1 required");
  if (threads < 1) threads = 1;

  auto run_range = [&](uint64_t lo, uint64_t hi) {
    uint64_t hits = 0;
    for (uint64_t t = lo; t < hi; ++t)
      if (event(SampleX::draw(u, p, master_seed, t))) ++hits;
    return hits;
  };

  uint64_t successes = 0;
  if (threads == 1 || trials < 64) {
    successes = run_range(0, trials);
  } else {
    std::vector<uint64_t> partial(threads, 0);
    std::vector<std::thread> pool;
    uint64_t chunk = (trials + threads - 1) / threads;
    for (int i = 0; i < threads; ++i) {
      uint64_t lo = std::min<uint64_t>(trials, i * chunk);
      uint64_t hi = std::min<uint64_t>(trials, lo + chunk);
      pool.emplace_back([&, i, lo, hi] { partial[i] = run_range(lo, hi); });
    }
    for (auto& th : pool) th.join();
    for (uint64_t s : partial) successes += s;
  }
  return McEstimate{successes, trials, wilson_interval(successes, trials)};
}

double exact_prob(const UniversePtr& u, double p,
                  const std::function<bool(const RankedFamily&)>& event) {
  const uint64_t m = u->kset_count();
  if (m > 24) throw std::domain_error("exact_prob: guarded to C(n,k) <= 24");
  std::vector<double> pw(m + 1), qw(m + 1);
  pw[0] = qw[0] = 1.0;
  for (uint64_t i = 1; i <= m; ++i) {
    pw[i] = pw[i - 1] * p;
    qw[i] = qw[i - 1] * (1.0 - p);
  }
  double total = 0;
  RankedFamily f(u);
  for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
    f.members().clear();
    uint64_t rest = mask;
    while (rest) {
      f.insert_rank(std::countr_zero(rest));
      rest &= rest - 1;
    }
    if (event(f)) {
      int ones = std::popcount(mask);
      total += pw[ones] * qw[m - ones];
    }
  }
  return total;
}

DeviationScan deviation_scan(const SampleX& x, const std::vector<Bitset>& targets, double eta,
                             double delta_a) {
  DeviationScan scan;
  scan.events.reserve(targets.size());
  const double p = x.p();
  for (const auto& b : targets) {
    DeviationEvent e;
    e.count = x.count_k(b);
    e.expected = static_cast<double>(b.count()) * p;
    e.threshold = eta * delta_a * p;
    e.occurred = std::abs(static_cast<double>(e.count) - e.expected) > e.threshold;
    e.complement_count = b.count_minus(x.members());
    scan.any_occurred = scan.any_occurred || e.occurred;
    scan.events.push_back(e);
  }
  return scan;
}

}  // namespace ekrlab
