#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ekrlab/combinat.hpp"
#include "ekrlab/families.hpp"
#include "ekrlab/rng.hpp"

namespace ekrlab {

/// One realization of the random k-graph: every k-set of [n] present
/// independently with probability p, deterministic per (master seed, trial).
///
/// Through a witness x the sample extends to the upper layer of Sigma^x by
/// complementation: a (k+1)-set T off x counts as present iff the k-set
/// [n] \ T (which contains x) is present.
class SampleX {
 public:
  SampleX(UniversePtr u, Bitset members, double p, uint64_t seed)
      : fam_(std::move(u), std::move(members)), p_(p), seed_(seed) {}

  static SampleX draw(const UniversePtr& u, double p, uint64_t master_seed, uint64_t trial = 0);

  const RankedFamily& family() const { return fam_; }
  const Bitset& members() const { return fam_.members(); }
  double p() const { return p_; }
  double eps() const { return 1.0 - p_; }
  uint64_t seed() const { return seed_; }
  uint64_t size() const { return fam_.size(); }

  /// |X ∩ B| for B given over C([n],k) ranks.
  uint64_t count_k(const Bitset& b) const { return fam_.members().count_and(b); }
  /// |X ∩ A| for a lower-layer family of Sigma^x.
  uint64_t count_lower(const MCorrespondence& corr, int x, const Bitset& a) const {
    return count_k(corr.lower_to_k(x, a));
  }
  /// |X ∩ B| for an upper-layer family of Sigma^x, via complementation.
  uint64_t count_upper(const MCorrespondence& corr, int x, const Bitset& b) const {
    return count_k(corr.upper_complement_to_k(x, b));
  }

 private:
  RankedFamily fam_;
  double p_;
  uint64_t seed_;
};

struct WilsonInterval {
  double estimate = 0;
  double lo = 0;
  double hi = 0;
};

/// 95% Wilson score interval.
WilsonInterval wilson_interval(uint64_t successes, uint64_t trials);

struct McEstimate {
  uint64_t successes = 0;
  uint64_t trials = 0;
  WilsonInterval interval;
};

/// Monte Carlo estimate of Pr(event) over trials independent samples.
/// Per-trial substreams make the result independent of the thread count.
McEstimate mc_estimate(const UniversePtr& u, double p, uint64_t trials, uint64_t master_seed,
                       const std::function<bool(const SampleX&)>& event, int threads = 1);

/// Exact probability of an event by summing over all 2^C(n,k) outcomes.
/// Guarded to C(n,k) <= 24.
double exact_prob(const UniversePtr& u, double p,
                  const std::function<bool(const RankedFamily&)>& event);

/// One deviation event ||X∩B| - |B|p| > eta * delta_a * p.
struct DeviationEvent {
  uint64_t count = 0;        // |X ∩ B|
  double expected = 0;       // |B| p
  double threshold = 0;      // eta * delta_a * p
  bool occurred = false;
  uint64_t complement_count = 0;  // |B \ X|, for the complement-side view
};

struct DeviationScan {
  std::vector<DeviationEvent> events;
  bool any_occurred = false;
};

/// Evaluates the deviation events for each target family (over K ranks).
DeviationScan deviation_scan(const SampleX& x, const std::vector<Bitset>& targets, double eta,
                             double delta_a);

}  // namespace ekrlab
