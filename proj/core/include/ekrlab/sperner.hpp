#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ekrlab/bitset.hpp"
#include "ekrlab/layer_graph.hpp"

namespace ekrlab {

/// Random subset of the n-cube: member masks over 2^[n], each subset present
/// independently with probability p. Guarded to n <= 20.
class CubeSample {
 public:
  CubeSample(int n, Bitset members, double p, uint64_t seed);
  static CubeSample draw(int n, double p, uint64_t master_seed, uint64_t trial = 0);
  static CubeSample of_masks(int n, const std::vector<uint32_t>& masks);

  int n() const { return n_; }
  double p() const { return p_; }
  uint64_t seed() const { return seed_; }
  uint64_t size() const { return members_.count(); }
  bool contains(uint32_t mask) const { return members_.test(mask); }
  const Bitset& members() const { return members_; }
  std::vector<uint32_t> masks() const;
  uint64_t layer_count(int level) const;
  /// max(|X ∩ middle|, |X ∩ co-middle|).
  uint64_t layer_max() const;

 private:
  int n_;
  Bitset members_;
  double p_;
  uint64_t seed_;
};

/// Exact width with a Dilworth certificate pair: a minimum chain cover and a
/// maximum antichain of equal size, extracted from a maximum bipartite
/// matching on strict containment.
struct WidthResult {
  uint64_t width = 0;
  uint64_t layer_max = 0;
  std::vector<std::vector<uint32_t>> chains;  // partition of the sample
  std::vector<uint32_t> antichain;            // masks, pairwise incomparable
  bool certified = false;                     // certificates cross-validated
};
WidthResult width(const CubeSample& x);  // guarded to |X| <= 5000

/// Literal middle-layer identity: width == layer_max.
bool check_wwxx(const CubeSample& x);

/// Shadow-expansion events per level, over all closed sets in the stated
/// regimes. Upward events live strictly below the middle (all sizes), plus
/// the lower-middle level at odd n restricted to half the middle binomial;
/// downward events mirror this above the middle.
///
/// The odd middle level can carry far too many closed sets to enumerate
/// (tens of millions already at n = 7), so past a cutoff it is evaluated
/// lazily: exactly on the closure instances a maximum-antichain certificate
/// feeds into the replacement argument. That restriction keeps the
/// implication (events => width identity) an exact theorem.
struct ShadowEventReport {
  bool x1_holds = true;                   // no upward violation (enumerated regimes)
  bool x2_holds = true;                   // no downward violation
  uint64_t x1_checked = 0, x2_checked = 0;
  std::vector<std::pair<int, Bitset>> x1_violations;  // (level, closed set over level ranks)
  std::vector<std::pair<int, Bitset>> x2_violations;
  bool middle_lazy = false;        // odd middle handled per certificate
  bool middle_instances_ok = true; // certificate-closure instances
  uint64_t middle_checked = 0;
  bool holds() const { return x1_holds && x2_holds && middle_instances_ok; }
};

/// Precomputes the closed-set lists per feasible level once; check() is then
/// a pure popcount scan per sample. Guarded to level universes <= 70.
class ShadowEventChecker {
 public:
  explicit ShadowEventChecker(int n);
  ShadowEventReport check(const CubeSample& x) const;
  /// Odd-n lazy middle: evaluates the (X1)/(X2) instances at the closures of
  /// the certificate's two middle parts, sizes permitting.
  void check_middle_instances(const CubeSample& x, const std::vector<uint32_t>& antichain,
                              ShadowEventReport& rep) const;
  int n() const { return n_; }
  bool middle_lazy() const { return middle_lazy_; }

 private:
  struct Entry {
    uint64_t set_cube[2];     // the closed set, as cube positions
    uint64_t shadow_cube[2];  // its shadow one level up (X1) or down (X2)
    int level;
  };
  void add_entry(std::vector<Entry>& out, int level, const Bitset& set_cube,
                 const Bitset& shadow_cube);
  int n_;
  bool middle_lazy_ = false;
  uint64_t half_middle_ = 0;
  std::vector<Entry> x1_, x2_;
  std::shared_ptr<const LayerGraph> middle_;  // odd n only
};

/// Executable replay of the replacement argument: assuming the shadow events
/// hold on the sample, a maximum antichain must sit inside the middle
/// layer(s); at odd n the closures of its two halves form an antichain and
/// force the smaller half empty.
struct ReplayResult {
  bool implication_ok = false;   // (X1) and (X2) held => width == layer_max
  bool replacement_found = false;  // a strictly larger antichain was built (bug if events held)
  bool odd_case_checked = false;
  bool closures_antichain = true;  // odd n: closure union is an antichain
  bool middle_tie = false;         // |X ∩ mid| == |X ∩ co-mid|
  bool unique_candidate = false;   // events held, no tie: unique largest antichain
};
ReplayResult replay_width_argument(const CubeSample& x, const WidthResult& w,
                                   const ShadowEventReport& events);

}  // namespace ekrlab
