#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ekrlab/families.hpp"
#include "ekrlab/rand_model.hpp"

namespace ekrlab {

/// Verdict for one sample. star_max is max_x |X ∩ K_x|, m_max is the best
/// score over the nonprincipal catalog. Every maximum clique of X is X ∩ F
/// for some maximal intersecting F, so these two numbers decide both
/// properties exactly; ties are resolved by the literal definition (a
/// largest clique "is a star" when it equals X ∩ K_y for some y).
struct EkrVerdict {
  uint64_t star_max = 0;
  uint64_t m_max = 0;
  bool strong = false;
  bool weak = false;
  int best_star = 0;      // 1-based element attaining star_max
  int64_t best_m = -1;    // catalog index attaining m_max, -1 when catalog empty
};

/// Transcript of the reduction from a failed sample to the structured event.
struct ReduceWitness {
  RankedFamily h;          // nonprincipal family witnessing the event
  int x = 0;               // witness element (max degree of the starting H)
  Bitset layer_a;          // A^x(h) over Sigma lower ranks
  uint64_t a_size = 0, g_size = 0;
  double delta = 0;
  bool delta_above_threshold = false;  // delta > 1/(3k)
  bool two_linked = false;
  bool am_ok = false;                  // n|A| <= (k+1)|H| for the starting H
  bool count_ok = false;               // |X∩A| >= |X∩J| for the witness pair
  bool q_satisfied = false;
  bool used_component = false;
  bool completed = false;              // component needed maximal completion
  std::size_t component_index = 0;
  std::string branch;                  // "frankl" or "hstar" size comparison branch
};

/// Analysis context for one (n = 2k+1, k): the nonprincipal catalog plus the
/// per-witness structures behind verdicts and the Q event.
class EkrAnalyzer {
 public:
  EkrAnalyzer(int n, int k);

  const MCorrespondence& corr() const { return corr_; }
  const std::vector<MaximalFamily>& catalog() const { return catalog_; }
  const UniversePtr& universe() const { return corr_.universe(); }

  EkrVerdict verdict(const SampleX& x) const;

  /// Independent brute-force verdict over all subfamilies of the sample.
  /// Guarded to C(n,k) <= 12.
  static EkrVerdict oracle_verdict(const SampleX& x);

  /// Q: some H in the catalog and witness x with A^x(H) 2-linked,
  /// delta_x(A^x(H)) > 1/(3k), and |X∩H| >= |X∩K_x|. The threshold test can
  /// be switched off to probe the bare count event.
  bool event_q(const SampleX& x, bool require_delta_threshold = true) const;
  bool event_q_at(const SampleX& x, int witness, bool require_delta_threshold = true) const;

  /// Q(a,g) at a fixed witness: some closed 2-linked A with |A| = a,
  /// |shadow(A)| = g and |X∩shadow(A)| <= |X∩A|. Only (a,g) with
  /// delta = (g-a)/a > 1/(3k) qualify.
  bool event_q_ag_at(const SampleX& x, int witness, uint64_t a, uint64_t g) const;

  /// All (a,g) size pairs realized by closed 2-linked sets with
  /// delta > 1/(3k).
  std::vector<std::pair<uint64_t, uint64_t>> qualifying_size_pairs() const;

  /// Replays the two-case reduction on a sample violating
  /// max_H |X∩H| < max_x |X∩K_x|; throws std::logic_error otherwise.
  ReduceWitness reduce_failure(const SampleX& x) const;

  /// |H*| and max degree of H* = {T : |T ∩ [3]| >= 2}.
  uint64_t hstar_size() const { return hstar_size_; }

 private:
  struct PairInfo {          // one (catalog H, witness x) pair
    uint32_t family = 0;
    uint8_t witness = 0;
    bool two_linked = false;
    bool qualifies = false;  // two_linked && delta > 1/(3k)
    double delta = 0;
  };
  struct ClosedEntry {       // one closed 2-linked set, shared across witnesses
    Bitset a;                // lower ranks
    Bitset g;                // upper ranks
    uint64_t a_size = 0, g_size = 0;
  };

  const ClosedEntry* closed_entries() const;
  /// K-rank translations of a closed entry for a witness, cached on first
  /// use. Not thread-safe; verdict() and event_q() never touch this cache,
  /// so Monte Carlo sweeps stay parallel over trials.
  struct TranslatedEntry {
    Bitset a_k, g_k;
  };
  const std::vector<TranslatedEntry>& translated(int witness) const;

  MCorrespondence corr_;
  std::vector<MaximalFamily> catalog_;
  std::vector<PairInfo> pairs_;                 // catalog x witnesses, row-major
  std::vector<Bitset> pair_a_k_, pair_j_k_;     // masks per pair (same order)
  std::vector<ClosedEntry> closed2_;            // closed 2-linked sets of Sigma
  mutable std::vector<std::vector<TranslatedEntry>> translated_;  // per witness-1
  uint64_t hstar_size_ = 0;
  double qthreshold_ = 0;  // 1/(3k)
};

}  // namespace ekrlab
