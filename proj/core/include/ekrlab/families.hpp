#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "ekrlab/combinat.hpp"
#include "ekrlab/layer_graph.hpp"

namespace ekrlab {

// ---------------------------------------------------------------------------
// Intersecting families over C([n],k), n > 2k. Elements are 1-based in the
// public API; bit i of a member mask is element i+1.
// ---------------------------------------------------------------------------

/// All k-sets containing element x.
RankedFamily star(const UniversePtr& u, int x);

/// No two members disjoint.
bool is_intersecting(const RankedFamily& f);

/// Intersecting, and no k-set outside f meets every member.
bool is_maximal_intersecting(const RankedFamily& f);

/// Equal to the full star of some element.
bool is_principal(const RankedFamily& f);

std::vector<uint64_t> degree_sequence(const RankedFamily& f);  // indexed by element-1
uint64_t max_degree(const RankedFamily& f);

/// Frankl's comparison family F_i (3 <= i <= k+1):
/// {A : 1 in A, A meets {2..i}} union {A : A contains {2..i}}.
RankedFamily frankl_family(const UniversePtr& u, int i);

/// Hilton-Milner family for x and a k-set A with x not in A:
/// {A} union {B : x in B, B meets A}.
RankedFamily hilton_milner(const UniversePtr& u, int x, uint64_t a_bits);

/// Greedy maximal completion of an intersecting family: repeatedly adds the
/// lowest-rank k-set meeting every member. Deterministic.
RankedFamily complete_to_maximal(RankedFamily f);

// ---------------------------------------------------------------------------
// The correspondence between nonprincipal maximal intersecting families and
// distinguished subsets of the middle-layer bigraph, at n = 2k+1.
// ---------------------------------------------------------------------------

/// A nonprincipal maximal intersecting family together with its witness
/// decomposition H = (K_x \ shadow(A)^c) u A.
struct MaximalFamily {
  RankedFamily members;
  int witness_x = 0;  // 1-based
  Bitset layer_a;     // A^x(H) over Sigma lower ranks
};

/// Fixed (n = 2k+1, k) context: the bigraph Sigma over [n] \ {x} (one shared
/// copy, relabeled per witness), rank translation tables, and the family
/// enumeration machinery.
///
/// Terminology used here:
///   * closed: the Sigma closure operator (see LayerGraph::closure);
///   * clique-closed: nonempty A, no two members complementary in the 2k-set
///     ground, and every lower vertex whose whole upper neighborhood lies in
///     shadow(A) is in A or has its ground-complement in A.
/// Clique-closed non-star sets are exactly the A^x(H) of nonprincipal maximal
/// intersecting H; closed complement-free sets are clique-closed, but the
/// converse fails (a member's complement can block an outside vertex), which
/// is why enumeration expands closed sets by complement transversals instead
/// of using the closure fixpoints alone.
class MCorrespondence {
 public:
  MCorrespondence(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  const UniversePtr& universe() const { return u_; }
  const LayerGraph& sigma() const { return *sigma_; }

  /// K_x as a bitset over C([n],k) ranks.
  const Bitset& kx_mask(int x) const;

  /// Translate a lower-layer family (Sigma ranks) to K ranks, given that the
  /// ground of Sigma is [n] \ {x} in increasing order.
  Bitset lower_to_k(int x, const Bitset& a) const;
  /// Translate an upper-layer family to the K ranks of the complements
  /// [n] \ T (k-sets containing x).
  Bitset upper_complement_to_k(int x, const Bitset& b) const;
  /// Inverse of lower_to_k on families of k-sets avoiding x.
  Bitset k_to_lower(int x, const Bitset& f) const;

  /// A^x(H) = H \ K_x, as a Sigma lower-layer family.
  Bitset decompose(const RankedFamily& h, int x) const;

  /// (K_x \ shadow(A)^c) union A. Defined for any nonempty lower family; the
  /// result is maximal intersecting iff A is clique-closed.
  RankedFamily from_closed(int x, const Bitset& a) const;

  bool is_clique_closed(const Bitset& a) const;
  /// A equals {k-sets containing y} for some ground element y (maps to the
  /// principal family K_y).
  bool is_full_layer_star(const Bitset& a) const;
  /// Some member's ground-complement is also a member.
  bool has_complement_pair(const Bitset& a) const;

  /// Every nonprincipal maximal intersecting family exactly once, with
  /// witness x = n. Closed sets are walked in lectic order and expanded by
  /// the shadow-preserving complement transversals.
  void for_each_m(const std::function<void(MaximalFamily&&)>& f) const;

  /// Materialized catalog (guarded to k <= 4).
  std::vector<MaximalFamily> all_m() const;

 private:
  void expand_closed(const Bitset& closed, const std::function<void(const Bitset&)>& emit) const;

  int n_, k_;
  UniversePtr u_;
  std::shared_ptr<const LayerGraph> sigma_;
  std::vector<Bitset> kx_;                           // per x-1
  std::vector<std::vector<uint32_t>> lower_to_k_;    // per x-1: sigma lower rank -> K rank
  std::vector<std::vector<uint32_t>> upper_comp_k_;  // per x-1: sigma upper rank -> K rank of complement
};

struct FranklCheckResult {
  bool pass = true;
  uint64_t family_size = 0;
  uint64_t family_max_degree = 0;
  uint64_t families_compared = 0;
  uint64_t violations = 0;
};

/// Frankl's theorem as an empirical check over the stars and the full
/// nonprincipal catalog: |H| > |F_i| implies max_degree(H) > max_degree(F_i).
FranklCheckResult check_frankl(const MCorrespondence& corr,
                               const std::vector<MaximalFamily>& catalog, int i);

}  // namespace ekrlab
