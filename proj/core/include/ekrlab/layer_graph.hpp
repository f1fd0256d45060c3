#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ekrlab/bitset.hpp"
#include "ekrlab/combinat.hpp"
#include "ekrlab/graph.hpp"

namespace ekrlab {

/// Partition of a layer family into maximal j-linked blocks.
struct LinkedPartition {
  int j = 0;
  std::vector<Bitset> blocks;  // pairwise j-separated, each j-linked, union = input
};

/// Result of the isoperimetric checks on one lower-layer family.
struct KkCheck {
  bool applicable = false;   // Kruskal-Katona form requires 1 <= |A| <= N/2
  bool kk_ok = false;        // delta(A) >= (log 2 / k) log2(N / 2|A|)
  bool lovasz_ok = false;    // |shadow(A)| >= C(x, k-1) where C(x,k) = |A|
  double delta = 0;
  double kk_bound = 0;
  double lovasz_x = 0;
  double lovasz_bound = 0;
};

/// Lectic (Next-Closure) walk over the fixpoints of a closure operator on
/// [0, universe). Emits every closed set exactly once, smallest-lectic first.
class ClosedSetEnumerator {
 public:
  ClosedSetEnumerator(std::size_t universe, std::function<Bitset(const Bitset&)> closure);

  /// Next closed set, or nullopt when exhausted.
  std::optional<Bitset> next();

 private:
  std::size_t n_;
  std::function<Bitset(const Bitset&)> cl_;
  std::optional<Bitset> current_;
  bool started_ = false;
};

/// The containment bigraph on two adjacent levels Gamma_lo, Gamma_{lo+1} of
/// the subset lattice of [0, ground): a lower vertex (a lo-set) is adjacent
/// to the upper vertices (the (lo+1)-sets) containing it.
///
/// When ground == 2*lo this is the middle-layer graph Sigma with
/// |Gamma_lo| = C(2k,k) = N and |Gamma_{lo+1}| = C(2k,k+1) = C(2k,k-1) = M,
/// and the ground-complement pairing on the lower layer is available.
class LayerGraph {
 public:
  LayerGraph(int ground, int lower);

  int ground() const { return ground_; }
  int lower_k() const { return lower_; }
  std::size_t lower_count() const { return lower_bits_.size(); }  // N
  std::size_t upper_count() const { return upper_bits_.size(); }  // M
  const BinomTable& binom() const { return binom_; }

  uint64_t lower_bits(uint32_t idx) const { return lower_bits_[idx]; }
  uint64_t upper_bits(uint32_t idx) const { return upper_bits_[idx]; }
  uint32_t lower_rank(uint64_t bits) const;
  uint32_t upper_rank(uint64_t bits) const;

  /// Upper neighbors of a lower vertex (its k = ground-lower supersets).
  const Bitset& up_mask(uint32_t lower_idx) const { return up_[lower_idx]; }
  /// Lower neighbors of an upper vertex (its lower+1 subsets).
  const Bitset& down_mask(uint32_t upper_idx) const { return down_[upper_idx]; }

  Bitset upper_shadow(const Bitset& a) const;  // over lower ranks -> upper ranks
  Bitset lower_shadow(const Bitset& b) const;  // over upper ranks -> lower ranks

  /// Vertex expansion (|shadow(A)| - |A|) / |A|; throws on empty A.
  double delta(const Bitset& a) const;

  /// Edges between shadow(A) and the lower complement of A, counted directly.
  uint64_t boundary_edges(const Bitset& a) const;

  // --- Isoperimetry (middle-layer case only: ground == 2*lower) ---
  double kk_lower_bound(uint64_t a_size) const;
  double lovasz_x(uint64_t a_size) const;       // real x >= k with C(x,k) = |A|
  double lovasz_bound(uint64_t a_size) const;   // C(x, k-1)
  KkCheck verify_kk(const Bitset& a) const;

  // --- Distances and neighborhoods ---
  struct VertexSet {
    Bitset lower, upper;
  };
  /// N^i(R): all vertices within distance i of R in the bigraph.
  VertexSet neighborhood_iter(const VertexSet& r, int radius) const;
  /// Distance between two lower vertices: 2 * (lower_k - |intersection|).
  int lower_distance(uint32_t a, uint32_t b) const;
  /// Distance between two upper vertices: 2 * (lower_k + 1 - |intersection|).
  int upper_distance(uint32_t a, uint32_t b) const;

  /// Lower vertices at distance exactly 2 (the Johnson graph; degree
  /// lower*(ground-lower), which is k^2 on the middle layers).
  const Bitset& johnson_mask(uint32_t lower_idx) const { return johnson_[lower_idx]; }
  SimpleGraph johnson_graph() const;

  bool is_linked(const Bitset& a, int j) const;
  LinkedPartition linked_components(const Bitset& a, int j) const;
  bool is_linked_upper(const Bitset& b, int j) const;

  // --- Closure ---
  /// closure(A) = {x in lower layer : N(x) subset of N(A)}.
  Bitset closure(const Bitset& a) const;
  bool is_closed(const Bitset& a) const;
  /// Same operator on the upper layer (used for lower-shadow events).
  Bitset closure_upper(const Bitset& b) const;
  bool is_closed_upper(const Bitset& b) const;

  /// Stream of all closed lower-layer sets with at least min_size elements.
  /// Guarded: requires lower_count() <= 70.
  ClosedSetEnumerator enumerate_closed_raw() const;
  void for_each_closed(std::size_t min_size, const std::function<void(const Bitset&)>& f) const;
  ClosedSetEnumerator enumerate_closed_upper_raw() const;

  // --- Ground-complement pairing (ground == 2*lower only) ---
  bool has_complement_pairing() const { return ground_ == 2 * lower_; }
  uint32_t complement_rank(uint32_t lower_idx) const;

 private:
  void require_middle(const char* what) const;

  int ground_, lower_;
  BinomTable binom_;
  std::vector<uint64_t> lower_bits_, upper_bits_;
  std::vector<Bitset> up_, down_, johnson_;
  std::vector<uint32_t> complement_;
};

}  // namespace ekrlab
