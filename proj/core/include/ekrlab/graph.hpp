#pragma once

#include <cstdint>
#include <vector>

#include "ekrlab/bitset.hpp"

namespace ekrlab {

/// Plain undirected graph on [0, n) with adjacency lists plus mirrored
/// adjacency bitsets. Small-graph utilities used by the linkage and
/// tree-counting checks; nothing here assumes layer structure.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t n);

  std::size_t size() const { return adj_.size(); }
  void add_edge(uint32_t u, uint32_t v);
  bool has_edge(uint32_t u, uint32_t v) const { return mask_[u].test(v); }
  const std::vector<uint32_t>& neighbors(uint32_t v) const { return adj_[v]; }
  const Bitset& neighbor_mask(uint32_t v) const { return mask_[v]; }
  std::size_t degree(uint32_t v) const { return adj_[v].size(); }
  std::size_t max_degree() const;

  /// N(S) = union of neighborhoods of members of S.
  Bitset neighborhood(const Bitset& s) const;

  /// BFS distances from a source set; unreachable = -1.
  std::vector<int> distances(const Bitset& sources) const;
  std::vector<int> distances(uint32_t source) const;

  /// A set W is j-linked when any two members are joined by a chain inside W
  /// with consecutive graph distance <= j. Empty and singleton sets qualify.
  bool is_j_linked(const Bitset& w, int j) const;

  /// Partition of `w` into maximal j-linked blocks, ordered by smallest member.
  std::vector<Bitset> linked_components(const Bitset& w, int j) const;

  /// Number of subtrees of the graph (subgraphs that are trees) with exactly
  /// `u` vertices, one of which is `root`. Counted as trees: a vertex set
  /// spanning several trees contributes once per spanning tree.
  uint64_t count_rooted_subtrees(uint32_t root, int u) const;

  /// Exact number of spanning trees of the induced subgraph on `verts`
  /// (Kirchhoff, fraction-free integer elimination).
  uint64_t count_spanning_trees(const std::vector<uint32_t>& verts) const;

 private:
  std::vector<std::vector<uint32_t>> adj_;
  std::vector<Bitset> mask_;
};

enum class LinkCheck { NotApplicable, Pass, Fail };

/// Checks the linkedness propagation statement: if T subset of N(A), A subset
/// of N(T) and A is j-linked, then T is (j+2)-linked. Returns NotApplicable
/// when the hypotheses fail.
LinkCheck check_link_propagation(const SimpleGraph& g, const Bitset& a, const Bitset& t, int j);

/// True when every rooted-subtree count of size u in g is at most
/// (e*d)^(u-1), d = max degree.
bool verify_tree_bound(const SimpleGraph& g, int u);

}  // namespace ekrlab
