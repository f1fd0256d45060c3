#include "ekrlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace ekrlab {

SimpleGraph::SimpleGraph(std::size_t n) : adj_(n), mask_(n, Bitset(n)) {}

void SimpleGraph::add_edge(uint32_t u, uint32_t v) {
  if (u >= size() || v >= size() || u == v)
    throw std::invalid_argument("SimpleGraph::add_edge: bad endpoints");
  if (mask_[u].test(v)) return;
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  mask_[u].set(v);
  mask_[v].set(u);
}

std::size_t SimpleGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adj_) d = std::max(d, a.size());
  return d;
}

Bitset SimpleGraph::neighborhood(const Bitset& s) const {
  Bitset out(size());
  s.for_each([&](std::size_t v) { out |= mask_[v]; });
  return out;
}

std::vector<int> SimpleGraph::distances(const Bitset& sources) const {
  std::vector<int> dist(size(), -1);
  std::queue<uint32_t> q;
  sources.for_each([&](std::size_t v) {
    dist[v] = 0;
    q.push(static_cast<uint32_t>(v));
  });
  while (!q.empty()) {
    uint32_t v = q.front();
    q.pop();
    for (uint32_t w : adj_[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  return dist;
}

std::vector<int> SimpleGraph::distances(uint32_t source) const {
  Bitset s(size());
  s.set(source);
  return distances(s);
}

std::vector<Bitset> SimpleGraph::linked_components(const Bitset& w, int j) const {
  if (j < 1) throw std::invalid_argument("linked_components: j >= 1 required");
  auto members = w.to_indices();
  std::vector<std::size_t> parent(members.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto dist = distances(members[i]);
    for (std::size_t l = i + 1; l < members.size(); ++l) {
      int d = dist[members[l]];
      if (d >= 0 && d <= j) {
        auto a = find(i), b = find(l);
        if (a != b) parent[a] = b;
      }
    }
  }
  std::vector<Bitset> blocks;
  std::vector<int> block_of(members.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto r = find(i);
    if (block_of[r] < 0) {
      block_of[r] = static_cast<int>(blocks.size());
      blocks.emplace_back(size());
    }
    blocks[block_of[r]].set(members[i]);
  }
  return blocks;  // ordered by smallest member since members[] is ascending
}

bool SimpleGraph::is_j_linked(const Bitset& w, int j) const {
  if (w.count() <= 1) return true;
  return linked_components(w, j).size() == 1;
}

namespace {

// Fraction-free determinant of an integer matrix (Bareiss), exact in i128.
uint64_t bareiss_abs_det(std::vector<std::vector<__int128>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  int sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  __int128 det = a[n - 1][n - 1];
  if (sign < 0) det = -det;
  return static_cast<uint64_t>(det < 0 ? -det : det);
}

}  // namespace

uint64_t SimpleGraph::count_spanning_trees(const std::vector<uint32_t>& verts) const {
  const std::size_t m = verts.size();
  if (m == 0) return 0;
  if (m == 1) return 1;
  std::vector<int> pos(size(), -1);
  for (std::size_t i = 0; i < m; ++i) pos[verts[i]] = static_cast<int>(i);
  // Laplacian of the induced subgraph with the last row/column deleted.
  std::vector<std::vector<__int128>> lap(m - 1, std::vector<__int128>(m - 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (uint32_t w : adj_[verts[i]]) {
      int jp = pos[w];
      if (jp < 0) continue;
      if (i + 1 < m) lap[i][i] += 1;
      if (i + 1 < m && jp + 1 < static_cast<int>(m)) lap[i][jp] -= 1;
    }
  }
  return bareiss_abs_det(lap);
}

uint64_t SimpleGraph::count_rooted_subtrees(uint32_t root, int u) const {
  if (u < 1) throw std::invalid_argument("count_rooted_subtrees: u >= 1 required");
  if (root >= size()) throw std::invalid_argument("count_rooted_subtrees: bad root");
  if (static_cast<std::size_t>(u) > size()) return 0;
  if (u == 1) return 1;

  uint64_t total = 0;
  std::vector<uint32_t> current{root};
  Bitset in_set(size()), forbidden(size());
  in_set.set(root);

  // Enumerate connected vertex sets containing the root exactly once: branch
  // on each extension vertex, then forbid it for the remaining branches.
  auto rec = [&](auto&& self, const Bitset& forbid) -> void {
    if (current.size() == static_cast<std::size_t>(u)) {
      total += count_spanning_trees(current);
      return;
    }
    Bitset ext = neighborhood(in_set) - in_set - forbid;
    Bitset forbid_next = forbid;
    ext.for_each([&](std::size_t v) {
      in_set.set(v);
      current.push_back(static_cast<uint32_t>(v));
      forbid_next.set(v);
      Bitset branch_forbid = forbid_next;
      branch_forbid.reset(v);
      self(self, branch_forbid);
      current.pop_back();
      in_set.reset(v);
    });
  };
  rec(rec, forbidden);
  return total;
}

LinkCheck check_link_propagation(const SimpleGraph& g, const Bitset& a, const Bitset& t, int j) {
  if (j < 1 || a.none() || t.none()) return LinkCheck::NotApplicable;
  Bitset na = g.neighborhood(a), nt = g.neighborhood(t);
  if (!t.is_subset_of(na) || !a.is_subset_of(nt)) return LinkCheck::NotApplicable;
  if (!g.is_j_linked(a, j)) return LinkCheck::NotApplicable;
  return g.is_j_linked(t, j + 2) ? LinkCheck::Pass : LinkCheck::Fail;
}

bool verify_tree_bound(const SimpleGraph& g, int u) {
  double d = static_cast<double>(g.max_degree());
  double bound = std::pow(std::exp(1.0) * d, u - 1);
  for (uint32_t r = 0; r < g.size(); ++r)
    if (static_cast<double>(g.count_rooted_subtrees(r, u)) > bound) return false;
  return true;
}

}  // namespace ekrlab
