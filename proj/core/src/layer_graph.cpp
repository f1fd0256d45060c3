#include "ekrlab/layer_graph.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ekrlab {

ClosedSetEnumerator::ClosedSetEnumerator(std::size_t universe,
                                         std::function<Bitset(const Bitset&)> closure)
    : n_(universe), cl_(std::move(closure)) {}

std::optional<Bitset> ClosedSetEnumerator::next() {
  if (!started_) {
    started_ = true;
    current_ = cl_(Bitset(n_));
    return current_;
  }
  if (!current_) return std::nullopt;
  // Ganter's Next-Closure in the lectic order induced by ascending rank.
  Bitset a = *current_;
  for (std::size_t ii = n_; ii-- > 0;) {
    if (a.test(ii)) {
      a.reset(ii);
      continue;
    }
    Bitset probe = a;
    probe.set(ii);
    Bitset b = cl_(probe);
    // Accept when b agrees with a below position ii.
    bool ok = true;
    for (std::size_t low = 0; low < ii && ok; ++low)
      if (b.test(low) && !a.test(low)) ok = false;
    if (ok) {
      current_ = b;
      return current_;
    }
  }
  current_ = std::nullopt;
  return std::nullopt;
}

LayerGraph::LayerGraph(int ground, int lower)
    : ground_(ground), lower_(lower), binom_(ground) {
  if (lower < 1 || lower + 1 > ground)
    throw std::invalid_argument("LayerGraph: requires 1 <= lower < lower+1 <= ground");
  if (ground > 30) throw std::invalid_argument("LayerGraph: ground too large");

  const uint64_t n_lo = binom_.choose(ground, lower);
  const uint64_t n_up = binom_.choose(ground, lower + 1);
  if (n_lo > 5000 || n_up > 5000)
    throw std::domain_error("LayerGraph: layers too large to materialize");
  lower_bits_.resize(n_lo);
  upper_bits_.resize(n_up);
  for (uint64_t r = 0; r < n_lo; ++r) lower_bits_[r] = colex_unrank(binom_, ground, lower, r);
  for (uint64_t r = 0; r < n_up; ++r) upper_bits_[r] = colex_unrank(binom_, ground, lower + 1, r);

  up_.assign(n_lo, Bitset(n_up));
  down_.assign(n_up, Bitset(n_lo));
  for (uint64_t j = 0; j < n_up; ++j) {
    uint64_t bits = upper_bits_[j];
    uint64_t rest = bits;
    while (rest) {
      uint64_t low = rest & (~rest + 1);
      uint64_t sub = bits & ~low;
      uint32_t r = static_cast<uint32_t>(colex_rank(binom_, sub));
      down_[j].set(r);
      up_[r].set(j);
      rest &= rest - 1;
    }
  }

  johnson_.assign(n_lo, Bitset(n_lo));
  for (uint64_t i = 0; i < n_lo; ++i)
    for (uint64_t j = i + 1; j < n_lo; ++j)
      if (std::popcount(lower_bits_[i] & lower_bits_[j]) == lower - 1) {
        johnson_[i].set(j);
        johnson_[j].set(i);
      }

  if (ground == 2 * lower) {
    complement_.resize(n_lo);
    const uint64_t all = (uint64_t{1} << ground) - 1;
    for (uint64_t i = 0; i < n_lo; ++i)
      complement_[i] = static_cast<uint32_t>(colex_rank(binom_, all & ~lower_bits_[i]));
  }
}

uint32_t LayerGraph::lower_rank(uint64_t bits) const {
  if (std::popcount(bits) != lower_ || (bits >> ground_) != 0)
    throw std::invalid_argument("LayerGraph::lower_rank: not a lower-layer set");
  return static_cast<uint32_t>(colex_rank(binom_, bits));
}

uint32_t LayerGraph::upper_rank(uint64_t bits) const {
  if (std::popcount(bits) != lower_ + 1 || (bits >> ground_) != 0)
    throw std::invalid_argument("LayerGraph::upper_rank: not an upper-layer set");
  return static_cast<uint32_t>(colex_rank(binom_, bits));
}

Bitset LayerGraph::upper_shadow(const Bitset& a) const {
  if (a.size() != lower_count())
    throw std::invalid_argument("upper_shadow: expects a lower-layer family");
  Bitset g(upper_count());
  a.for_each([&](std::size_t i) { g |= up_[i]; });
  return g;
}

Bitset LayerGraph::lower_shadow(const Bitset& b) const {
  if (b.size() != upper_count())
    throw std::invalid_argument("lower_shadow: expects an upper-layer family");
  Bitset g(lower_count());
  b.for_each([&](std::size_t j) { g |= down_[j]; });
  return g;
}

double LayerGraph::delta(const Bitset& a) const {
  uint64_t sz = a.count();
  if (sz == 0) throw std::invalid_argument("delta: empty family");
  uint64_t g = upper_shadow(a).count();
  return (static_cast<double>(g) - static_cast<double>(sz)) / static_cast<double>(sz);
}

uint64_t LayerGraph::boundary_edges(const Bitset& a) const {
  Bitset g = upper_shadow(a);
  uint64_t edges = 0;
  g.for_each([&](std::size_t j) { edges += down_[j].count_minus(a); });
  return edges;
}

void LayerGraph::require_middle(const char* what) const {
  if (!has_complement_pairing())
    throw std::domain_error(std::string(what) + ": requires ground == 2*lower");
}

double LayerGraph::kk_lower_bound(uint64_t a_size) const {
  require_middle("kk_lower_bound");
  const double n_total = static_cast<double>(lower_count());
  if (a_size < 1 || 2 * a_size > lower_count())
    throw std::invalid_argument("kk_lower_bound: requires 1 <= |A| <= N/2");
  double k = lower_;
  return (std::log(2.0) / k) * std::log2(n_total / (2.0 * static_cast<double>(a_size)));
}

double LayerGraph::lovasz_x(uint64_t a_size) const {
  require_middle("lovasz_x");
  if (a_size < 1) throw std::invalid_argument("lovasz_x: requires |A| >= 1");
  const int k = lower_;
  auto cxk = [&](double x) {
    double v = 1;
    for (int i = 0; i < k; ++i) v *= (x - i) / (k - i);
    return v;
  };
  double lo = k, hi = ground_;
  double target = static_cast<double>(a_size);
  if (cxk(hi) < target) throw std::invalid_argument("lovasz_x: |A| exceeds layer size");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (cxk(mid) < target ? lo : hi) = mid;
    if (hi - lo <= 1e-9 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double LayerGraph::lovasz_bound(uint64_t a_size) const {
  double x = lovasz_x(a_size);
  const int k = lower_;
  double v = 1;
  for (int i = 0; i < k - 1; ++i) v *= (x - i) / (k - 1 - i);
  return v;
}

KkCheck LayerGraph::verify_kk(const Bitset& a) const {
  require_middle("verify_kk");
  KkCheck out;
  uint64_t sz = a.count();
  if (sz == 0) throw std::invalid_argument("verify_kk: empty family");
  out.delta = delta(a);
  out.applicable = 2 * sz <= lower_count();
  if (out.applicable) {
    out.kk_bound = kk_lower_bound(sz);
    out.kk_ok = out.delta >= out.kk_bound - 1e-12;
  }
  out.lovasz_x = lovasz_x(sz);
  out.lovasz_bound = lovasz_bound(sz);
  double shadow = static_cast<double>(upper_shadow(a).count());
  out.lovasz_ok = shadow >= out.lovasz_bound * (1.0 - 1e-9) - 1e-9;
  return out;
}

LayerGraph::VertexSet LayerGraph::neighborhood_iter(const VertexSet& r, int radius) const {
  if (radius < 0) throw std::invalid_argument("neighborhood_iter: radius >= 0");
  if (r.lower.size() != lower_count() || r.upper.size() != upper_count())
    throw std::invalid_argument("neighborhood_iter: layer size mismatch");
  VertexSet cur = r;
  for (int step = 0; step < radius; ++step) {
    Bitset nl = lower_shadow(cur.upper);
    Bitset nu = upper_shadow(cur.lower);
    nl |= cur.lower;
    nu |= cur.upper;
    if (nl == cur.lower && nu == cur.upper) break;
    cur.lower = std::move(nl);
    cur.upper = std::move(nu);
  }
  return cur;
}

int LayerGraph::lower_distance(uint32_t a, uint32_t b) const {
  return 2 * (lower_ - std::popcount(lower_bits_[a] & lower_bits_[b]));
}

int LayerGraph::upper_distance(uint32_t a, uint32_t b) const {
  return 2 * (lower_ + 1 - std::popcount(upper_bits_[a] & upper_bits_[b]));
}

bool LayerGraph::is_linked_upper(const Bitset& b, int j) const {
  auto members = b.to_indices();
  if (members.size() <= 1) return true;
  std::vector<std::size_t> parent(members.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t l = i + 1; l < members.size(); ++l)
      if (upper_distance(members[i], members[l]) <= j) {
        auto p = find(i), q = find(l);
        if (p != q) parent[p] = q;
      }
  std::size_t root = find(0);
  for (std::size_t i = 1; i < members.size(); ++i)
    if (find(i) != root) return false;
  return true;
}

SimpleGraph LayerGraph::johnson_graph() const {
  SimpleGraph g(lower_count());
  for (uint32_t i = 0; i < lower_count(); ++i)
    johnson_[i].for_each([&](std::size_t j) {
      if (j > i) g.add_edge(i, static_cast<uint32_t>(j));
    });
  return g;
}

LinkedPartition LayerGraph::linked_components(const Bitset& a, int j) const {
  if (j < 1) throw std::invalid_argument("linked_components: j >= 1 required");
  auto members = a.to_indices();
  std::vector<std::size_t> parent(members.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t l = i + 1; l < members.size(); ++l)
      if (lower_distance(members[i], members[l]) <= j) {
        auto p = find(i), q = find(l);
        if (p != q) parent[p] = q;
      }
  LinkedPartition part;
  part.j = j;
  std::vector<int> block_of(members.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto r = find(i);
    if (block_of[r] < 0) {
      block_of[r] = static_cast<int>(part.blocks.size());
      part.blocks.emplace_back(lower_count());
    }
    part.blocks[block_of[r]].set(members[i]);
  }
  return part;
}

bool LayerGraph::is_linked(const Bitset& a, int j) const {
  if (a.count() <= 1) return true;
  return linked_components(a, j).blocks.size() == 1;
}

Bitset LayerGraph::closure(const Bitset& a) const {
  Bitset g = upper_shadow(a);
  Bitset c(lower_count());
  for (uint32_t i = 0; i < lower_count(); ++i)
    if (up_[i].is_subset_of(g)) c.set(i);
  return c;
}

bool LayerGraph::is_closed(const Bitset& a) const { return closure(a) == a; }

Bitset LayerGraph::closure_upper(const Bitset& b) const {
  Bitset g = lower_shadow(b);
  Bitset c(upper_count());
  for (uint32_t j = 0; j < upper_count(); ++j)
    if (down_[j].is_subset_of(g)) c.set(j);
  return c;
}

bool LayerGraph::is_closed_upper(const Bitset& b) const { return closure_upper(b) == b; }

ClosedSetEnumerator LayerGraph::enumerate_closed_raw() const {
  if (lower_count() > 70)
    throw std::domain_error(
        "enumerate_closed: lower layer exceeds 70 vertices; use Monte Carlo sampling instead");
  return ClosedSetEnumerator(lower_count(), [this](const Bitset& a) { return closure(a); });
}

ClosedSetEnumerator LayerGraph::enumerate_closed_upper_raw() const {
  if (upper_count() > 70)
    throw std::domain_error(
        "enumerate_closed_upper: upper layer exceeds 70 vertices; use Monte Carlo sampling "
        "instead");
  return ClosedSetEnumerator(upper_count(), [this](const Bitset& b) { return closure_upper(b); });
}

void LayerGraph::for_each_closed(std::size_t min_size,
                                 const std::function<void(const Bitset&)>& f) const {
  auto en = enumerate_closed_raw();
  while (auto a = en.next())
    if (a->count() >= min_size) f(*a);
}

uint32_t LayerGraph::complement_rank(uint32_t lower_idx) const {
  require_middle("complement_rank");
  return complement_[lower_idx];
}

}  // namespace ekrlab
