#include "ekrlab/ekr.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ekrlab {

EkrAnalyzer::EkrAnalyzer(int n, int k) : corr_(n, k), qthreshold_(1.0 / (3.0 * k)) {
  catalog_ = corr_.all_m();
  translated_.resize(n);

  // H* = {T : |T cap [3]| >= 2}, the comparison family of the degree branch.
  const auto& u = corr_.universe();
  for (uint64_t r = 0; r < u->kset_count(); ++r)
    if (std::popcount(u->unrank(r).bits & uint64_t{0b111}) >= 2) ++hstar_size_;

  const auto& sigma = corr_.sigma();
  pairs_.reserve(catalog_.size() * n);
  pair_a_k_.reserve(catalog_.size() * n);
  pair_j_k_.reserve(catalog_.size() * n);
  for (uint32_t h = 0; h < catalog_.size(); ++h) {
    for (int x = 1; x <= n; ++x) {
      PairInfo info;
      info.family = h;
      info.witness = static_cast<uint8_t>(x);
      Bitset a_layer = corr_.decompose(catalog_[h].members, x);
      info.two_linked = sigma.is_linked(a_layer, 2);
      info.delta = sigma.delta(a_layer);  // A^x(H) is nonempty for nonprincipal H
      info.qualifies = info.two_linked && info.delta > qthreshold_;
      pairs_.push_back(info);
      pair_a_k_.push_back(catalog_[h].members.members() - corr_.kx_mask(x));
      pair_j_k_.push_back(corr_.kx_mask(x) - catalog_[h].members.members());
    }
  }

  sigma.for_each_closed(1, [&](const Bitset& a) {
    if (!sigma.is_linked(a, 2)) return;
    ClosedEntry e;
    e.a = a;
    e.g = sigma.upper_shadow(a);
    e.a_size = a.count();
    e.g_size = e.g.count();
    closed2_.push_back(std::move(e));
  });
}

EkrVerdict EkrAnalyzer::verdict(const SampleX& x) const {
  EkrVerdict v;
  const int n = corr_.n();
  for (int e = 1; e <= n; ++e) {
    uint64_t c = x.count_k(corr_.kx_mask(e));
    if (c > v.star_max) {
      v.star_max = c;
      v.best_star = e;
    }
  }
  if (v.best_star == 0) v.best_star = 1;
  for (std::size_t h = 0; h < catalog_.size(); ++h) {
    uint64_t c = x.count_k(catalog_[h].members.members());
    if (c > v.m_max) {
      v.m_max = c;
      v.best_m = static_cast<int64_t>(h);
    }
  }
  v.weak = v.star_max >= v.m_max;
  if (v.m_max < v.star_max) {
    v.strong = true;
  } else if (v.m_max > v.star_max) {
    v.strong = false;
  } else {
    // Tie: every catalog family attaining the maximum must cut the sample in
    // a star restriction.
    v.strong = true;
    for (std::size_t h = 0; h < catalog_.size() && v.strong; ++h) {
      if (x.count_k(catalog_[h].members.members()) != v.m_max) continue;
      Bitset cut = x.members() & catalog_[h].members.members();
      bool star_cut = false;
      for (int e = 1; e <= n && !star_cut; ++e)
        if (cut == (x.members() & corr_.kx_mask(e))) star_cut = true;
      if (!star_cut) v.strong = false;
    }
  }
  return v;
}

EkrVerdict EkrAnalyzer::oracle_verdict(const SampleX& x) {
  const auto& u = x.family().universe();
  if (u->kset_count() > 12)
    throw std::domain_error("oracle_verdict: guarded to C(n,k) <= 12");

  auto ranks = x.members().to_indices();
  const std::size_t m = ranks.size();
  std::vector<uint64_t> bits(m);
  for (std::size_t i = 0; i < m; ++i) bits[i] = u->unrank(ranks[i]).bits;

  // Pairwise disjointness, then sweep all subfamilies.
  std::vector<uint32_t> disj(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && (bits[i] & bits[j]) == 0) disj[i] |= uint32_t{1} << j;

  uint32_t best_size = 0;
  std::vector<uint32_t> best_cliques;  // as masks over sample positions
  for (uint32_t sub = 0; sub < (uint32_t{1} << m); ++sub) {
    bool clique = true;
    for (uint32_t rest = sub; rest && clique; rest &= rest - 1)
      if (disj[std::countr_zero(rest)] & sub) clique = false;
    if (!clique) continue;
    uint32_t sz = static_cast<uint32_t>(std::popcount(sub));
    if (sz > best_size) {
      best_size = sz;
      best_cliques.clear();
    }
    if (sz == best_size) best_cliques.push_back(sub);
  }

  EkrVerdict v;
  v.m_max = best_size;  // oracle reports the max clique size here
  const int n = u->n();
  std::vector<uint32_t> star_cut(n, 0);  // X cap K_y as position masks
  for (std::size_t i = 0; i < m; ++i)
    for (int e = 0; e < n; ++e)
      if (bits[i] >> e & 1) star_cut[e] |= uint32_t{1} << i;
  for (int e = 0; e < n; ++e) {
    uint64_t c = std::popcount(star_cut[e]);
    if (c > v.star_max) {
      v.star_max = c;
      v.best_star = e + 1;
    }
  }
  if (v.best_star == 0) v.best_star = 1;

  v.weak = false;
  v.strong = true;
  for (uint32_t c : best_cliques) {
    bool is_star = false;
    for (int e = 0; e < n && !is_star; ++e)
      if (c == star_cut[e]) is_star = true;
    if (is_star) v.weak = true;
    if (!is_star) v.strong = false;
  }
  if (best_size == 0) {  // empty sample: the empty clique is every star's cut
    v.weak = true;
    v.strong = true;
  }
  return v;
}

bool EkrAnalyzer::event_q_at(const SampleX& x, int witness, bool require_delta_threshold) const {
  const int n = corr_.n();
  if (witness < 1 || witness > n) throw std::invalid_argument("event_q_at: bad witness");
  const uint64_t kx_count = x.count_k(corr_.kx_mask(witness));
  for (std::size_t h = 0; h < catalog_.size(); ++h) {
    const PairInfo& info = pairs_[h * n + (witness - 1)];
    if (!info.two_linked) continue;
    if (require_delta_threshold && !(info.delta > qthreshold_)) continue;
    if (x.count_k(catalog_[h].members.members()) >= kx_count) return true;
  }
  return false;
}

bool EkrAnalyzer::event_q(const SampleX& x, bool require_delta_threshold) const {
  for (int w = 1; w <= corr_.n(); ++w)
    if (event_q_at(x, w, require_delta_threshold)) return true;
  return false;
}

const std::vector<EkrAnalyzer::TranslatedEntry>& EkrAnalyzer::translated(int witness) const {
  auto& slot = translated_[witness - 1];
  if (slot.empty() && !closed2_.empty()) {
    slot.reserve(closed2_.size());
    for (const auto& e : closed2_)
      slot.push_back(TranslatedEntry{corr_.lower_to_k(witness, e.a),
                                     corr_.upper_complement_to_k(witness, e.g)});
  }
  return slot;
}

bool EkrAnalyzer::event_q_ag_at(const SampleX& x, int witness, uint64_t a, uint64_t g) const {
  if (a == 0) throw std::invalid_argument("event_q_ag_at: a >= 1 required");
  double delta = (static_cast<double>(g) - static_cast<double>(a)) / static_cast<double>(a);
  if (!(delta > qthreshold_)) return false;
  const auto& tr = translated(witness);
  for (std::size_t i = 0; i < closed2_.size(); ++i) {
    if (closed2_[i].a_size != a || closed2_[i].g_size != g) continue;
    if (x.count_k(tr[i].g_k) <= x.count_k(tr[i].a_k)) return true;
  }
  return false;
}

std::vector<std::pair<uint64_t, uint64_t>> EkrAnalyzer::qualifying_size_pairs() const {
  std::vector<std::pair<uint64_t, uint64_t>> out;
  for (const auto& e : closed2_) {
    double delta =
        (static_cast<double>(e.g_size) - static_cast<double>(e.a_size)) / static_cast<double>(e.a_size);
    if (delta > qthreshold_) out.push_back({e.a_size, e.g_size});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ReduceWitness EkrAnalyzer::reduce_failure(const SampleX& x) const {
  EkrVerdict v = verdict(x);
  if (v.m_max < v.star_max)
    throw std::logic_error("reduce_failure: sample satisfies the strict star dominance");

  const int n = corr_.n(), k = corr_.k();
  const auto& sigma = corr_.sigma();

  // H with |X∩H| maximum, then the witness of maximum degree in H.
  std::size_t h_best = 0;
  uint64_t best = 0;
  for (std::size_t h = 0; h < catalog_.size(); ++h) {
    uint64_t c = x.count_k(catalog_[h].members.members());
    if (c > best) {
      best = c;
      h_best = h;
    }
  }
  const RankedFamily& h0 = catalog_[h_best].members;
  auto deg = degree_sequence(h0);
  int wx = 1;
  for (int e = 2; e <= n; ++e)
    if (deg[e - 1] > deg[wx - 1]) wx = e;

  ReduceWitness w{RankedFamily(corr_.universe()), wx};
  Bitset a_layer = corr_.decompose(h0, wx);
  w.am_ok = static_cast<uint64_t>(n) * a_layer.count() <=
            static_cast<uint64_t>(k + 1) * h0.size();

  auto fill_counts = [&](const RankedFamily& fam, const Bitset& layer_a) {
    Bitset a_k = corr_.lower_to_k(wx, layer_a);
    Bitset j_k = corr_.kx_mask(wx) - fam.members();
    uint64_t xa = x.count_k(a_k), xj = x.count_k(j_k);
    w.count_ok = xa >= xj;
    w.a_size = layer_a.count();
    Bitset g = sigma.upper_shadow(layer_a);
    w.g_size = g.count();
    w.delta = sigma.delta(layer_a);
    w.delta_above_threshold = w.delta > qthreshold_;
    w.two_linked = sigma.is_linked(layer_a, 2);
    w.layer_a = layer_a;
    w.h = fam;
    w.q_satisfied = w.two_linked && w.delta_above_threshold && w.count_ok;
  };

  auto components = sigma.linked_components(a_layer, 2);
  if (components.blocks.size() == 1) {
    fill_counts(h0, a_layer);
    w.branch = h0.size() > hstar_size_ ? "frankl" : "hstar";
    return w;
  }

  // Split case: try the non-largest components first, as in the chain
  // argument; the pigeonhole over (AJHF) guarantees one of them works.
  w.used_component = true;
  w.branch = "component";
  std::size_t largest = 0;
  for (std::size_t i = 1; i < components.blocks.size(); ++i)
    if (components.blocks[i].count() > components.blocks[largest].count()) largest = i;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < components.blocks.size(); ++i)
    if (i != largest) order.push_back(i);
  order.push_back(largest);

  for (std::size_t idx : order) {
    const Bitset& ai = components.blocks[idx];
    Bitset gi = sigma.upper_shadow(ai);
    uint64_t xa = x.count_k(corr_.lower_to_k(wx, ai));
    uint64_t xj = x.count_k(corr_.upper_complement_to_k(wx, gi));
    if (xa < xj) continue;

    RankedFamily hi = corr_.from_closed(wx, ai);
    Bitset layer = ai;
    if (!is_maximal_intersecting(hi)) {
      // The component need not induce a maximal family when an outside
      // vertex is blocked only by a complement in another component; its
      // shadow-preserving completion is maximal and keeps the counts.
      w.completed = true;
      hi = complete_to_maximal(std::move(hi));
      if (is_principal(hi)) continue;  // completion collapsed to a star
      layer = corr_.decompose(hi, wx);
    }
    w.component_index = idx;
    fill_counts(hi, layer);
    return w;
  }
  throw std::logic_error(
      "reduce_failure: no component satisfied the count inequality; the chain argument rules "
      "this out");
}

}  // namespace ekrlab
