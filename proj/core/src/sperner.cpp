#include "ekrlab/sperner.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "ekrlab/layer_graph.hpp"
#include "ekrlab/rng.hpp"

namespace ekrlab {

CubeSample::CubeSample(int n, Bitset members, double p, uint64_t seed)
    : n_(n), members_(std::move(members)), p_(p), seed_(seed) {
  if (n < 1 || n > 20) throw std::invalid_argument("CubeSample: n in [1,20] required");
  if (members_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("CubeSample: bitset must cover 2^n subsets");
}

CubeSample CubeSample::draw(int n, double p, uint64_t master_seed, uint64_t trial) {
  if (n < 1 || n > 20) throw std::invalid_argument("CubeSample::draw: n in [1,20] required");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("CubeSample::draw: p in [0,1] required");
  SplitRng rng(master_seed, trial);
  return CubeSample(n, rng.bernoulli_mask(std::size_t{1} << n, p), p, master_seed);
}

CubeSample CubeSample::of_masks(int n, const std::vector<uint32_t>& masks) {
  Bitset b(std::size_t{1} << n);
  for (uint32_t m : masks) {
    if (m >> n) throw std::invalid_argument("CubeSample::of_masks: mask out of range");
    b.set(m);
  }
  return CubeSample(n, std::move(b), -1.0, 0);
}

std::vector<uint32_t> CubeSample::masks() const { return members_.to_indices(); }

uint64_t CubeSample::layer_count(int level) const {
  uint64_t c = 0;
  members_.for_each([&](std::size_t m) {
    if (std::popcount(static_cast<uint32_t>(m)) == level) ++c;
  });
  return c;
}

uint64_t CubeSample::layer_max() const {
  return std::max(layer_count(n_ / 2), layer_count((n_ + 1) / 2));
}

WidthResult width(const CubeSample& x) {
  auto masks = x.masks();
  const std::size_t m = masks.size();
  if (m > 5000) throw std::domain_error("width: guarded to |X| <= 5000");

  WidthResult res;
  res.layer_max = x.layer_max();
  if (m == 0) {
    res.certified = true;
    return res;
  }

  std::sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
    int la = std::popcount(a), lb = std::popcount(b);
    return la != lb ? la < lb : a < b;
  });
  auto comparable = [&](std::size_t u, std::size_t v) {
    return masks[u] != masks[v] && (masks[u] & ~masks[v]) == 0;  // masks[u] strictly below
  };

  // Maximum matching on strict containment (left = predecessor copies).
  std::vector<int> match_l(m, -1), match_r(m, -1);
  for (std::size_t u = 0; u < m; ++u)  // greedy seed
    for (std::size_t v = u + 1; v < m; ++v)
      if (match_r[v] < 0 && comparable(u, v)) {
        match_l[u] = static_cast<int>(v);
        match_r[v] = static_cast<int>(u);
        break;
      }
  std::vector<char> seen(m);
  auto augment = [&](auto&& self, std::size_t u) -> bool {
    for (std::size_t v = u + 1; v < m; ++v) {
      if (!comparable(u, v) || seen[v]) continue;
      seen[v] = 1;
      if (match_r[v] < 0 || self(self, static_cast<std::size_t>(match_r[v]))) {
        match_l[u] = static_cast<int>(v);
        match_r[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  uint64_t matching = 0;
  for (std::size_t u = 0; u < m; ++u)
    if (match_l[u] >= 0) ++matching;
  for (std::size_t u = 0; u < m; ++u) {
    if (match_l[u] >= 0) continue;
    std::fill(seen.begin(), seen.end(), 0);
    if (augment(augment, u)) ++matching;
  }
  res.width = m - matching;

  // Koenig: alternating reachability from unmatched left copies.
  std::vector<char> zl(m, 0), zr(m, 0);
  std::vector<std::size_t> queue;
  for (std::size_t u = 0; u < m; ++u)
    if (match_l[u] < 0) {
      zl[u] = 1;
      queue.push_back(u);
    }
  while (!queue.empty()) {
    std::size_t u = queue.back();
    queue.pop_back();
    for (std::size_t v = u + 1; v < m; ++v) {
      if (!comparable(u, v) || zr[v]) continue;
      if (match_l[u] == static_cast<int>(v)) continue;  // only non-matching edges leftward
      zr[v] = 1;
      int w = match_r[v];
      if (w >= 0 && !zl[w]) {
        zl[w] = 1;
        queue.push_back(static_cast<std::size_t>(w));
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (zl[i] && !zr[i]) res.antichain.push_back(masks[i]);

  // Chains: follow matched successors from the un-entered elements.
  for (std::size_t v = 0; v < m; ++v) {
    if (match_r[v] >= 0) continue;
    std::vector<uint32_t> chain;
    int cur = static_cast<int>(v);
    while (cur >= 0) {
      chain.push_back(masks[cur]);
      cur = match_l[cur];
    }
    res.chains.push_back(std::move(chain));
  }

  // Cross-validation of the certificate pair.
  bool ok = res.antichain.size() == res.width && res.chains.size() == res.width;
  std::size_t covered = 0;
  for (const auto& ch : res.chains) {
    covered += ch.size();
    for (std::size_t i = 0; i + 1 < ch.size(); ++i)
      if ((ch[i] & ~ch[i + 1]) != 0 || ch[i] == ch[i + 1]) ok = false;
  }
  if (covered != m) ok = false;
  for (std::size_t i = 0; i < res.antichain.size() && ok; ++i)
    for (std::size_t j = i + 1; j < res.antichain.size(); ++j) {
      uint32_t a = res.antichain[i], b = res.antichain[j];
      if ((a & ~b) == 0 || (b & ~a) == 0) ok = false;
    }
  res.certified = ok;
  return res;
}

bool check_wwxx(const CubeSample& x) {
  WidthResult w = width(x);
  return w.width == w.layer_max;
}

namespace {

void cube_of(int n, const LayerGraph& lg, const Bitset& ranks, bool upper, uint64_t out[2]) {
  out[0] = out[1] = 0;
  ranks.for_each([&](std::size_t r) {
    uint64_t pos = upper ? lg.upper_bits(static_cast<uint32_t>(r))
                         : lg.lower_bits(static_cast<uint32_t>(r));
    out[pos >> 6] |= uint64_t{1} << (pos & 63);
  });
}

uint64_t count_and2(const Bitset& members, const uint64_t mask[2]) {
  const auto& w = members.words();
  uint64_t c = std::popcount(w[0] & mask[0]);
  if (w.size() > 1) c += std::popcount(w[1] & mask[1]);
  return c;
}

Bitset ranks_of_cube(int n, int level, const uint64_t cube[2]) {
  BinomTable binom(n);
  Bitset out(binom.choose(n, level));
  for (int word = 0; word < 2; ++word) {
    uint64_t rest = cube[word];
    while (rest) {
      uint64_t pos = (static_cast<uint64_t>(word) << 6) + std::countr_zero(rest);
      out.set(colex_rank(binom, pos));
      rest &= rest - 1;
    }
  }
  return out;
}

}  // namespace

void ShadowEventChecker::add_entry(std::vector<Entry>& out, int level, const Bitset& set_cube,
                                   const Bitset& shadow_cube) {
  Entry e;
  e.level = level;
  const auto& sw = set_cube.words();
  const auto& gw = shadow_cube.words();
  e.set_cube[0] = sw[0];
  e.set_cube[1] = sw.size() > 1 ? sw[1] : 0;
  e.shadow_cube[0] = gw[0];
  e.shadow_cube[1] = gw.size() > 1 ? gw[1] : 0;
  out.push_back(e);
}

ShadowEventChecker::ShadowEventChecker(int n) : n_(n) {
  if (n < 2 || n > 7)
    throw std::domain_error("ShadowEventChecker: event enumeration is guarded to 2 <= n <= 7");
  BinomTable binom(n);
  const bool odd = n % 2 == 1;
  const int k = n / 2;
  half_middle_ = binom.choose(n, k) / 2;
  // Past this the odd middle level has too many closed sets to enumerate.
  middle_lazy_ = odd && binom.choose(n, k) > 25;
  if (odd) middle_ = std::make_shared<LayerGraph>(n, k);

  auto cube_bit = [&](uint64_t pos) {
    Bitset b(std::size_t{1} << n);
    b.set(pos);
    return b;
  };

  // Upward events: levels strictly below the middle, plus level k at odd n
  // with the half-middle size cap (enumerated only when feasible).
  for (int i = 0; i < (n + 1) / 2; ++i) {
    const bool middle_regime = odd && i == k;
    if (middle_regime && middle_lazy_) continue;
    if (i == 0) {
      // Single nonempty closed set {emptyset}; its shadow is all singletons.
      Bitset set_cube = cube_bit(0);
      Bitset shadow(std::size_t{1} << n);
      for (int b = 0; b < n; ++b) shadow.set(uint64_t{1} << b);
      add_entry(x1_, 0, set_cube, shadow);
      continue;
    }
    LayerGraph lg(n, i);
    auto en = lg.enumerate_closed_raw();
    while (auto a = en.next()) {
      if (a->none()) continue;
      if (middle_regime && a->count() > half_middle_) continue;
      uint64_t set_raw[2], sh_raw[2];
      cube_of(n, lg, *a, false, set_raw);
      cube_of(n, lg, lg.upper_shadow(*a), true, sh_raw);
      Entry e;
      e.level = i;
      e.set_cube[0] = set_raw[0];
      e.set_cube[1] = set_raw[1];
      e.shadow_cube[0] = sh_raw[0];
      e.shadow_cube[1] = sh_raw[1];
      x1_.push_back(e);
    }
  }

  // Downward events: mirrored above the middle; closure taken with respect
  // to lower shadows (the upper side of the bigraph one level down).
  for (int i = n; i > n / 2; --i) {
    const bool middle_regime = odd && i == k + 1;
    if (middle_regime && middle_lazy_) continue;
    if (i == n) {
      Bitset set_cube = cube_bit((uint64_t{1} << n) - 1);
      Bitset shadow(std::size_t{1} << n);
      for (int b = 0; b < n; ++b) shadow.set(((uint64_t{1} << n) - 1) & ~(uint64_t{1} << b));
      add_entry(x2_, n, set_cube, shadow);
      continue;
    }
    LayerGraph lg(n, i - 1);
    auto en = lg.enumerate_closed_upper_raw();
    while (auto b = en.next()) {
      if (b->none()) continue;
      if (middle_regime && b->count() > half_middle_) continue;
      uint64_t set_raw[2], sh_raw[2];
      cube_of(n, lg, *b, true, set_raw);
      cube_of(n, lg, lg.lower_shadow(*b), false, sh_raw);
      Entry e;
      e.level = i;
      e.set_cube[0] = set_raw[0];
      e.set_cube[1] = set_raw[1];
      e.shadow_cube[0] = sh_raw[0];
      e.shadow_cube[1] = sh_raw[1];
      x2_.push_back(e);
    }
  }
}

ShadowEventReport ShadowEventChecker::check(const CubeSample& x) const {
  if (x.n() != n_) throw std::invalid_argument("ShadowEventChecker: sample n mismatch");
  ShadowEventReport rep;
  rep.middle_lazy = middle_lazy_;
  for (const auto& e : x1_) {
    ++rep.x1_checked;
    if (count_and2(x.members(), e.shadow_cube) <= count_and2(x.members(), e.set_cube)) {
      rep.x1_holds = false;
      if (rep.x1_violations.size() < 16)
        rep.x1_violations.push_back({e.level, ranks_of_cube(n_, e.level, e.set_cube)});
    }
  }
  for (const auto& e : x2_) {
    ++rep.x2_checked;
    if (count_and2(x.members(), e.shadow_cube) <= count_and2(x.members(), e.set_cube)) {
      rep.x2_holds = false;
      if (rep.x2_violations.size() < 16)
        rep.x2_violations.push_back({e.level, ranks_of_cube(n_, e.level, e.set_cube)});
    }
  }
  return rep;
}

void ShadowEventChecker::check_middle_instances(const CubeSample& x,
                                                const std::vector<uint32_t>& antichain,
                                                ShadowEventReport& rep) const {
  if (n_ % 2 == 0 || !middle_lazy_) return;
  const int k = n_ / 2;
  const LayerGraph& lg = *middle_;
  Bitset a_ranks(lg.lower_count()), b_ranks(lg.upper_count());
  for (uint32_t mask : antichain) {
    int lvl = std::popcount(mask);
    if (lvl == k) a_ranks.set(lg.lower_rank(mask));
    if (lvl == k + 1) b_ranks.set(lg.upper_rank(mask));
  }
  auto count_cube = [&](const Bitset& ranks, bool upper) {
    uint64_t raw[2];
    cube_of(n_, lg, ranks, upper, raw);
    return count_and2(x.members(), raw);
  };
  // (X1) at the closure of the lower part, when the size regime applies.
  Bitset abar = lg.closure(a_ranks);
  if (abar.any() && abar.count() <= half_middle_) {
    ++rep.middle_checked;
    if (count_cube(lg.upper_shadow(abar), true) <= count_cube(abar, false))
      rep.middle_instances_ok = false;
  }
  // (X2) at the lower-shadow closure of the upper part.
  Bitset bbar = lg.closure_upper(b_ranks);
  if (bbar.any() && bbar.count() <= half_middle_) {
    ++rep.middle_checked;
    if (count_cube(lg.lower_shadow(bbar), false) <= count_cube(bbar, true))
      rep.middle_instances_ok = false;
  }
}

ReplayResult replay_width_argument(const CubeSample& x, const WidthResult& w,
                                   const ShadowEventReport& events) {
  ReplayResult out;
  const int n = x.n();
  const bool events_hold = events.holds();
  out.implication_ok = !events_hold || w.width == w.layer_max;

  // Attempt the replacement step on the certificate antichain: pick the
  // lowest level below the middle (or mirror above) and swap in the sample
  // part of its upper (lower) shadow. When the events hold this must never
  // produce a larger antichain, because the certificate is maximum.
  if (!w.antichain.empty()) {
    int lo_level = n + 1, hi_level = -1;
    for (uint32_t mask : w.antichain) {
      lo_level = std::min(lo_level, std::popcount(mask));
      hi_level = std::max(hi_level, std::popcount(mask));
    }
    auto build_replacement = [&](bool upward, int level) {
      std::vector<uint32_t> kept, shadow_in_x;
      Bitset shadow(std::size_t{1} << n);
      for (uint32_t mask : w.antichain) {
        if (std::popcount(mask) != level) {
          kept.push_back(mask);
          continue;
        }
        if (upward) {
          for (int b = 0; b < n; ++b)
            if (!(mask >> b & 1)) shadow.set(mask | (uint32_t{1} << b));
        } else {
          for (int b = 0; b < n; ++b)
            if (mask >> b & 1) shadow.set(mask & ~(uint32_t{1} << b));
        }
      }
      (shadow & x.members()).for_each([&](std::size_t mm) {
        shadow_in_x.push_back(static_cast<uint32_t>(mm));
      });
      std::vector<uint32_t> cand = kept;
      cand.insert(cand.end(), shadow_in_x.begin(), shadow_in_x.end());
      if (cand.size() <= w.antichain.size()) return false;
      for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
          uint32_t a = cand[i], b = cand[j];
          if (a == b || (a & ~b) == 0 || (b & ~a) == 0) return false;
        }
      return true;
    };
    if (lo_level < n / 2) out.replacement_found |= build_replacement(true, lo_level);
    if (hi_level > (n + 1) / 2) out.replacement_found |= build_replacement(false, hi_level);
  }

  // Odd n: closures of the two middle parts of a maximum antichain form an
  // antichain of the full cube, and the smaller closure admits a replacement.
  if (n % 2 == 1 && n <= 9 && events_hold && w.width == w.layer_max) {
    out.odd_case_checked = true;
    const int k = n / 2;
    LayerGraph lg(n, k);
    Bitset a_ranks(lg.lower_count()), b_ranks(lg.upper_count());
    for (uint32_t mask : w.antichain) {
      int lvl = std::popcount(mask);
      if (lvl == k) a_ranks.set(lg.lower_rank(mask));
      if (lvl == k + 1) b_ranks.set(lg.upper_rank(mask));
      if (lvl != k && lvl != k + 1) out.closures_antichain = false;  // outside middle: handled above
    }
    Bitset abar = lg.closure(a_ranks);
    Bitset bbar = lg.closure_upper(b_ranks);
    // Cross containments a < b between the closures.
    abar.for_each([&](std::size_t ra) {
      uint64_t abit = lg.lower_bits(static_cast<uint32_t>(ra));
      bbar.for_each([&](std::size_t rb) {
        uint64_t bbit = lg.upper_bits(static_cast<uint32_t>(rb));
        if ((abit & ~bbit) == 0) out.closures_antichain = false;
      });
    });
    out.middle_tie = x.layer_count(k) == x.layer_count(k + 1);
    out.unique_candidate = !out.middle_tie;
  }
  return out;
}

}  // namespace ekrlab
