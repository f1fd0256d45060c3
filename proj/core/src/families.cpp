#include "ekrlab/families.hpp"

#include <bit>
#include <stdexcept>

namespace ekrlab {

RankedFamily star(const UniversePtr& u, int x) {
  if (x < 1 || x > u->n()) throw std::invalid_argument("star: element out of range");
  RankedFamily f(u);
  const uint64_t bit = uint64_t{1} << (x - 1);
  for (uint64_t r = 0; r < u->kset_count(); ++r)
    if (u->unrank(r).bits & bit) f.insert_rank(r);
  return f;
}

bool is_intersecting(const RankedFamily& f) {
  std::vector<uint64_t> masks;
  masks.reserve(f.size());
  f.for_each_bits([&](uint64_t b) { masks.push_back(b); });
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j)
      if ((masks[i] & masks[j]) == 0) return false;
  return true;
}

bool is_maximal_intersecting(const RankedFamily& f) {
  if (!is_intersecting(f)) return false;
  const auto& u = f.universe();
  std::vector<uint64_t> masks;
  f.for_each_bits([&](uint64_t b) { masks.push_back(b); });
  for (uint64_t r = 0; r < u->kset_count(); ++r) {
    if (f.contains_rank(r)) continue;
    uint64_t cand = u->unrank(r).bits;
    bool meets_all = true;
    for (uint64_t m : masks)
      if ((cand & m) == 0) {
        meets_all = false;
        break;
      }
    if (meets_all) return false;  // could be added
  }
  return true;
}

bool is_principal(const RankedFamily& f) {
  const auto& u = f.universe();
  for (int x = 1; x <= u->n(); ++x)
    if (f == star(u, x)) return true;
  return false;
}

std::vector<uint64_t> degree_sequence(const RankedFamily& f) {
  std::vector<uint64_t> deg(f.universe()->n(), 0);
  f.for_each_bits([&](uint64_t b) {
    while (b) {
      deg[std::countr_zero(b)]++;
      b &= b - 1;
    }
  });
  return deg;
}

uint64_t max_degree(const RankedFamily& f) {
  uint64_t best = 0;
  for (uint64_t d : degree_sequence(f)) best = std::max(best, d);
  return best;
}

RankedFamily frankl_family(const UniversePtr& u, int i) {
  if (i < 3 || i > u->k() + 1) throw std::invalid_argument("frankl_family: requires 3 <= i <= k+1");
  const uint64_t one = 1;                                 // element 1
  const uint64_t mid = ((uint64_t{1} << i) - 1) & ~one;   // elements 2..i
  RankedFamily f(u);
  for (uint64_t r = 0; r < u->kset_count(); ++r) {
    uint64_t b = u->unrank(r).bits;
    if (((b & one) && (b & mid)) || ((b & mid) == mid)) f.insert_rank(r);
  }
  return f;
}

RankedFamily hilton_milner(const UniversePtr& u, int x, uint64_t a_bits) {
  if (x < 1 || x > u->n()) throw std::invalid_argument("hilton_milner: element out of range");
  const uint64_t xbit = uint64_t{1} << (x - 1);
  if (a_bits & xbit) throw std::invalid_argument("hilton_milner: requires x not in A");
  if (std::popcount(a_bits) != u->k() || (a_bits >> u->n()) != 0)
    throw std::invalid_argument("hilton_milner: A must be a k-subset of [n]");
  RankedFamily f(u);
  f.insert(a_bits);
  for (uint64_t r = 0; r < u->kset_count(); ++r) {
    uint64_t b = u->unrank(r).bits;
    if ((b & xbit) && (b & a_bits)) f.insert_rank(r);
  }
  return f;
}

RankedFamily complete_to_maximal(RankedFamily f) {
  if (!is_intersecting(f)) throw std::invalid_argument("complete_to_maximal: input not intersecting");
  const auto& u = f.universe();
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<uint64_t> masks;
    f.for_each_bits([&](uint64_t b) { masks.push_back(b); });
    for (uint64_t r = 0; r < u->kset_count() && !grew; ++r) {
      if (f.contains_rank(r)) continue;
      uint64_t cand = u->unrank(r).bits;
      bool meets_all = true;
      for (uint64_t m : masks)
        if ((cand & m) == 0) {
          meets_all = false;
          break;
        }
      if (meets_all) {
        f.insert_rank(r);
        grew = true;
      }
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// MCorrespondence
// ---------------------------------------------------------------------------

MCorrespondence::MCorrespondence(int n, int k)
    : n_(n), k_(k), u_(make_universe(n, k)), sigma_(std::make_shared<LayerGraph>(2 * k, k)) {
  if (n != 2 * k + 1) throw std::invalid_argument("MCorrespondence: requires n == 2k+1");

  kx_.assign(n, Bitset(u_->kset_count()));
  lower_to_k_.assign(n, {});
  upper_comp_k_.assign(n, {});
  const uint64_t all_n = (uint64_t{1} << n) - 1;

  for (int x = 1; x <= n; ++x) {
    const uint64_t xbit = uint64_t{1} << (x - 1);
    for (uint64_t r = 0; r < u_->kset_count(); ++r)
      if (u_->unrank(r).bits & xbit) kx_[x - 1].set(r);

    // Order-preserving relabeling [0, 2k) -> [n] \ {x}.
    auto relabel = [&](uint64_t sigma_bits) {
      uint64_t out = 0;
      while (sigma_bits) {
        int j = std::countr_zero(sigma_bits);
        out |= uint64_t{1} << (j < x - 1 ? j : j + 1);
        sigma_bits &= sigma_bits - 1;
      }
      return out;
    };
    auto& lo = lower_to_k_[x - 1];
    lo.resize(sigma_->lower_count());
    for (uint32_t r = 0; r < sigma_->lower_count(); ++r)
      lo[r] = static_cast<uint32_t>(u_->rank(relabel(sigma_->lower_bits(r))));
    auto& up = upper_comp_k_[x - 1];
    up.resize(sigma_->upper_count());
    for (uint32_t r = 0; r < sigma_->upper_count(); ++r)
      up[r] = static_cast<uint32_t>(u_->rank(all_n & ~relabel(sigma_->upper_bits(r))));
  }
}

const Bitset& MCorrespondence::kx_mask(int x) const {
  if (x < 1 || x > n_) throw std::invalid_argument("kx_mask: element out of range");
  return kx_[x - 1];
}

Bitset MCorrespondence::lower_to_k(int x, const Bitset& a) const {
  if (x < 1 || x > n_ || a.size() != sigma_->lower_count())
    throw std::invalid_argument("lower_to_k: expects a lower-layer family and a valid witness");
  Bitset out(u_->kset_count());
  const auto& tab = lower_to_k_[x - 1];
  a.for_each([&](std::size_t r) { out.set(tab[r]); });
  return out;
}

Bitset MCorrespondence::upper_complement_to_k(int x, const Bitset& b) const {
  if (x < 1 || x > n_ || b.size() != sigma_->upper_count())
    throw std::invalid_argument(
        "upper_complement_to_k: expects an upper-layer family and a valid witness");
  Bitset out(u_->kset_count());
  const auto& tab = upper_comp_k_[x - 1];
  b.for_each([&](std::size_t r) { out.set(tab[r]); });
  return out;
}

Bitset MCorrespondence::k_to_lower(int x, const Bitset& f) const {
  Bitset out(sigma_->lower_count());
  const uint64_t xbit = uint64_t{1} << (x - 1);
  f.for_each([&](std::size_t r) {
    uint64_t bits = u_->unrank(r).bits;
    if (bits & xbit) throw std::invalid_argument("k_to_lower: member contains the witness");
    // Inverse relabeling [n] \ {x} -> [0, 2k).
    uint64_t sig = 0;
    while (bits) {
      int j = std::countr_zero(bits);
      sig |= uint64_t{1} << (j < x - 1 ? j : j - 1);
      bits &= bits - 1;
    }
    out.set(sigma_->lower_rank(sig));
  });
  return out;
}

Bitset MCorrespondence::decompose(const RankedFamily& h, int x) const {
  return k_to_lower(x, h.members() - kx_mask(x));
}

RankedFamily MCorrespondence::from_closed(int x, const Bitset& a) const {
  if (a.none())
    throw std::invalid_argument(
        "from_closed: empty A yields the principal family K_x, which is excluded");
  Bitset g = sigma_->upper_shadow(a);
  Bitset j = upper_complement_to_k(x, g);
  Bitset members = (kx_mask(x) - j) | lower_to_k(x, a);
  return RankedFamily(u_, std::move(members));
}

bool MCorrespondence::has_complement_pair(const Bitset& a) const {
  bool found = false;
  a.for_each([&](std::size_t r) {
    if (a.test(sigma_->complement_rank(static_cast<uint32_t>(r)))) found = true;
  });
  return found;
}

bool MCorrespondence::is_full_layer_star(const Bitset& a) const {
  if (a.none()) return false;
  uint64_t common = ~uint64_t{0};
  a.for_each([&](std::size_t r) { common &= sigma_->lower_bits(static_cast<uint32_t>(r)); });
  if (!common) return false;
  return a.count() == sigma_->binom().choose(2 * k_ - 1, k_ - 1);
}

bool MCorrespondence::is_clique_closed(const Bitset& a) const {
  if (a.none() || has_complement_pair(a)) return false;
  Bitset g = sigma_->upper_shadow(a);
  for (uint32_t z = 0; z < sigma_->lower_count(); ++z) {
    if (a.test(z)) continue;
    if (sigma_->up_mask(z).is_subset_of(g) && !a.test(sigma_->complement_rank(z))) return false;
  }
  return true;
}

void MCorrespondence::expand_closed(const Bitset& closed,
                                    const std::function<void(const Bitset&)>& emit) const {
  // Complement pairs fully inside the closed set; exactly one of each pair is
  // dropped, subject to the shadow staying intact.
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  closed.for_each([&](std::size_t r) {
    uint32_t c = sigma_->complement_rank(static_cast<uint32_t>(r));
    if (r < c && closed.test(c)) pairs.push_back({static_cast<uint32_t>(r), c});
  });
  if (pairs.empty()) {
    emit(closed);
    return;
  }
  // cover[t] = members of the current candidate below upper vertex t.
  std::vector<int> cover(sigma_->upper_count(), 0);
  closed.for_each([&](std::size_t r) {
    sigma_->up_mask(static_cast<uint32_t>(r)).for_each([&](std::size_t t) { ++cover[t]; });
  });
  Bitset dropped(sigma_->lower_count());

  auto try_drop = [&](uint32_t z) {
    const Bitset& up = sigma_->up_mask(z);
    bool ok = true;
    up.for_each([&](std::size_t t) {
      if (cover[t] == 1) ok = false;
    });
    if (!ok) return false;
    up.for_each([&](std::size_t t) { --cover[t]; });
    dropped.set(z);
    return true;
  };
  auto undo_drop = [&](uint32_t z) {
    sigma_->up_mask(z).for_each([&](std::size_t t) { ++cover[t]; });
    dropped.reset(z);
  };

  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == pairs.size()) {
      emit(closed - dropped);
      return;
    }
    for (uint32_t z : {pairs[idx].first, pairs[idx].second}) {
      if (try_drop(z)) {
        self(self, idx + 1);
        undo_drop(z);
      }
    }
  };
  rec(rec, 0);
}

void MCorrespondence::for_each_m(const std::function<void(MaximalFamily&&)>& f) const {
  auto en = sigma_->enumerate_closed_raw();
  while (auto b = en.next()) {
    if (b->none()) continue;
    expand_closed(*b, [&](const Bitset& a) {
      if (is_full_layer_star(a)) return;
      MaximalFamily m;
      m.witness_x = n_;
      m.layer_a = a;
      m.members = from_closed(n_, a);
      f(std::move(m));
    });
  }
}

std::vector<MaximalFamily> MCorrespondence::all_m() const {
  if (k_ > 4)
    throw std::domain_error("all_m: catalog enumeration is guarded to k <= 4");
  std::vector<MaximalFamily> out;
  for_each_m([&](MaximalFamily&& m) { out.push_back(std::move(m)); });
  return out;
}

FranklCheckResult check_frankl(const MCorrespondence& corr,
                               const std::vector<MaximalFamily>& catalog, int i) {
  FranklCheckResult res;
  RankedFamily fi = frankl_family(corr.universe(), i);
  res.family_size = fi.size();
  res.family_max_degree = max_degree(fi);
  auto consider = [&](const RankedFamily& h) {
    ++res.families_compared;
    if (h.size() > res.family_size && max_degree(h) <= res.family_max_degree) {
      ++res.violations;
      res.pass = false;
    }
  };
  for (int x = 1; x <= corr.n(); ++x) consider(star(corr.universe(), x));
  for (const auto& m : catalog) consider(m.members);
  return res;
}

}  // namespace ekrlab
