#include "ekrlab/containers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ekrlab/rng.hpp"

namespace ekrlab {

double ContainerParams::q_t(int k) const {
  return std::min(1.0, 16.0 * std::pow(k, zeta - 3.0) * std::log(static_cast<double>(k)));
}

double ContainerParams::q_u(int k) const {
  return std::min(1.0, 4.0 * std::log(static_cast<double>(k)) / k);
}

double ContainerParams::g0_threshold(int k) const {
  return 0.25 * std::pow(static_cast<double>(k), 3.0 - zeta);
}

uint64_t good_walk_count(const LayerGraph& lg, const Bitset& a, uint32_t upper_v) {
  uint64_t total = 0;
  (lg.down_mask(upper_v) & a).for_each([&](std::size_t x1) {
    lg.up_mask(static_cast<uint32_t>(x1)).for_each([&](std::size_t y) {
      total += lg.down_mask(static_cast<uint32_t>(y)).count_and(a);
    });
  });
  return total;
}

Bitset g0_set(const LayerGraph& lg, const Bitset& a, const ContainerParams& params) {
  const double threshold = params.g0_threshold(lg.lower_k());
  Bitset g = lg.upper_shadow(a);
  Bitset out(lg.upper_count());
  g.for_each([&](std::size_t v) {
    if (static_cast<double>(good_walk_count(lg, a, static_cast<uint32_t>(v))) >= threshold)
      out.set(v);
  });
  return out;
}

namespace {

uint64_t edges_upper_lower(const LayerGraph& lg, const Bitset& uppers, const Bitset& lowers) {
  uint64_t e = 0;
  uppers.for_each([&](std::size_t y) { e += lg.down_mask(static_cast<uint32_t>(y)).count_and(lowers); });
  return e;
}

uint64_t edges_upper_colower(const LayerGraph& lg, const Bitset& uppers, const Bitset& lowers) {
  uint64_t e = 0;
  uppers.for_each([&](std::size_t y) { e += lg.down_mask(static_cast<uint32_t>(y)).count_minus(lowers); });
  return e;
}

}  // namespace

Filtration filtration(const LayerGraph& lg, const Bitset& a, const ContainerParams& params) {
  if (a.none()) throw std::invalid_argument("filtration: empty family");
  const int k = lg.lower_k();
  const double k1t = std::pow(static_cast<double>(k), 1.0 - params.theta());

  Filtration f;
  f.g = lg.upper_shadow(a);
  f.g0 = g0_set(lg, a, params);

  f.h = Bitset(lg.upper_count());
  f.g.for_each([&](std::size_t y) {
    if (static_cast<double>(lg.down_mask(static_cast<uint32_t>(y)).count_and(a)) < k1t) f.h.set(y);
  });

  f.b = Bitset(lg.lower_count());
  a.for_each([&](std::size_t x) {
    if (2 * lg.up_mask(static_cast<uint32_t>(x)).count_and(f.h) > static_cast<std::size_t>(k))
      f.b.set(x);
  });

  Bitset a_minus_b = a - f.b;
  f.i = Bitset(lg.upper_count());
  (f.g - f.h).for_each([&](std::size_t y) {
    if (static_cast<double>(lg.down_mask(static_cast<uint32_t>(y)).count_and(a_minus_b)) < k1t / 2)
      f.i.set(y);
  });

  Bitset hi = f.h | f.i;
  f.c = Bitset(lg.lower_count());
  a_minus_b.for_each([&](std::size_t x) {
    if (4 * lg.up_mask(static_cast<uint32_t>(x)).count_and(hi) > static_cast<std::size_t>(k))
      f.c.set(x);
  });
  return f;
}

FiltrationCheck check_filtration(const LayerGraph& lg, const Bitset& a,
                                 const ContainerParams& params) {
  const int k = lg.lower_k();
  const double k1t = std::pow(static_cast<double>(k), 1.0 - params.theta());
  Filtration f = filtration(lg, a, params);
  FiltrationCheck out;

  const uint64_t a_size = a.count(), g_size = f.g.count();
  const uint64_t e_h_out = edges_upper_colower(lg, f.h, a);
  const uint64_t e_g_out = edges_upper_colower(lg, f.g, a);
  out.degree_identity =
      e_g_out == static_cast<uint64_t>(k + 1) * g_size - static_cast<uint64_t>(k) * a_size;
  out.h_edge_chain = (k + 1 - k1t) * static_cast<double>(f.h.count()) <=
                         static_cast<double>(e_h_out) + 1e-9 &&
                     e_h_out <= e_g_out;

  const uint64_t e_bh = edges_upper_lower(lg, f.h, f.b);
  const uint64_t b_size = f.b.count(), h_size = f.h.count();
  bool b1 = b_size == 0 ? e_bh == 0
                        : 2 * e_bh > static_cast<uint64_t>(k) * b_size;
  bool b2 = h_size == 0 ? e_bh == 0 : static_cast<double>(e_bh) < k1t * static_cast<double>(h_size);
  out.b_chain = b1 && b2;

  const uint64_t e_ib = edges_upper_lower(lg, f.i, f.b);
  const uint64_t i_size = f.i.count();
  bool i1 = i_size == 0 || k1t * static_cast<double>(i_size) < 2.0 * static_cast<double>(e_ib);
  bool i2 = b_size == 0 ? (i_size == 0 && e_ib == 0)
                        : 2 * e_ib < static_cast<uint64_t>(k) * b_size;
  out.i_chain = i1 && i2;

  Bitset hi = f.h | f.i;
  const uint64_t e_chi = edges_upper_lower(lg, hi, f.c);
  const uint64_t c_size = f.c.count(), hi_size = hi.count();
  bool c1 = c_size == 0 ? e_chi == 0 : 4 * e_chi > static_cast<uint64_t>(k) * c_size;
  bool c2 = hi_size == 0 ? (c_size == 0 && e_chi == 0)
                         : static_cast<double>(e_chi) < k1t * static_cast<double>(hi_size);
  out.c_chain = c1 && c2;

  out.g0_containment = (f.g - f.g0).is_subset_of(hi);

  out.witness_paths = true;
  const double wit_bound = (k1t / 2) * (static_cast<double>(k) / 2) * k1t;  // = (1/4) k^(3-zeta)
  Bitset a_minus_b = a - f.b;
  Bitset g_minus_h = f.g - f.h;
  (f.g - hi).for_each([&](std::size_t y) {
    uint64_t walks = 0;
    (lg.down_mask(static_cast<uint32_t>(y)) & a_minus_b).for_each([&](std::size_t w) {
      (lg.up_mask(static_cast<uint32_t>(w)) & g_minus_h).for_each([&](std::size_t z) {
        walks += lg.down_mask(static_cast<uint32_t>(z)).count_and(a);
      });
    });
    if (static_cast<double>(walks) < wit_bound) out.witness_paths = false;
    if (walks > good_walk_count(lg, a, static_cast<uint32_t>(y))) out.witness_paths = false;
  });
  return out;
}

ContainerBuilder::ContainerBuilder(const LayerGraph& lg, ContainerParams params)
    : lg_(lg), params_(params) {
  if (!lg.has_complement_pairing() || lg.lower_k() < 2)
    throw std::invalid_argument("ContainerBuilder: requires the middle-layer graph with k >= 2");
  if (!(params.zeta > 0 && params.zeta < 1) || !(params.eta > 0))
    throw std::invalid_argument("ContainerBuilder: requires zeta in (0,1) and eta > 0");
}

namespace {

struct TMeasure {
  Bitset t, w, z;
  std::vector<std::pair<uint32_t, uint32_t>> f;
  uint64_t g0_minus_z = 0;
};

TMeasure measure_t(const LayerGraph& lg, const Bitset& a, const Bitset& g0, const Bitset& t) {
  TMeasure m;
  m.t = t;
  Bitset nt2 = lg.lower_shadow(lg.upper_shadow(t)) | t;
  m.w = lg.upper_shadow(nt2);
  m.z = lg.upper_shadow(nt2 & a);
  lg.upper_shadow(t).for_each([&](std::size_t y) {
    (lg.down_mask(static_cast<uint32_t>(y)) - a).for_each([&](std::size_t zz) {
      m.f.push_back({static_cast<uint32_t>(y), static_cast<uint32_t>(zz)});
    });
  });
  m.g0_minus_z = g0.count_minus(m.z);
  return m;
}

double ratio_or_nan(double value, double scale) {
  if (!(scale > 0)) return std::numeric_limits<double>::quiet_NaN();
  return value / scale;
}

}  // namespace

ContainerRecord ContainerBuilder::build(const Bitset& a, uint64_t seed) const {
  if (a.none()) throw std::invalid_argument("ContainerBuilder::build: empty family");
  const int k = lg_.lower_k();
  const double logk = std::log(static_cast<double>(k));

  ContainerRecord r;
  r.a = a;
  r.g = lg_.upper_shadow(a);
  r.a_size = a.count();
  r.g_size = r.g.count();
  r.delta = (static_cast<double>(r.g_size) - static_cast<double>(r.a_size)) /
            static_cast<double>(r.a_size);
  r.seed = seed;

  Bitset g0 = g0_set(lg_, a, params_);
  const double qt = params_.q_t(k);
  SplitRng rng(seed, 0);

  // Pilot round: empirical means stand in for the closed-form expectations.
  double mean_t = 0, mean_f = 0, mean_gz = 0;
  for (int i = 0; i < params_.pilot_rounds; ++i) {
    TMeasure m = measure_t(lg_, a, g0, rng.thin(a, qt));
    mean_t += static_cast<double>(m.t.count());
    mean_f += static_cast<double>(m.f.size());
    mean_gz += static_cast<double>(m.g0_minus_z);
  }
  mean_t /= params_.pilot_rounds;
  mean_f /= params_.pilot_rounds;
  mean_gz /= params_.pilot_rounds;

  const double fac = params_.accept_factor;
  TMeasure best;
  double best_score = std::numeric_limits<double>::infinity();
  bool accepted = false;
  for (int draw = 0; draw < params_.retry_cap; ++draw) {
    TMeasure m = measure_t(lg_, a, g0, rng.thin(a, qt));
    r.t_draws = draw + 1;
    auto over = [](double v, double mean) {
      if (mean > 0) return v / mean;
      return v > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    double score = std::max({over(static_cast<double>(m.t.count()), mean_t),
                             over(static_cast<double>(m.f.size()), mean_f),
                             over(static_cast<double>(m.g0_minus_z), mean_gz)});
    if (score < best_score) {
      best_score = score;
      best = std::move(m);
    }
    if (best_score <= fac + 1e-9) {
      accepted = true;
      break;
    }
  }
  r.t_fallback = !accepted;
  r.t = best.t;
  r.w = best.w;
  r.z = best.z;
  r.f = best.f;

  // S_T = vertices seeing at least half their upper neighborhood inside W.
  r.s = Bitset(lg_.lower_count());
  for (uint32_t x = 0; x < lg_.lower_count(); ++x)
    if (2 * lg_.up_mask(x).count_and(r.w) >= static_cast<std::size_t>(k)) r.s.set(x);

  const double d = r.delta, asz = static_cast<double>(r.a_size);
  r.achieved.t1 = ratio_or_nan(static_cast<double>(r.t.count()),
                               asz * std::pow(k, params_.zeta - 3.0) * logk);
  r.achieved.t2 = ratio_or_nan(static_cast<double>(r.f.size()),
                               d * asz * std::pow(k, params_.zeta - 1.0) * logk);
  r.achieved.t3 =
      ratio_or_nan(static_cast<double>(g0.count_minus(r.z)), asz * std::pow(k, -2.0));
  r.achieved.t4 = ratio_or_nan(static_cast<double>(r.w.count_minus(r.g)),
                               d * asz * std::pow(k, params_.zeta) * logk);
  r.achieved.t5 = ratio_or_nan(static_cast<double>(r.a.count_minus(r.s)),
                               d * asz * std::pow(k, -params_.theta()));

  // U stage: prune S of the vertices that joined through W \ G.
  Bitset w_minus_g = r.w - r.g;
  Bitset l(lg_.lower_count());
  (r.s - a).for_each([&](std::size_t x) {
    if (4 * lg_.up_mask(static_cast<uint32_t>(x)).count_and(w_minus_g) >=
        static_cast<std::size_t>(k))
      l.set(x);
  });
  const double qu = params_.q_u(k);
  double mean_lu = 0;
  for (int i = 0; i < params_.pilot_rounds; ++i) {
    Bitset u = rng.thin(w_minus_g, qu);
    mean_lu += static_cast<double>(l.count_minus(lg_.lower_shadow(u)));
  }
  mean_lu /= params_.pilot_rounds;

  Bitset best_u;
  uint64_t best_lu = std::numeric_limits<uint64_t>::max();
  bool u_accepted = false;
  for (int draw = 0; draw < params_.retry_cap; ++draw) {
    Bitset u = rng.thin(w_minus_g, qu);
    r.u_draws = draw + 1;
    uint64_t lu = l.count_minus(lg_.lower_shadow(u));
    if (lu < best_lu) {
      best_lu = lu;
      best_u = std::move(u);
    }
    if (static_cast<double>(best_lu) <= mean_lu + 1e-9) {
      u_accepted = true;
      break;
    }
  }
  r.u_fallback = !u_accepted;
  r.u = best_u;
  r.sprime = r.s - lg_.lower_shadow(r.u);

  r.achieved.u1 = ratio_or_nan(static_cast<double>(r.u.count()),
                               d * asz * std::pow(k, params_.zeta - 1.0) * logk * logk);
  r.achieved.u2 = ratio_or_nan(
      static_cast<double>((r.s - a).count_minus(lg_.lower_shadow(r.u))), d * asz);
  return r;
}

Bitset z_from_ta(const LayerGraph& lg, const Bitset& t, const Bitset& a) {
  Bitset nt2 = lg.lower_shadow(lg.upper_shadow(t)) | t;
  return lg.upper_shadow(nt2 & a);
}

Bitset z_from_tf(const LayerGraph& lg, const Bitset& t,
                 const std::vector<std::pair<uint32_t, uint32_t>>& f) {
  // Blocked steps per upper vertex.
  std::vector<Bitset> blocked(lg.upper_count());
  for (const auto& [y, z] : f) {
    if (blocked[y].empty()) blocked[y] = Bitset(lg.lower_count());
    blocked[y].set(z);
  }
  Bitset l2(lg.lower_count());
  lg.upper_shadow(t).for_each([&](std::size_t y) {
    Bitset steps = lg.down_mask(static_cast<uint32_t>(y));
    if (!blocked[y].empty()) steps -= blocked[y];
    l2 |= steps;
  });
  return lg.upper_shadow(l2);
}

Bitset reconstruct(const LayerGraph& lg, const Bitset& a_star, const Bitset& g_star,
                   const Bitset& a_minus_astar, const Bitset& g_cap_gstar, bool* closed_ok) {
  (void)g_star;
  Bitset recovered(lg.lower_count());
  a_star.for_each([&](std::size_t x) {
    if (lg.up_mask(static_cast<uint32_t>(x)).is_subset_of(g_cap_gstar)) recovered.set(x);
  });
  recovered |= a_minus_astar;
  if (closed_ok) *closed_ok = lg.is_closed(recovered);
  return recovered;
}

RecordCheck check_record(const LayerGraph& lg, const ContainerRecord& r,
                         const ContainerParams& params) {
  RecordCheck c;
  const int k = lg.lower_k();
  c.z_in_w_and_g = r.z.is_subset_of(r.w & r.g);
  c.w_minus_g_bound = r.w.count_minus(r.g) <= static_cast<uint64_t>(k) * r.f.size();
  c.z_two_routes = z_from_tf(lg, r.t, r.f) == r.z && z_from_ta(lg, r.t, r.a) == r.z;
  Bitset s_cap_a = r.s & r.a;
  c.sprime_chain = r.sprime.is_subset_of(r.s) && s_cap_a.is_subset_of(r.sprime);
  bool closed_ok = false;
  Bitset rec = reconstruct(lg, r.a, r.g, Bitset(lg.lower_count()), r.g, &closed_ok);
  c.reconstruct_ok = rec == r.a && closed_ok;
  c.filtration = check_filtration(lg, r.a, params);
  return c;
}

LargeDeltaSpec specify_large_delta(const LayerGraph& lg, const Bitset& a, double c_const,
                                   uint64_t seed, const ContainerParams& params) {
  if (a.none()) throw std::invalid_argument("specify_large_delta: empty family");
  const int k = lg.lower_k();
  Bitset g = lg.upper_shadow(a);
  const uint64_t a_size = a.count(), g_size = g.count();
  const double delta = (static_cast<double>(g_size) - static_cast<double>(a_size)) /
                       static_cast<double>(a_size);
  if (!(delta > 1.0))
    throw std::invalid_argument("specify_large_delta: requires delta(A) > 1");

  LargeDeltaSpec spec;
  const double logk = std::log(static_cast<double>(k));

  spec.z = Bitset(lg.lower_count());
  for (uint32_t x = 0; x < lg.lower_count(); ++x)
    if (4 * lg.up_mask(x).count_and(g) >= static_cast<std::size_t>(k)) spec.z.set(x);

  auto g_list = g.to_indices();
  uint64_t t_size = static_cast<uint64_t>(
      std::ceil(c_const * (static_cast<double>(g_size) / k) * logk));
  t_size = std::min<uint64_t>(t_size, g_size);
  const double s_threshold = (c_const / 2) * logk;

  SplitRng rng(seed, 1);
  auto draw_t = [&]() {
    // Partial Fisher-Yates for a uniform t_size-subset of the shadow.
    std::vector<uint32_t> pool = g_list;
    Bitset t(lg.upper_count());
    for (uint64_t i = 0; i < t_size; ++i) {
      uint64_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      t.set(pool[i]);
    }
    return t;
  };
  auto s_of = [&](const Bitset& t) {
    Bitset s(lg.lower_count());
    for (uint32_t x = 0; x < lg.lower_count(); ++x)
      if (static_cast<double>(lg.up_mask(x).count_and(t)) > s_threshold) s.set(x);
    return s;
  };

  uint64_t best_as = std::numeric_limits<uint64_t>::max();
  uint64_t best_sz = std::numeric_limits<uint64_t>::max();
  bool accepted = false;
  for (int draw = 0; draw < params.retry_cap; ++draw) {
    Bitset t = draw_t();
    Bitset s = s_of(t);
    uint64_t as = a.count_minus(s);
    uint64_t sz = s.count_minus(spec.z);
    if (std::make_pair(as, sz) < std::make_pair(best_as, best_sz)) {
      best_as = as;
      best_sz = sz;
      spec.t = std::move(t);
      spec.s = std::move(s);
    }
    spec.aminus_s_ok = static_cast<double>(best_as) <
                       static_cast<double>(a_size) / (static_cast<double>(k) * k);
    spec.ssize_ok = static_cast<double>(best_sz) < static_cast<double>(g_size) / k;
    if (spec.aminus_s_ok && spec.ssize_ok) {
      accepted = true;
      break;
    }
  }
  spec.bounds_fallback = !accepted;

  // One chosen neighbor per vertex of A \ S.
  spec.t_prime = Bitset(lg.upper_count());
  (a - spec.s).for_each([&](std::size_t x) {
    spec.t_prime.set(lg.up_mask(static_cast<uint32_t>(x)).find_first());
  });
  spec.four_linked = lg.is_linked_upper(spec.t | spec.t_prime, 4);

  // Forest over the distance-2 graph covering A \ S, roots inside S ∩ A.
  Bitset roots_avail = spec.s & a;
  Bitset targets = a - spec.s;
  spec.single_root_fallback = roots_avail.none();
  if (spec.single_root_fallback && a.any()) {
    uint32_t root = static_cast<uint32_t>(a.find_first());
    roots_avail = Bitset(lg.lower_count());
    roots_avail.set(root);
    targets = a;
    targets.reset(root);
  }
  Bitset reached(lg.lower_count());
  std::vector<uint32_t> frontier = roots_avail.to_indices();
  Bitset used_roots(lg.lower_count());
  while (!frontier.empty()) {
    std::vector<uint32_t> next;
    for (uint32_t p : frontier) {
      Bitset kids = lg.johnson_mask(p) & targets;
      kids -= reached;
      kids.for_each([&](std::size_t c) {
        spec.forest.edges.push_back({p, static_cast<uint32_t>(c)});
        reached.set(c);
        next.push_back(static_cast<uint32_t>(c));
        if (roots_avail.test(p)) used_roots.set(p);
      });
    }
    frontier = std::move(next);
  }
  spec.forest.roots = used_roots.to_indices();

  // Round trip: the decoded non-root set must be exactly A \ S.
  Bitset decoded(lg.lower_count());
  for (const auto& [p, c] : spec.forest.edges) decoded.set(c);
  spec.forest_roundtrip = decoded == targets;
  spec.forest_nodes = spec.forest.roots.size() + targets.count();

  // log of sum_{q<=t} C((1+delta)a, q) C(t, q) (e d)^t with d = k^2.
  const double t_nodes = static_cast<double>(spec.forest_nodes);
  const double big = (1.0 + delta) * static_cast<double>(a_size);
  auto log_choose_real = [](double n, double q) {
    if (q < 0 || q > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1) - std::lgamma(q + 1) - std::lgamma(n - q + 1);
  };
  double log_sum = -std::numeric_limits<double>::infinity();
  for (double q = 0; q <= t_nodes; ++q) {
    double term = log_choose_real(big, q) + log_choose_real(t_nodes, q) +
                  t_nodes * (1.0 + 2.0 * std::log(static_cast<double>(k)));
    if (!std::isfinite(term)) continue;
    if (!std::isfinite(log_sum)) {
      log_sum = term;
    } else {
      double hi = std::max(log_sum, term), lo = std::min(log_sum, term);
      log_sum = hi + std::log1p(std::exp(lo - hi));
    }
  }
  spec.log_forest_count_bound = log_sum;
  return spec;
}

std::string record_to_json(const ContainerRecord& r, const ContainerParams& params, int k,
                           bool compact) {
  nlohmann::json j;
  j["k"] = k;
  j["zeta"] = params.zeta;
  j["eta"] = params.eta;
  j["seed"] = r.seed;
  j["a_size"] = r.a_size;
  j["g_size"] = r.g_size;
  j["delta"] = r.delta;
  j["t"] = r.t.to_indices();
  j["u"] = r.u.to_indices();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [y, z] : r.f) edges.push_back({y, z});
  j["f"] = edges;
  j["sizes"] = {{"t", r.t.count()},       {"f", r.f.size()},      {"u", r.u.count()},
                {"w", r.w.count()},       {"s", r.s.count()},     {"z", r.z.count()},
                {"sprime", r.sprime.count()}};
  auto num_or_null = [](double v) {
    nlohmann::json out;
    if (std::isnan(v)) out = nullptr; else out = v;
    return out;
  };
  j["achieved"] = {{"t1", num_or_null(r.achieved.t1)}, {"t2", num_or_null(r.achieved.t2)},
                   {"t3", num_or_null(r.achieved.t3)}, {"t4", num_or_null(r.achieved.t4)},
                   {"t5", num_or_null(r.achieved.t5)}, {"u1", num_or_null(r.achieved.u1)},
                   {"u2", num_or_null(r.achieved.u2)}};
  j["t_fallback"] = r.t_fallback;
  j["u_fallback"] = r.u_fallback;
  j["t_draws"] = r.t_draws;
  j["u_draws"] = r.u_draws;
  return compact ? j.dump() : j.dump(2);
}

}  // namespace ekrlab
