#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ekrlab/bitset.hpp"
#include "ekrlab/layer_graph.hpp"

namespace ekrlab {

/// Tuning knobs of the approximation machinery. zeta fixes theta = zeta/2;
/// the sampling rates follow the middle-layer degree scales and are capped
/// to 1 at small k.
struct ContainerParams {
  double zeta = 0.2;
  double eta = 0.08;
  int pilot_rounds = 64;
  int retry_cap = 1024;
  double accept_factor = 3.0;

  double theta() const { return zeta / 2.0; }
  double q_t(int k) const;  // 16 k^(zeta-3) log k, capped to 1
  double q_u(int k) const;  // 4 log k / k, capped to 1
  double g0_threshold(int k) const;  // (1/4) k^(3-zeta)
};

/// Number of length-3 alternating walks v x1 y x2 with x1, x2 in A, counted
/// from the upper vertex v. Walk counting (consecutive vertices distinct by
/// bipartiteness) keeps the degree lower bounds exact at every k.
uint64_t good_walk_count(const LayerGraph& lg, const Bitset& a, uint32_t upper_v);

/// G0 = {v in shadow(A) : good_walk_count(v) >= (1/4) k^(3-zeta)}.
Bitset g0_set(const LayerGraph& lg, const Bitset& a, const ContainerParams& params);

/// Degree filtration of the shadow: H (thin upper), B (lower crowded into H),
/// I (upper thin toward A \ B), C (lower crowded into H u I).
struct Filtration {
  Bitset g, g0;    // upper
  Bitset h, i;     // upper
  Bitset b, c;     // lower
};
Filtration filtration(const LayerGraph& lg, const Bitset& a, const ContainerParams& params);

/// Exact inequality chains and containments of the filtration.
struct FiltrationCheck {
  bool h_edge_chain = false;      // (k+1-k^(1-theta))|H| <= e(H, comp) <= e(G, comp)
  bool degree_identity = false;   // e(G, comp) == (k+1)g - ka
  bool b_chain = false;           // k|B| < 2 e(B,H) and e(B,H) < k^(1-theta)|H| (nonempty forms)
  bool i_chain = false;           // k^(1-theta)|I| < 2 e(I,B) and 2 e(I,B) < k|B|
  bool c_chain = false;           // k|C| < 4 e(C,HuI) and e(C,HuI) < k^(1-theta)|HuI|
  bool g0_containment = false;    // G \ G0 subset of H u I
  bool witness_paths = false;     // every y outside H u I carries >= (1/4)k^(3-zeta) walks
  bool all() const {
    return h_edge_chain && degree_identity && b_chain && i_chain && c_chain && g0_containment &&
           witness_paths;
  }
};
FiltrationCheck check_filtration(const LayerGraph& lg, const Bitset& a,
                                 const ContainerParams& params);

/// The record R(A) = (T, F, U) with its derived approximations.
struct ContainerRecord {
  Bitset a;        // the closed 2-linked input (lower)
  Bitset g;        // shadow(A) (upper)
  Bitset t;        // T subset of A
  std::vector<std::pair<uint32_t, uint32_t>> f;  // edges (upper in N(T), lower outside A)
  Bitset u;        // U subset of W \ G (upper)
  Bitset w, z;     // upper approximations
  Bitset s, sprime;  // lower approximations
  uint64_t a_size = 0, g_size = 0;
  double delta = 0;
  uint64_t seed = 0;
  bool t_fallback = false, u_fallback = false;
  int t_draws = 0, u_draws = 0;

  /// Attained counterparts of the existential bounds, as ratios
  /// measured / scale; NaN when the scale vanishes (delta <= 0).
  struct Achieved {
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0;
    double u1 = 0, u2 = 0;
  } achieved;
};

class ContainerBuilder {
 public:
  ContainerBuilder(const LayerGraph& lg, ContainerParams params = {});

  /// Full record construction: sampled T, then sampled U, pilot-calibrated
  /// acceptance with a retried best-so-far fallback.
  ContainerRecord build(const Bitset& a, uint64_t seed) const;

  const ContainerParams& params() const { return params_; }

 private:
  const LayerGraph& lg_;
  ContainerParams params_;
};

/// Z recomputed from (T, F) alone: N(T) plus everything reachable by a walk
/// x y z w with x in T and the step (y, z) not an F-edge.
Bitset z_from_tf(const LayerGraph& lg, const Bitset& t,
                 const std::vector<std::pair<uint32_t, uint32_t>>& f);

/// Z = N(N^2(T) ∩ A), straight from the definition.
Bitset z_from_ta(const LayerGraph& lg, const Bitset& t, const Bitset& a);

/// Recovery: {x in A* : N(x) subset of GcapGstar} union AminusAstar.
/// closed_ok reports whether the result passes the closedness re-check.
Bitset reconstruct(const LayerGraph& lg, const Bitset& a_star, const Bitset& g_star,
                   const Bitset& a_minus_astar, const Bitset& g_cap_gstar, bool* closed_ok);

/// Per-record exact identities; all must hold on every build.
struct RecordCheck {
  bool z_in_w_and_g = false;    // Z subset of W ∩ G
  bool w_minus_g_bound = false; // |W \ G| <= k |F|
  bool z_two_routes = false;    // z_from_tf == z_from_ta == record.z
  bool sprime_chain = false;    // S >= S' >= S ∩ A
  bool reconstruct_ok = false;  // record data recovers A
  FiltrationCheck filtration;
  bool all() const {
    return z_in_w_and_g && w_minus_g_bound && z_two_routes && sprime_chain && reconstruct_ok &&
           filtration.all();
  }
};
RecordCheck check_record(const LayerGraph& lg, const ContainerRecord& r,
                         const ContainerParams& params);

/// Rooted forest over the distance-2 (Johnson) graph: parents point toward
/// the roots; every non-root is a decoded vertex.
struct RootedForest {
  std::vector<uint32_t> roots;
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // (parent, child)
};

/// Large-expansion specification: T inside the shadow, the degree-heavy core
/// S, the saturated set Z, one chosen neighbor per uncovered vertex, and the
/// forest encoding of A \ S.
struct LargeDeltaSpec {
  Bitset t, t_prime;  // upper
  Bitset s, z;        // lower
  RootedForest forest;
  bool single_root_fallback = false;
  bool aminus_s_ok = false;  // |A \ S| < a / k^2
  bool ssize_ok = false;     // |S \ Z| < g / k
  bool bounds_fallback = false;
  bool four_linked = false;  // T u T' is 4-linked
  bool forest_roundtrip = false;
  uint64_t forest_nodes = 0;
  double log_forest_count_bound = 0;  // log of sum_q C((1+d)a,q) C(t,q) (ed)^t
};
LargeDeltaSpec specify_large_delta(const LayerGraph& lg, const Bitset& a, double c_const,
                                   uint64_t seed, const ContainerParams& params);

/// JSON dump of a record (reproducibility surface of the experiments).
std::string record_to_json(const ContainerRecord& r, const ContainerParams& params, int k,
                           bool compact = false);

}  // namespace ekrlab
