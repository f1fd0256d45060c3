#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ekrlab/bitset.hpp"

namespace ekrlab {

/// Pascal-triangle table of exact binomial coefficients C(a,b) for a <= max_n.
/// Built with checked uint64 additions; an overflow throws instead of wrapping.
class BinomTable {
 public:
  explicit BinomTable(int max_n);

  int max_n() const { return max_n_; }
  uint64_t choose(int a, int b) const;

 private:
  int max_n_;
  std::vector<std::vector<uint64_t>> rows_;
};

/// Colexicographic rank of a k-subset of [0,n) given as a bitmask.
uint64_t colex_rank(const BinomTable& binom, uint64_t bits);

/// Inverse of colex_rank for k-subsets of [0,n); throws std::out_of_range
/// when rank >= C(n,k).
uint64_t colex_unrank(const BinomTable& binom, int n, int k, uint64_t rank);

/// A k-subset of the ground set, carried both as a bitmask over [0,n) and as
/// its dense colex rank.
struct KSet {
  uint64_t bits = 0;
  uint64_t rank = 0;
};

/// Ground-set parameters (n, k) with n >= 2k, plus the binomial table and the
/// colex rank/unrank bijection over C([n],k).
class Universe {
 public:
  Universe(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  uint64_t kset_count() const { return count_; }  // C(n,k)
  const BinomTable& binom() const { return binom_; }
  uint64_t choose(int a, int b) const { return binom_.choose(a, b); }

  uint64_t rank(uint64_t bits) const;
  KSet unrank(uint64_t rank) const;
  KSet kset(uint64_t bits) const { return KSet{bits, rank(bits)}; }

 private:
  int n_, k_;
  BinomTable binom_;
  uint64_t count_;
};

using UniversePtr = std::shared_ptr<const Universe>;

inline UniversePtr make_universe(int n, int k) {
  return std::make_shared<const Universe>(n, k);
}

/// A set of k-sets over a fixed universe, stored as a bitset over colex ranks.
class RankedFamily {
 public:
  RankedFamily() = default;
  explicit RankedFamily(UniversePtr u)
      : u_(std::move(u)), members_(u_->kset_count()) {}
  RankedFamily(UniversePtr u, Bitset members) : u_(std::move(u)), members_(std::move(members)) {
    if (members_.size() != u_->kset_count())
      throw std::invalid_argument("RankedFamily: bitset size != C(n,k)");
  }

  const UniversePtr& universe() const { return u_; }
  const Bitset& members() const { return members_; }
  Bitset& members() { return members_; }
  uint64_t size() const { return members_.count(); }
  bool empty() const { return members_.none(); }

  bool contains_rank(uint64_t r) const { return members_.test(r); }
  bool contains(uint64_t bits) const { return members_.test(u_->rank(bits)); }
  void insert(uint64_t bits) { members_.set(u_->rank(bits)); }
  void insert_rank(uint64_t r) { members_.set(r); }
  void erase(uint64_t bits) { members_.reset(u_->rank(bits)); }

  template <typename F>
  void for_each_bits(F&& f) const {
    members_.for_each([&](std::size_t r) { f(u_->unrank(r).bits); });
  }

  bool same_universe(const RankedFamily& o) const {
    return u_ && o.u_ && u_->n() == o.u_->n() && u_->k() == o.u_->k();
  }

  friend RankedFamily operator|(const RankedFamily& a, const RankedFamily& b) {
    a.check(b);
    return RankedFamily(a.u_, a.members_ | b.members_);
  }
  friend RankedFamily operator&(const RankedFamily& a, const RankedFamily& b) {
    a.check(b);
    return RankedFamily(a.u_, a.members_ & b.members_);
  }
  friend RankedFamily operator-(const RankedFamily& a, const RankedFamily& b) {
    a.check(b);
    return RankedFamily(a.u_, a.members_ - b.members_);
  }
  bool operator==(const RankedFamily& o) const {
    return same_universe(o) && members_ == o.members_;
  }

 private:
  void check(const RankedFamily& o) const {
    if (!same_universe(o)) throw std::invalid_argument("RankedFamily: universe mismatch");
  }

  UniversePtr u_;
  Bitset members_;
};

// ---------------------------------------------------------------------------
// Large-deviation bound calculators.
// ---------------------------------------------------------------------------

struct ChernoffBounds {
  double upper;  // bound on Pr(X > mq + lambda)
  double lower;  // bound on Pr(X < mq - lambda)
};

/// Chernoff bounds for Bin(m,q) at deviation lambda >= 0:
/// upper = exp(-lambda^2 / (2(mu + lambda/3))), lower = exp(-lambda^2 / (2 mu)).
/// Both are 1 when mu == 0 (vacuous case).
ChernoffBounds chernoff_bound(int64_t m, double q, double lambda);

struct UpperTailBound {
  double value;     // exp(-K m q log(K/e))
  bool meaningful;  // true iff K > e, where the bound is below 1
};

/// Bound on Pr(Bin(m,q) > K m q).
UpperTailBound uppertail_bound(int64_t m, double q, double big_k);

/// Bound exp(a log(e b / a)) on sum_{i<=a} C(b,i); requires 1 <= a <= b/2.
double binsum_bound(uint64_t a, uint64_t b);

}  // namespace ekrlab
