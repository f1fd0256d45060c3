#include "ekrlab/combinat.hpp"

#include <bit>
#include <cmath>

namespace ekrlab {

BinomTable::BinomTable(int max_n) : max_n_(max_n) {
  if (max_n < 0 || max_n > 64)
    throw std::invalid_argument("BinomTable: max_n must be in [0,64]");
  rows_.resize(max_n + 1);
  for (int a = 0; a <= max_n; ++a) {
    rows_[a].assign(a + 1, 0);
    rows_[a][0] = rows_[a][a] = 1;
    for (int b = 1; b < a; ++b) {
      uint64_t s;
      if (__builtin_add_overflow(rows_[a - 1][b - 1], rows_[a - 1][b], &s))
        throw std::overflow_error("BinomTable: C(a,b) overflows uint64");
      rows_[a][b] = s;
    }
  }
}

uint64_t BinomTable::choose(int a, int b) const {
  if (b < 0 || b > a) return 0;
  if (a > max_n_) throw std::out_of_range("BinomTable: a exceeds table size");
  return rows_[a][b];
}

uint64_t colex_rank(const BinomTable& binom, uint64_t bits) {
  uint64_t r = 0;
  int pos = 1;
  while (bits) {
    int e = std::countr_zero(bits);
    r += binom.choose(e, pos++);
    bits &= bits - 1;
  }
  return r;
}

uint64_t colex_unrank(const BinomTable& binom, int n, int k, uint64_t rank) {
  if (rank >= binom.choose(n, k))
    throw std::out_of_range("colex_unrank: rank >= C(n,k)");
  uint64_t bits = 0;
  for (int pos = k; pos >= 1; --pos) {
    // Largest e with C(e,pos) <= rank.
    int e = pos - 1;
    while (e + 1 < n && binom.choose(e + 1, pos) <= rank) ++e;
    bits |= uint64_t{1} << e;
    rank -= binom.choose(e, pos);
  }
  return bits;
}

Universe::Universe(int n, int k) : n_(n), k_(k), binom_(n) {
  if (k < 1) throw std::invalid_argument("Universe: k must be positive");
  if (n < 2 * k) throw std::invalid_argument("Universe: requires n >= 2k");
  count_ = binom_.choose(n, k);
}

uint64_t Universe::rank(uint64_t bits) const {
  if (std::popcount(bits) != k_ || (bits >> n_) != 0)
    throw std::invalid_argument("Universe::rank: not a k-subset of [0,n)");
  return colex_rank(binom_, bits);
}

KSet Universe::unrank(uint64_t rank) const {
  return KSet{colex_unrank(binom_, n_, k_, rank), rank};
}

ChernoffBounds chernoff_bound(int64_t m, double q, double lambda) {
  if (m < 1) throw std::invalid_argument("chernoff_bound: m >= 1 required");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("chernoff_bound: q in (0,1) required");
  if (lambda < 0) throw std::invalid_argument("chernoff_bound: lambda >= 0 required");
  double mu = static_cast<double>(m) * q;
  ChernoffBounds b;
  b.upper = (mu + lambda / 3 > 0) ? std::exp(-lambda * lambda / (2 * (mu + lambda / 3))) : 1.0;
  b.lower = (mu > 0) ? std::exp(-lambda * lambda / (2 * mu)) : 1.0;
  return b;
}

UpperTailBound uppertail_bound(int64_t m, double q, double big_k) {
  if (m < 1) throw std::invalid_argument("uppertail_bound: m >= 1 required");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("uppertail_bound: q in (0,1) required");
  if (!(big_k > 0)) throw std::invalid_argument("uppertail_bound: K > 0 required");
  double mu = static_cast<double>(m) * q;
  double value = std::exp(-big_k * mu * std::log(big_k / std::exp(1.0)));
  return UpperTailBound{value, big_k > std::exp(1.0)};
}

double binsum_bound(uint64_t a, uint64_t b) {
  if (a < 1 || 2 * a > b) throw std::invalid_argument("binsum_bound: requires 1 <= a <= b/2");
  double ad = static_cast<double>(a), bd = static_cast<double>(b);
  return std::exp(ad * std::log(std::exp(1.0) * bd / ad));
}

}  // namespace ekrlab
