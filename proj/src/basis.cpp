#include "ladder/basis.hpp"

#include <array>
#include <bit>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

namespace {

constexpr int kTableSize = kMaxSites + 2;

using BinomialTable = std::array<std::array<std::uint64_t, kTableSize>, kTableSize>;

constexpr BinomialTable make_binomial_table() {
  BinomialTable t{};
  for (int n = 0; n < kTableSize; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
  }
  return t;
}

constexpr BinomialTable kBinomial = make_binomial_table();

// Gosper's hack: next larger integer with the same popcount.
constexpr std::uint64_t next_same_popcount(std::uint64_t v) noexcept {
  const std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

void LadderGeometry::validate() const {
  if (L < 2) throw DomainError("ladder needs L >= 2, got " + std::to_string(L));
  if (2 * L > kMaxSites) throw DomainError("ladder too large: L = " + std::to_string(L));
  if (!(j_perp > 0.0)) throw DomainError("rung coupling must be positive");
  if (!(j_par >= 0.0)) throw DomainError("leg coupling must be non-negative");
}

int SpinConfig::n_up() const noexcept { return std::popcount(bits); }

std::uint64_t binomial(int n, int k) noexcept {
  if (n < 0 || k < 0 || k > n || n >= kTableSize) return 0;
  return kBinomial[n][k];
}

SectorBasis::SectorBasis(int n_sites, int n_up) : n_sites_(n_sites), n_up_(n_up) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw DomainError("number of sites out of range: " + std::to_string(n_sites));
  if (n_up < 0 || n_up > n_sites)
    throw DomainError("n_up = " + std::to_string(n_up) + " outside [0, " +
                      std::to_string(n_sites) + "]");
  mask_ = (std::uint64_t{1} << n_sites) - 1;

  const std::uint64_t count = binomial(n_sites, n_up);
  configs_.reserve(count);
  if (n_up == 0) {
    configs_.push_back(SpinConfig{0});
    return;
  }
  std::uint64_t v = (std::uint64_t{1} << n_up) - 1;
  for (std::uint64_t i = 0; i < count; ++i) {
    configs_.push_back(SpinConfig{v});
    if (i + 1 < count) v = next_same_popcount(v);
  }
}

SpinConfig SectorBasis::unrank(std::size_t index) const {
  if (index >= configs_.size())
    throw LookupError("index " + std::to_string(index) + " outside sector of size " +
                      std::to_string(configs_.size()));
  return configs_[index];
}

std::size_t SectorBasis::rank_unchecked(SpinConfig c) const noexcept {
  // Colex rank: sum over the k-th set bit (k = 1..n_up) at position p of C(p, k).
  std::uint64_t bits = c.bits;
  std::size_t r = 0;
  int k = 1;
  while (bits != 0) {
    const int p = std::countr_zero(bits);
    r += kBinomial[p][k];
    bits &= bits - 1;
    ++k;
  }
  return r;
}

std::optional<std::size_t> SectorBasis::find(SpinConfig c) const noexcept {
  if ((c.bits & ~mask_) != 0 || c.n_up() != n_up_) return std::nullopt;
  return rank_unchecked(c);
}

std::size_t SectorBasis::rank(SpinConfig c) const {
  if (auto r = find(c)) return *r;
  throw LookupError("configuration " + std::to_string(c.bits) + " not in sector with " +
                    std::to_string(n_up_) + " up spins on " + std::to_string(n_sites_) +
                    " sites");
}

SectorBasis enumerate_sector(const LadderGeometry& geom, int n_up) {
  geom.validate();
  return SectorBasis(geom.n_sites(), n_up);
}

int sz_of(int n_up, int L) { return n_up - L; }

}  // namespace ladder
