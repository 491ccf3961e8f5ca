#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ladder {

/// Two-leg ladder with L rungs. Couplings are in kelvin.
struct LadderGeometry {
  int L = 2;
  double j_perp = 13.0;
  double j_par = 1.15;
  bool periodic = true;

  int n_sites() const noexcept { return 2 * L; }

  /// Site index of leg `leg` (1 or 2) on rung `rung`: 2*rung + (leg - 1).
  static constexpr int site(int leg, int rung) noexcept { return 2 * rung + (leg - 1); }

  /// Throws DomainError unless L >= 2, j_perp > 0 and j_par >= 0.
  void validate() const;
};

/// One basis ket: bit s set means the spin on site s points up.
struct SpinConfig {
  std::uint64_t bits = 0;

  constexpr bool up(int site) const noexcept { return (bits >> site) & 1U; }
  constexpr SpinConfig flipped(int site) const noexcept {
    return SpinConfig{bits ^ (std::uint64_t{1} << site)};
  }
  constexpr SpinConfig exchanged(int a, int b) const noexcept {
    return SpinConfig{bits ^ ((std::uint64_t{1} << a) | (std::uint64_t{1} << b))};
  }
  int n_up() const noexcept;

  constexpr auto operator<=>(const SpinConfig&) const = default;
};

inline constexpr int kMaxSites = 62;

/// Binomial coefficient C(n, k) for 0 <= n <= kMaxSites + 1, 0 otherwise.
std::uint64_t binomial(int n, int k) noexcept;

/// All configurations of `n_sites` spins with exactly `n_up` up spins, in
/// ascending bit-pattern order, with combinatorial (colex) ranking.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_up);

  int n_sites() const noexcept { return n_sites_; }
  int n_up() const noexcept { return n_up_; }
  /// Total magnetization n_up - n_sites/2 (half-integer for odd n_sites).
  double sz() const noexcept { return n_up_ - 0.5 * n_sites_; }
  std::size_t size() const noexcept { return configs_.size(); }

  std::span<const SpinConfig> configs() const noexcept { return configs_; }
  SpinConfig unrank(std::size_t index) const;

  /// Index of `c` in configs(). Throws LookupError if c is not in the sector.
  std::size_t rank(SpinConfig c) const;
  std::optional<std::size_t> find(SpinConfig c) const noexcept;

  /// Rank without membership checks; `c` must belong to the sector.
  std::size_t rank_unchecked(SpinConfig c) const noexcept;

 private:
  int n_sites_;
  int n_up_;
  std::uint64_t mask_;
  std::vector<SpinConfig> configs_;
};

/// Sector of the 2L-spin ladder with `n_up` up spins.
SectorBasis enumerate_sector(const LadderGeometry& geom, int n_up);

/// Sz = n_up - L of a ladder sector.
int sz_of(int n_up, int L);

}  // namespace ladder
