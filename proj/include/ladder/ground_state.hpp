#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ladder/basis.hpp"
#include "ladder/eigensolver.hpp"

namespace ladder {

struct SweepOptions {
  LanczosOptions lanczos;
  /// Sectors up to this size go straight to the dense solver.
  std::size_t dense_below = 16;
  /// Stored-matrix budget per sector in bytes; larger sectors run matrix-free.
  std::size_t memory_budget = std::size_t{2} << 30;
};

/// One SectorSpectrum per n_up = 0..2L, ordered by n_up. Only Sz >= 0 is
/// diagonalized; Sz < 0 sectors are the spin-flipped images.
/// Solver failures are rethrown as NonConvergenceError naming the sector.
std::vector<SectorSpectrum> sector_sweep(const LadderGeometry& geom, const SweepOptions& options);

/// Ground-state sector as a function of field: the lower convex envelope of
/// (Sz, E0(Sz)) over Sz >= 0. Each crossing field belongs to the interval on
/// its right.
struct GroundStateCurve {
  int L = 0;
  std::vector<double> crossings;          ///< ascending
  std::vector<int> sz_per_interval;       ///< crossings.size() + 1 entries
  std::vector<std::size_t> spectrum_index;  ///< index into the source spectra per interval

  std::size_t interval_at(double field) const noexcept;
  int sz_at(double field) const noexcept { return sz_per_interval[interval_at(field)]; }
  /// Magnetization per site, Sz / (2L), in [0, 1/2].
  double magnetization(double field) const noexcept {
    return static_cast<double>(sz_at(field)) / (2.0 * L);
  }
};

/// `spectra` must hold every sector with Sz >= 0 (as produced by
/// sector_sweep). Points lying on a chord within round-off are dropped, so
/// degenerate crossings merge into one magnetization jump.
GroundStateCurve ground_state_curve(std::span<const SectorSpectrum> spectra);

/// E0(Sz = 1) - E0(Sz = 0).
double spin_gap(std::span<const SectorSpectrum> spectra);

/// Sz = 0 and Sz = 1 sectors only; enough for the gap.
double spin_gap(const LadderGeometry& geom, const SweepOptions& options);

/// Ground state of one sector, with the dense fallback for small sectors.
SectorSpectrum solve_sector(const LadderGeometry& geom, int n_up, const SweepOptions& options);

/// Spin-flip image of a vector from sector n_up into sector 2L - n_up.
std::vector<double> spin_flip(std::span<const double> v, const SectorBasis& from, const SectorBasis& to);

}  // namespace ladder
