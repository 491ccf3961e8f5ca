#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ladder/basis.hpp"
#include "ladder/errors.hpp"
#include "ladder/ground_state.hpp"
#include "oracle/dense_oracle.hpp"

using namespace ladder;

namespace {

LadderGeometry ladder_of(int L, double jpar = 1.15) {
  LadderGeometry g;
  g.L = L;
  g.j_par = jpar;
  return g;
}

}  // namespace

TEST(GroundState, DecoupledRungSectorMinima) {
  const auto spectra = sector_sweep(ladder_of(2, 0.0), SweepOptions{});
  ASSERT_EQ(spectra.size(), 5u);
  const double want[] = {6.5, -6.5, -19.5, -6.5, 6.5};
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(spectra[n].n_up, n);
    EXPECT_NEAR(spectra[n].eigenvalues[0], want[n], 1e-10);
  }
}

TEST(GroundState, MirroredSectorsCarryFlippedVectors) {
  const auto geom = ladder_of(3);
  const auto spectra = sector_sweep(geom, SweepOptions{});
  for (int n = 0; n < 3; ++n) {
    const auto b = enumerate_sector(geom, n);
    const auto h = build_ladder_hamiltonian(geom, b);
    const auto& s = spectra[n];
    EXPECT_DOUBLE_EQ(s.sz, n - 3.0);
    const auto hv = matvec(h, s.ground_vector);
    for (std::size_t i = 0; i < hv.size(); ++i) EXPECT_NEAR(hv[i], s.eigenvalues[0] * s.ground_vector[i], 1e-9);
  }
}

TEST(GroundState, EnergiesConvexInSz) {
  for (int L = 2; L <= 4; ++L) {
    const auto spectra = sector_sweep(ladder_of(L), SweepOptions{});
    for (int n = 1; n < 2 * L; ++n)
      EXPECT_LE(2.0 * spectra[n].eigenvalues[0], spectra[n - 1].eigenvalues[0] + spectra[n + 1].eigenvalues[0] + 1e-9);
  }
}

TEST(GroundState, SaturationFieldExactForEvenL) {
  for (int L : {4, 6, 8}) {
    const auto curve = ground_state_curve(sector_sweep(ladder_of(L), SweepOptions{}));
    ASSERT_FALSE(curve.crossings.empty());
    EXPECT_NEAR(curve.crossings.back(), 15.3, 1e-8) << "L=" << L;
    EXPECT_EQ(curve.sz_per_interval.front(), 0);
    EXPECT_EQ(curve.sz_per_interval.back(), L);
    for (std::size_t i = 1; i < curve.sz_per_interval.size(); ++i)
      EXPECT_GT(curve.sz_per_interval[i], curve.sz_per_interval[i - 1]);
  }
}

TEST(GroundState, DecoupledRungsSaturateInOneStep) {
  const auto curve = ground_state_curve(sector_sweep(ladder_of(4, 0.0), SweepOptions{}));
  ASSERT_EQ(curve.crossings.size(), 1u);
  EXPECT_NEAR(curve.crossings[0], 13.0, 1e-10);
  EXPECT_EQ(curve.sz_at(12.9), 0);
  EXPECT_EQ(curve.sz_at(13.0), 4);
  EXPECT_DOUBLE_EQ(curve.magnetization(14.0), 0.5);
}

TEST(GroundState, CrossingsMatchOracleIntersections) {
  // Brute force over a fine field grid: the oracle's lowest Zeeman-shifted
  // level must sit in the sector the curve predicts, and the predicted
  // crossings must be where two sector minima meet.
  const int L = 4;
  const int n = 2 * L;
  const auto geom = ladder_of(L);
  const auto full = oracle::exchange(oracle::ladder(L, geom.j_perp, geom.j_par), n);
  std::vector<double> e0(L + 1);
  for (int sz = 0; sz <= L; ++sz) e0[sz] = oracle::sector_levels(full, n, sz)(0);

  const auto curve = ground_state_curve(sector_sweep(geom, SweepOptions{}));
  for (std::size_t c = 0; c < curve.crossings.size(); ++c) {
    const int a = curve.sz_per_interval[c];
    const int b = curve.sz_per_interval[c + 1];
    const double h = curve.crossings[c];
    EXPECT_NEAR(e0[a] - h * a, e0[b] - h * b, 1e-9);
  }
  for (double h = 0.0; h <= 17.0; h += 0.01) {
    int best = 0;
    for (int sz = 1; sz <= L; ++sz)
      if (e0[sz] - h * sz < e0[best] - h * best) best = sz;
    const bool near_crossing = std::any_of(curve.crossings.begin(), curve.crossings.end(),
                                           [&](double x) { return std::abs(x - h) < 1e-6; });
    if (!near_crossing) EXPECT_EQ(curve.sz_at(h), best) << "H=" << h;
  }
}

TEST(GroundState, CrossingBelongsToRightInterval) {
  const auto curve = ground_state_curve(sector_sweep(ladder_of(4), SweepOptions{}));
  const double h0 = curve.crossings.front();
  EXPECT_EQ(curve.sz_at(h0), curve.sz_per_interval[1]);
  EXPECT_EQ(curve.sz_at(std::nextafter(h0, 0.0)), 0);
}

TEST(GroundState, SpinGap) {
  EXPECT_NEAR(spin_gap(ladder_of(4, 0.0), SweepOptions{}), 13.0, 1e-10);
  const auto geom = ladder_of(6);
  const auto spectra = sector_sweep(geom, SweepOptions{});
  const auto curve = ground_state_curve(spectra);
  EXPECT_NEAR(spin_gap(spectra), curve.crossings.front(), 1e-10);
  EXPECT_NEAR(spin_gap(geom, SweepOptions{}), spin_gap(spectra), 1e-9);
}

TEST(GroundState, EvenGapsDecreaseWithinBand) {
  double previous = 13.0;
  for (int L : {4, 6, 8, 10}) {
    const double gap = spin_gap(ladder_of(L), SweepOptions{});
    EXPECT_LT(gap, previous);
    EXPECT_GE(gap, 11.8);
    EXPECT_LE(gap, 13.0);
    previous = gap;
  }
  // First-order perturbation theory gives J_perp - J_par = 11.85.
  EXPECT_NEAR(previous, 11.85, 0.1);
}

TEST(GroundState, MissingSectors) {
  auto spectra = sector_sweep(ladder_of(3), SweepOptions{});
  spectra.erase(spectra.begin() + 4);
  EXPECT_THROW(ground_state_curve(spectra), ContractViolation);
  std::vector<SectorSpectrum> none;
  EXPECT_THROW(spin_gap(none), ContractViolation);
}

TEST(GroundState, SpinFlipContract) {
  const SectorBasis a(4, 1);
  const SectorBasis b(4, 2);
  std::vector<double> v(a.size(), 0.5);
  EXPECT_THROW(spin_flip(v, a, b), ContractViolation);
  const auto flipped = spin_flip(v, a, SectorBasis(4, 3));
  EXPECT_EQ(flipped.size(), 4u);
}
