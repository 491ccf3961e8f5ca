#include "ladder/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

SectorSpectrum solve_sector(const LadderGeometry& geom, int n_up, const SweepOptions& options) {
  auto basis = std::make_shared<const SectorBasis>(enumerate_sector(geom, n_up));
  const int k = std::min<int>(options.lanczos.k, static_cast<int>(basis->size()));

  SectorSpectrum spec;
  if (basis->size() <= options.dense_below) {
    spec = dense_lowest(build_ladder_hamiltonian(geom, *basis), k, options.lanczos.tol);
  } else {
    const auto op = make_exchange_operator(basis, ladder_bonds(geom), options.memory_budget);
    LanczosOptions lanczos = options.lanczos;
    lanczos.k = k;
    try {
      spec = lanczos_lowest(*op, lanczos, basis->sz());
    } catch (const NonConvergenceError& e) {
      if (basis->size() > kDenseCap)
        throw NonConvergenceError("sector Sz = " + std::to_string(sz_of(n_up, geom.L)) + ": " + e.what(),
                                  e.best_residual(), e.iterations());
      spec = dense_lowest(build_ladder_hamiltonian(geom, *basis), k, options.lanczos.tol);
    }
  }
  spec.n_up = n_up;
  spec.sz = basis->sz();
  return spec;
}

std::vector<double> spin_flip(std::span<const double> v, const SectorBasis& from, const SectorBasis& to) {
  if (from.n_sites() != to.n_sites() || from.n_up() + to.n_up() != from.n_sites() || v.size() != from.size())
    throw ContractViolation("spin_flip: sectors are not spin-flip images");
  const std::uint64_t mask = (std::uint64_t{1} << from.n_sites()) - 1;
  std::vector<double> out(to.size());
  const auto configs = from.configs();
  for (std::size_t i = 0; i < configs.size(); ++i)
    out[to.rank_unchecked(SpinConfig{~configs[i].bits & mask})] = v[i];
  return out;
}

std::vector<SectorSpectrum> sector_sweep(const LadderGeometry& geom, const SweepOptions& options) {
  geom.validate();
  const int L = geom.L;
  std::vector<SectorSpectrum> spectra(2 * L + 1);
  for (int n_up = L; n_up <= 2 * L; ++n_up) spectra[n_up] = solve_sector(geom, n_up, options);
  for (int n_up = 0; n_up < L; ++n_up) {
    const SectorSpectrum& image = spectra[2 * L - n_up];
    SectorSpectrum s = image;
    s.n_up = n_up;
    s.sz = sz_of(n_up, L);
    s.ground_vector = spin_flip(image.ground_vector, SectorBasis(2 * L, 2 * L - n_up), SectorBasis(2 * L, n_up));
    spectra[n_up] = std::move(s);
  }
  return spectra;
}

std::size_t GroundStateCurve::interval_at(double field) const noexcept {
  return static_cast<std::size_t>(std::upper_bound(crossings.begin(), crossings.end(), field) -
                                  crossings.begin());
}

GroundStateCurve ground_state_curve(std::span<const SectorSpectrum> spectra) {
  int L = -1;
  for (const auto& s : spectra) L = std::max(L, static_cast<int>(std::lround(s.sz)));
  if (L < 1) throw ContractViolation("ground_state_curve: no sectors with Sz > 0");

  std::vector<std::ptrdiff_t> by_sz(L + 1, -1);
  double scale = 1.0;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const double sz = spectra[i].sz;
    if (sz < 0.0) continue;
    if (std::abs(sz - std::round(sz)) > 1e-12)
      throw ContractViolation("ground_state_curve expects integer Sz sectors");
    by_sz[std::lround(sz)] = static_cast<std::ptrdiff_t>(i);
    scale = std::max(scale, std::abs(spectra[i].eigenvalues.at(0)));
  }
  for (int sz = 0; sz <= L; ++sz)
    if (by_sz[sz] < 0) throw ContractViolation("ground_state_curve: sector Sz = " + std::to_string(sz) + " missing");

  auto energy = [&](int sz) { return spectra[by_sz[sz]].eigenvalues[0]; };
  const double tau = 1e-11 * scale;

  // Lower convex hull over Sz = 0..L (monotone chain).
  std::vector<int> hull;
  for (int sz = 0; sz <= L; ++sz) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      const double chord = energy(a) + (energy(sz) - energy(a)) * (b - a) / static_cast<double>(sz - a);
      if (energy(b) < chord - tau) break;
      hull.pop_back();
    }
    hull.push_back(sz);
  }

  GroundStateCurve curve;
  curve.L = L;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    curve.sz_per_interval.push_back(hull[i]);
    curve.spectrum_index.push_back(static_cast<std::size_t>(by_sz[hull[i]]));
    if (i + 1 < hull.size())
      curve.crossings.push_back((energy(hull[i + 1]) - energy(hull[i])) / (hull[i + 1] - hull[i]));
  }
  return curve;
}

double spin_gap(std::span<const SectorSpectrum> spectra) {
  const SectorSpectrum* s0 = nullptr;
  const SectorSpectrum* s1 = nullptr;
  for (const auto& s : spectra) {
    if (std::abs(s.sz) < 1e-12) s0 = &s;
    if (std::abs(s.sz - 1.0) < 1e-12) s1 = &s;
  }
  if (s0 == nullptr || s1 == nullptr) throw ContractViolation("spin_gap needs the Sz = 0 and Sz = 1 sectors");
  return s1->eigenvalues.at(0) - s0->eigenvalues.at(0);
}

double spin_gap(const LadderGeometry& geom, const SweepOptions& options) {
  SweepOptions single = options;
  single.lanczos.k = 1;
  const SectorSpectrum s0 = solve_sector(geom, geom.L, single);
  const SectorSpectrum s1 = solve_sector(geom, geom.L + 1, single);
  return s1.eigenvalues[0] - s0.eigenvalues[0];
}

}  // namespace ladder
