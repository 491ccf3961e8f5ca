#include "ladder/operators.hpp"

#include <cmath>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

std::vector<Bond> ladder_bonds(const LadderGeometry& geom) {
  geom.validate();
  std::vector<Bond> bonds;
  bonds.reserve(3 * geom.L);
  for (int j = 0; j < geom.L; ++j) {
    bonds.push_back({LadderGeometry::site(1, j), LadderGeometry::site(2, j), geom.j_perp, geom.j_perp});
  }
  const int last = geom.periodic ? geom.L : geom.L - 1;
  for (int leg = 1; leg <= 2; ++leg) {
    for (int j = 0; j < last; ++j) {
      bonds.push_back({LadderGeometry::site(leg, j), LadderGeometry::site(leg, (j + 1) % geom.L),
                       geom.j_par, geom.j_par});
    }
  }
  return bonds;
}

std::vector<Bond> xxz_chain_bonds(int L, double j, double anisotropy, bool periodic) {
  if (L < 2) throw DomainError("chain needs at least two sites");
  std::vector<Bond> bonds;
  const int last = periodic ? L : L - 1;
  for (int s = 0; s < last; ++s) bonds.push_back({s, (s + 1) % L, j * anisotropy, j});
  return bonds;
}

namespace {

double diagonal_energy(SpinConfig c, std::span<const Bond> bonds) {
  double e = 0.0;
  for (const auto& b : bonds) e += (c.up(b.a) == c.up(b.b) ? 0.25 : -0.25) * b.jz;
  return e;
}

void check_bonds(const SectorBasis& basis, std::span<const Bond> bonds) {
  for (const auto& b : bonds) {
    if (b.a < 0 || b.b < 0 || b.a >= basis.n_sites() || b.b >= basis.n_sites() || b.a == b.b)
      throw DomainError("bond (" + std::to_string(b.a) + ", " + std::to_string(b.b) +
                        ") invalid for " + std::to_string(basis.n_sites()) + " sites");
  }
}

std::size_t count_directed_offdiag(const SectorBasis& basis, std::span<const Bond> bonds) {
  std::size_t directed = 0;
  for (const SpinConfig c : basis.configs())
    for (const auto& b : bonds)
      if (b.jxy != 0.0 && c.up(b.a) != c.up(b.b)) ++directed;
  return directed;
}

}  // namespace

SparseHamiltonian build_exchange_hamiltonian(const SectorBasis& basis, std::span<const Bond> bonds) {
  check_bonds(basis, bonds);
  if (basis.size() > std::size_t{0xFFFFFFFF}) throw DomainError("sector too large for 32-bit columns");

  SparseHamiltonian h;
  h.sz_ = basis.sz();
  const std::size_t dim = basis.size();
  h.diag_.resize(dim);
  h.row_start_.reserve(dim + 1);
  h.row_start_.push_back(0);
  // Symmetric pattern: exactly half of the directed entries sit above the diagonal.
  const std::size_t upper = count_directed_offdiag(basis, bonds) / 2;
  h.cols_.reserve(upper);
  h.values_.reserve(upper);

  const auto configs = basis.configs();
  for (std::size_t r = 0; r < dim; ++r) {
    const SpinConfig c = configs[r];
    h.diag_[r] = diagonal_energy(c, bonds);
    for (const auto& b : bonds) {
      if (b.jxy == 0.0 || c.up(b.a) == c.up(b.b)) continue;
      const std::size_t col = basis.rank_unchecked(c.exchanged(b.a, b.b));
      if (col > r) {
        h.cols_.push_back(static_cast<std::uint32_t>(col));
        h.values_.push_back(0.5 * b.jxy);
      }
    }
    h.row_start_.push_back(h.cols_.size());
  }
  return h;
}

SparseHamiltonian build_ladder_hamiltonian(const LadderGeometry& geom, const SectorBasis& basis) {
  if (basis.n_sites() != geom.n_sites())
    throw ContractViolation("basis has " + std::to_string(basis.n_sites()) +
                            " sites, ladder needs " + std::to_string(geom.n_sites()));
  const auto bonds = ladder_bonds(geom);
  return build_exchange_hamiltonian(basis, bonds);
}

SparseHamiltonian build_xxz_chain(int L, double j, double anisotropy, const SectorBasis& basis,
                                  bool periodic) {
  if (basis.n_sites() != L) throw ContractViolation("chain basis must cover exactly L sites");
  const auto bonds = xxz_chain_bonds(L, j, anisotropy, periodic);
  return build_exchange_hamiltonian(basis, bonds);
}

void SparseHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) throw ContractViolation("matvec dimension mismatch");
  for (std::size_t r = 0; r < n; ++r) y[r] = diag_[r] * x[r];
  for (std::size_t r = 0; r < n; ++r) {
    const double xr = x[r];
    double acc = 0.0;
    for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
      const std::size_t c = cols_[e];
      acc += values_[e] * x[c];
      y[c] += values_[e] * xr;
    }
    y[r] += acc;
  }
}

std::size_t SparseHamiltonian::memory_bytes() const noexcept {
  return diag_.size() * sizeof(double) + row_start_.size() * sizeof(std::size_t) +
         cols_.size() * (sizeof(std::uint32_t) + sizeof(double));
}

std::size_t estimate_hamiltonian_bytes(const SectorBasis& basis, std::span<const Bond> bonds) {
  const std::size_t directed = count_directed_offdiag(basis, bonds);
  const std::size_t dim = basis.size();
  return dim * (sizeof(double) + sizeof(std::size_t)) +
         directed / 2 * (sizeof(std::uint32_t) + sizeof(double));
}

MatrixFreeHamiltonian::MatrixFreeHamiltonian(std::shared_ptr<const SectorBasis> basis,
                                             std::vector<Bond> bonds)
    : basis_(std::move(basis)), bonds_(std::move(bonds)) {
  check_bonds(*basis_, bonds_);
  diag_.reserve(basis_->size());
  for (const SpinConfig c : basis_->configs()) diag_.push_back(diagonal_energy(c, bonds_));
}

void MatrixFreeHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) throw ContractViolation("matvec dimension mismatch");
  const auto configs = basis_->configs();
  // Gather form: row r collects from every column it couples to, so the
  // result is assembled in a fixed order.
  for (std::size_t r = 0; r < n; ++r) {
    const SpinConfig c = configs[r];
    double acc = diag_[r] * x[r];
    for (const auto& b : bonds_) {
      if (b.jxy == 0.0 || c.up(b.a) == c.up(b.b)) continue;
      acc += 0.5 * b.jxy * x[basis_->rank_unchecked(c.exchanged(b.a, b.b))];
    }
    y[r] = acc;
  }
}

std::unique_ptr<LinearOperator> make_exchange_operator(std::shared_ptr<const SectorBasis> basis,
                                                       std::vector<Bond> bonds,
                                                       std::size_t memory_budget) {
  if (estimate_hamiltonian_bytes(*basis, bonds) <= memory_budget)
    return std::make_unique<SparseHamiltonian>(build_exchange_hamiltonian(*basis, bonds));
  return std::make_unique<MatrixFreeHamiltonian>(std::move(basis), std::move(bonds));
}

std::vector<double> matvec(const LinearOperator& h, std::span<const double> x) {
  if (x.size() != h.dim())
    throw ContractViolation("matvec: vector has " + std::to_string(x.size()) +
                            " entries, operator dimension is " + std::to_string(h.dim()));
  std::vector<double> y(x.size());
  h.apply(x, y);
  return y;
}

CorrelatorSet correlators(std::span<const double> state, const SectorBasis& basis,
                          std::span<const std::pair<int, int>> pairs) {
  if (state.size() != basis.size()) throw ContractViolation("state size does not match basis");
  double norm2 = 0.0;
  for (double a : state) norm2 += a * a;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10)
    throw ContractViolation("state is not normalized (norm = " + std::to_string(std::sqrt(norm2)) + ")");

  const int n = basis.n_sites();
  for (const auto& [i, j] : pairs)
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw ContractViolation("invalid site pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");

  CorrelatorSet out;
  out.sz.assign(n, 0.0);
  for (const auto& p : pairs) {
    out.szsz[p] = 0.0;
    out.pm[p] = 0.0;
  }

  const auto configs = basis.configs();
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const double w = state[k] * state[k];
    if (w == 0.0) continue;
    const SpinConfig c = configs[k];
    for (int s = 0; s < n; ++s) out.sz[s] += (c.up(s) ? 0.5 : -0.5) * w;
    for (const auto& p : pairs) out.szsz[p] += (c.up(p.first) == c.up(p.second) ? 0.25 : -0.25) * w;
  }
  // <S+_i S-_j>: from configurations with j up and i down.
  for (const auto& p : pairs) {
    const auto [i, j] = p;
    double acc = 0.0;
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const SpinConfig c = configs[k];
      if (!c.up(j) || c.up(i)) continue;
      acc += state[basis.rank_unchecked(c.exchanged(i, j))] * state[k];
    }
    out.pm[p] = acc;
  }
  return out;
}

}  // namespace ladder
