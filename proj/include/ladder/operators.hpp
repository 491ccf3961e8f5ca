#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "ladder/basis.hpp"

namespace ladder {

/// Two-site exchange term jz * Sz_a Sz_b + (jxy / 2) * (S+_a S-_b + S-_a S+_b).
struct Bond {
  int a = 0;
  int b = 0;
  double jz = 0.0;
  double jxy = 0.0;
};

/// L rung bonds followed by 2L leg bonds (a,j)-(a,j+1 mod L). With periodic
/// boundaries the sum over j is taken literally, so L = 2 carries each leg
/// bond twice.
std::vector<Bond> ladder_bonds(const LadderGeometry& geom);

/// XXZ chain: zz coupling j * anisotropy, flip amplitude j / 2.
std::vector<Bond> xxz_chain_bonds(int L, double j, double anisotropy, bool periodic);

/// Anything Lanczos can multiply by.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dim() const noexcept = 0;
  /// y = H x. Both spans have length dim().
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
};

/// Real symmetric sector Hamiltonian. Off-diagonal entries are stored once
/// (row < col) in row-compressed form and applied symmetrically. The Zeeman
/// term is not included: within a sector it is the constant -H * sz().
class SparseHamiltonian final : public LinearOperator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseHamiltonian() = default;

  std::size_t dim() const noexcept override { return diag_.size(); }
  double sz() const noexcept { return sz_; }
  std::span<const double> diag() const noexcept { return diag_; }
  std::size_t offdiag_count() const noexcept { return cols_.size(); }

  void apply(std::span<const double> x, std::span<double> y) const override;

  /// Calls f(Entry) for every stored off-diagonal triple, rows ascending.
  template <class F>
  void for_each_offdiag(F&& f) const {
    for (std::size_t r = 0; r + 1 < row_start_.size(); ++r)
      for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e)
        f(Entry{r, cols_[e], values_[e]});
  }

  std::size_t memory_bytes() const noexcept;

 private:
  friend SparseHamiltonian build_exchange_hamiltonian(const SectorBasis&, std::span<const Bond>);

  double sz_ = 0.0;
  std::vector<double> diag_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

SparseHamiltonian build_exchange_hamiltonian(const SectorBasis& basis, std::span<const Bond> bonds);

/// Zero-field ladder Hamiltonian restricted to `basis`.
SparseHamiltonian build_ladder_hamiltonian(const LadderGeometry& geom, const SectorBasis& basis);

/// Effective XXZ chain on L sites (basis over L spins).
SparseHamiltonian build_xxz_chain(int L, double j, double anisotropy, const SectorBasis& basis,
                                  bool periodic = true);

/// Applies the same exchange Hamiltonian without storing it. Each
/// off-diagonal element costs a basis rank lookup.
class MatrixFreeHamiltonian final : public LinearOperator {
 public:
  MatrixFreeHamiltonian(std::shared_ptr<const SectorBasis> basis, std::vector<Bond> bonds);

  std::size_t dim() const noexcept override { return basis_->size(); }
  void apply(std::span<const double> x, std::span<double> y) const override;

 private:
  std::shared_ptr<const SectorBasis> basis_;
  std::vector<Bond> bonds_;
  std::vector<double> diag_;
};

/// Bytes the stored form would take for `basis` and `bonds`; counts without
/// building.
std::size_t estimate_hamiltonian_bytes(const SectorBasis& basis, std::span<const Bond> bonds);

/// Stored matrix when it fits in `memory_budget` bytes, matrix-free otherwise.
std::unique_ptr<LinearOperator> make_exchange_operator(std::shared_ptr<const SectorBasis> basis,
                                                       std::vector<Bond> bonds,
                                                       std::size_t memory_budget);

/// y = h x as a new vector. Throws ContractViolation on size mismatch.
std::vector<double> matvec(const LinearOperator& h, std::span<const double> x);

/// Spin expectation values of a normalized real state.
struct CorrelatorSet {
  std::vector<double> sz;                         ///< <S^z_i> for every site
  std::map<std::pair<int, int>, double> szsz;     ///< <S^z_i S^z_j>
  std::map<std::pair<int, int>, double> pm;       ///< <S^+_i S^-_j>
};

/// Throws ContractViolation if | |state| - 1 | > 1e-10.
CorrelatorSet correlators(std::span<const double> state, const SectorBasis& basis,
                          std::span<const std::pair<int, int>> pairs);

}  // namespace ladder
