#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ladder/operators.hpp"

namespace ladder {

struct LanczosOptions {
  int k = 1;                 ///< number of lowest eigenpairs
  double tol = 1e-10;        ///< eigenvalue change and residual bound (kelvin)
  int max_iter = 0;          ///< matvecs per eigenpair; 0 means 5*sqrt(dim) + 200
  std::uint64_t seed = 1;
  int max_basis = 40;        ///< Krylov vectors kept before a thick restart
};

/// Lowest zero-field levels of one Sz sector.
struct SectorSpectrum {
  int n_up = 0;
  double sz = 0.0;
  std::size_t dim = 0;
  std::vector<double> eigenvalues;   ///< ascending
  std::vector<double> residuals;     ///< |H v - E v| per eigenvalue
  std::vector<double> ground_vector; ///< normalized eigenvector of eigenvalues[0]
  bool degenerate = false;           ///< E1 - E0 < 100 tol (needs k >= 2)
  int iterations = 0;                ///< total matvecs

  /// Zeeman-shifted level n at field H: E_n - H * Sz.
  double energy_at(double field, std::size_t n = 0) const { return eigenvalues.at(n) - field * sz; }
};

/// Lanczos with full reorthogonalization and thick restart. Eigenpairs are
/// found one at a time; converged vectors are locked and every later Krylov
/// space is kept orthogonal to them, so degenerate levels are resolved.
/// Throws NonConvergenceError (carrying the best residual) when max_iter is
/// exhausted.
SectorSpectrum lanczos_lowest(const LinearOperator& h, const LanczosOptions& options, double sz = 0.0);

struct DenseSpectrum {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< orthonormal columns
};

inline constexpr std::size_t kDenseCap = 4096;

/// Full symmetric eigendecomposition. Throws DomainError if dim > cap.
DenseSpectrum dense_solve(const SparseHamiltonian& h, std::size_t cap = kDenseCap);

Eigen::MatrixXd to_dense(const SparseHamiltonian& h);

/// Lowest `k` levels from dense_solve, packaged like lanczos_lowest output.
SectorSpectrum dense_lowest(const SparseHamiltonian& h, int k, double tol);

}  // namespace ladder
