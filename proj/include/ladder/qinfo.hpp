#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "ladder/basis.hpp"
#include "ladder/operators.hpp"

namespace ladder {

/// Reduced density matrix of N/2 qubits. Rows and columns run over
/// |up...>, ..., |down...> with up first: one site {up, down}, two sites
/// {uu, ud, du, dd}. Entries are real for the real states used here.
template <int N>
struct Rdm {
  Eigen::Matrix<double, N, N> m = Eigen::Matrix<double, N, N>::Zero();
};

using Rdm1 = Rdm<2>;
using Rdm2 = Rdm<4>;

/// Eigenvalues in [-1e-10, 0) are treated as zero before logs and roots.
inline constexpr double kEigenClamp = 1e-10;

/// Trace 1 to 1e-12, symmetric and no eigenvalue below -kEigenClamp, or
/// NumericalConsistencyError.
template <int N>
void validate(const Rdm<N>& rho);

/// Clamped eigenvalues, ascending.
template <int N>
Eigen::Matrix<double, N, 1> spectrum(const Rdm<N>& rho);

Rdm1 rdm1(std::span<const double> state, const SectorBasis& basis, int site);
/// diag(1/2 + <Sz>, 1/2 - <Sz>). Throws DomainError unless |sz| <= 1/2.
Rdm1 rdm1_from_m(double sz);

/// Direct partial trace of |state><state| over all sites except i and j.
Rdm2 rdm2_from_state(std::span<const double> state, const SectorBasis& basis, int i, int j);
/// Sz-conserving pattern from expectation values:
///   rho_11 = 1/4 + (<Sz_i> + <Sz_j>)/2 + <Sz_i Sz_j>,
///   rho_44 = 1/4 - (<Sz_i> + <Sz_j>)/2 + <Sz_i Sz_j>,
///   rho_22 = 1/4 + (<Sz_i> - <Sz_j>)/2 - <Sz_i Sz_j>, rho_33 likewise,
///   rho_23 = rho_32 = <S+_i S-_j>.
Rdm2 rdm2_from_correlators(const CorrelatorSet& c, int i, int j);
/// Same pattern for a translation-invariant pair: both sites carry `sz`.
Rdm2 rdm2_from_expectations(double sz, double szsz, double pm);

/// von Neumann entropy in bits.
template <int N>
double entropy(const Rdm<N>& rho);

/// Wootters concurrence: lambda_1 - lambda_2 - lambda_3 - lambda_4 clamped at 0,
/// lambda the square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence(const Rdm2& rho);
/// Closed form for the Sz-conserving pattern: 2 max(0, |rho_23| - sqrt(rho_11 rho_44)).
double concurrence_xstate(const Rdm2& rho);

/// A state vector tagged with its sector.
struct TaggedState {
  std::span<const double> vector;
  int n_up = 0;
};

/// |<v1|v2>|; zero for different sectors.
double fidelity_global(const TaggedState& a, const TaggedState& b);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)). Diagonal inputs take
/// the exact sum_i sqrt(p_i q_i).
template <int N>
double fidelity_reduced(const Rdm<N>& rho, const Rdm<N>& sigma);

struct RfsResult {
  double chi = 0.0;          ///< -2 ln F_R(H, H + delta) / delta^2 (1/K^2)
  double fidelity = 1.0;     ///< F_R(H, H + delta)
  bool divergent = false;    ///< F_R == 0, chi reported as +inf
  bool converged = false;    ///< chi stable to 1% under two halvings of delta
  double chi_half = 0.0;
  double chi_quarter = 0.0;
};

using RdmSource = std::function<Rdm1(double)>;

/// Reduced fidelity susceptibility at finite delta, with a convergence check
/// at delta / 2 and delta / 4. Throws DomainError unless delta > 0.
RfsResult rfs(double field, double delta, const RdmSource& source);

}  // namespace ladder
