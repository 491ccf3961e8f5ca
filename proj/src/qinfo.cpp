#include "ladder/qinfo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

namespace {

template <int N>
using Mat = Eigen::Matrix<double, N, N>;

template <int N>
Mat<N> matrix_sqrt(const Mat<N>& m) {
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(m);
  Eigen::Matrix<double, N, 1> root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

template <int N>
bool is_diagonal(const Mat<N>& m) {
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

// Local two-site index for the (i, j) spin pattern, up first.
int pair_index(SpinConfig c, int i, int j) { return (c.up(i) ? 0 : 2) + (c.up(j) ? 0 : 1); }

SpinConfig with_pair(SpinConfig c, int i, int j, int index) {
  std::uint64_t bits = c.bits & ~((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
  if ((index & 2) == 0) bits |= std::uint64_t{1} << i;
  if ((index & 1) == 0) bits |= std::uint64_t{1} << j;
  return SpinConfig{bits};
}

void check_state(std::span<const double> state, const SectorBasis& basis) {
  if (state.size() != basis.size()) throw ContractViolation("state size does not match basis");
}

void check_site(int s, const SectorBasis& basis) {
  if (s < 0 || s >= basis.n_sites()) throw ContractViolation("site " + std::to_string(s) + " out of range");
}

}  // namespace

template <int N>
void validate(const Rdm<N>& rho) {
  const double trace = rho.m.trace();
  if (std::abs(trace - 1.0) > 1e-12)
    throw NumericalConsistencyError("reduced density matrix trace " + std::to_string(trace));
  if ((rho.m - rho.m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NumericalConsistencyError("reduced density matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(rho.m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -kEigenClamp)
    throw NumericalConsistencyError("reduced density matrix has eigenvalue " +
                                    std::to_string(es.eigenvalues()(0)));
}

template <int N>
Eigen::Matrix<double, N, 1> spectrum(const Rdm<N>& rho) {
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(rho.m, Eigen::EigenvaluesOnly);
  Eigen::Matrix<double, N, 1> ev = es.eigenvalues();
  for (int i = 0; i < N; ++i)
    if (ev(i) < 0.0 && ev(i) >= -kEigenClamp) ev(i) = 0.0;
  return ev;
}

Rdm1 rdm1(std::span<const double> state, const SectorBasis& basis, int site) {
  check_state(state, basis);
  check_site(site, basis);
  // Off-diagonal elements change Sz and vanish within one sector.
  Rdm1 rho;
  const auto configs = basis.configs();
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const double w = state[k] * state[k];
    rho.m(configs[k].up(site) ? 0 : 1, configs[k].up(site) ? 0 : 1) += w;
  }
  return rho;
}

Rdm1 rdm1_from_m(double sz) {
  if (!(std::abs(sz) <= 0.5)) throw DomainError("<Sz> = " + std::to_string(sz) + " outside [-1/2, 1/2]");
  Rdm1 rho;
  rho.m(0, 0) = 0.5 + sz;
  rho.m(1, 1) = 0.5 - sz;
  return rho;
}

Rdm2 rdm2_from_state(std::span<const double> state, const SectorBasis& basis, int i, int j) {
  check_state(state, basis);
  check_site(i, basis);
  check_site(j, basis);
  if (i == j) throw ContractViolation("two-site density matrix needs i != j");
  Rdm2 rho;
  const auto configs = basis.configs();
  for (std::size_t k = 0; k < configs.size(); ++k) {
    if (state[k] == 0.0) continue;
    const int a = pair_index(configs[k], i, j);
    for (int b = 0; b < 4; ++b) {
      const auto partner = basis.find(with_pair(configs[k], i, j, b));
      if (partner) rho.m(a, b) += state[k] * state[*partner];
    }
  }
  return rho;
}

Rdm2 rdm2_from_correlators(const CorrelatorSet& c, int i, int j) {
  if (i == j) throw ContractViolation("two-site density matrix needs i != j");
  const auto key = std::make_pair(i, j);
  const auto zz = c.szsz.find(key);
  const auto pm = c.pm.find(key);
  if (zz == c.szsz.end() || pm == c.pm.end() || i < 0 || j < 0 ||
      static_cast<std::size_t>(std::max(i, j)) >= c.sz.size())
    throw ContractViolation("correlator set lacks pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  const double si = c.sz[i];
  const double sj = c.sz[j];
  Rdm2 rho;
  rho.m(0, 0) = 0.25 + 0.5 * (si + sj) + zz->second;
  rho.m(1, 1) = 0.25 + 0.5 * (si - sj) - zz->second;
  rho.m(2, 2) = 0.25 - 0.5 * (si - sj) - zz->second;
  rho.m(3, 3) = 0.25 - 0.5 * (si + sj) + zz->second;
  rho.m(1, 2) = pm->second;
  rho.m(2, 1) = pm->second;
  return rho;
}

Rdm2 rdm2_from_expectations(double sz, double szsz, double pm) {
  Rdm2 rho;
  rho.m(0, 0) = 0.25 + sz + szsz;
  rho.m(1, 1) = 0.25 - szsz;
  rho.m(2, 2) = 0.25 - szsz;
  rho.m(3, 3) = 0.25 - sz + szsz;
  rho.m(1, 2) = pm;
  rho.m(2, 1) = pm;
  return rho;
}

template <int N>
double entropy(const Rdm<N>& rho) {
  validate(rho);
  const auto ev = spectrum(rho);
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    if (ev(i) > 0.0) s -= ev(i) * std::log2(ev(i));
  return s;
}

double concurrence(const Rdm2& rho) {
  validate(rho);
  Mat<4> flip = Mat<4>::Zero();
  flip(0, 3) = -1.0;
  flip(3, 0) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  // Real entries, so rho* = rho.
  const Mat<4> reversed = flip * rho.m * flip;
  const Mat<4> root = matrix_sqrt<4>(rho.m);
  const Mat<4> r = root * reversed * root;
  Eigen::SelfAdjointEigenSolver<Mat<4>> es(0.5 * (r + r.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::Vector4d lambda = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // Ascending order: lambda(3) is the largest.
  return std::max(0.0, lambda(3) - lambda(2) - lambda(1) - lambda(0));
}

double concurrence_xstate(const Rdm2& rho) {
  const double product = rho.m(0, 0) * rho.m(3, 3);
  if (product < -kEigenClamp) throw NumericalConsistencyError("rho_11 rho_44 < 0");
  return 2.0 * std::max(0.0, std::abs(rho.m(1, 2)) - std::sqrt(std::max(0.0, product)));
}

double fidelity_global(const TaggedState& a, const TaggedState& b) {
  if (a.n_up != b.n_up) return 0.0;
  if (a.vector.size() != b.vector.size()) throw ContractViolation("states in one sector must have equal size");
  double s = 0.0;
  for (std::size_t i = 0; i < a.vector.size(); ++i) s += a.vector[i] * b.vector[i];
  return std::abs(s);
}

template <int N>
double fidelity_reduced(const Rdm<N>& rho, const Rdm<N>& sigma) {
  validate(rho);
  validate(sigma);
  double f = 0.0;
  if (is_diagonal<N>(rho.m) && is_diagonal<N>(sigma.m)) {
    for (int i = 0; i < N; ++i) f += std::sqrt(std::max(0.0, rho.m(i, i)) * std::max(0.0, sigma.m(i, i)));
  } else {
    const Mat<N> root = matrix_sqrt<N>(rho.m);
    const Mat<N> inner = root * sigma.m * root;
    Eigen::SelfAdjointEigenSolver<Mat<N>> es(0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
    f = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  }
  return std::min(f, 1.0);
}

RfsResult rfs(double field, double delta, const RdmSource& source) {
  if (!(delta > 0.0)) throw DomainError("fidelity offset must be positive");
  const Rdm1 base = source(field);
  auto chi_at = [&](double d, double* fidelity) {
    const double f = fidelity_reduced(base, source(field + d));
    if (fidelity != nullptr) *fidelity = f;
    if (f <= 0.0) return std::numeric_limits<double>::infinity();
    return -2.0 * std::log(f) / (d * d);
  };
  RfsResult out;
  out.chi = chi_at(delta, &out.fidelity);
  out.divergent = out.fidelity <= 0.0;
  out.chi_half = chi_at(0.5 * delta, nullptr);
  out.chi_quarter = chi_at(0.25 * delta, nullptr);
  if (!out.divergent) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 0.01 * std::max(std::abs(a), std::abs(b)); };
    out.converged = close(out.chi, out.chi_half) && close(out.chi_half, out.chi_quarter);
  }
  return out;
}

template void validate<2>(const Rdm<2>&);
template void validate<4>(const Rdm<4>&);
template Eigen::Matrix<double, 2, 1> spectrum<2>(const Rdm<2>&);
template Eigen::Matrix<double, 4, 1> spectrum<4>(const Rdm<4>&);
template double entropy<2>(const Rdm<2>&);
template double entropy<4>(const Rdm<4>&);
template double fidelity_reduced<2>(const Rdm<2>&, const Rdm<2>&);
template double fidelity_reduced<4>(const Rdm<4>&, const Rdm<4>&);

}  // namespace ladder
