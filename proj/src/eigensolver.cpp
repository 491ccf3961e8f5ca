#include "ladder/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

namespace {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void scale(std::span<double> a, double s) {
  for (double& v : a) v *= s;
}

// Uniform in [-1, 1) from the raw 64-bit stream, so the start vector does not
// depend on the standard library's distribution implementation.
Vec random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Vec v(n);
  for (double& x : v) x = 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
  return v;
}

// Two passes of classical Gram-Schmidt against `locked` and `basis`.
// Returns the projection coefficients onto `basis` (summed over passes).
Vec orthogonalize(std::span<double> w, const std::vector<Vec>& locked, const std::vector<Vec>& basis) {
  Vec h(basis.size(), 0.0);
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : locked) axpy(-dot(u, w), u, w);
    Vec c(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) c[i] = dot(basis[i], w);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      axpy(-c[i], basis[i], w);
      h[i] += c[i];
    }
  }
  return h;
}

struct Eigenpair {
  double value = 0.0;
  Vec vector;
  double residual = 0.0;
  int iterations = 0;
};

// Lowest eigenpair of h restricted to the orthogonal complement of `locked`.
Eigenpair lowest_in_complement(const LinearOperator& h, const std::vector<Vec>& locked,
                               const LanczosOptions& opt, std::uint64_t seed, int max_iter) {
  const std::size_t n = h.dim();
  const std::size_t room = n - locked.size();
  const std::size_t max_basis =
      std::min<std::size_t>(std::max(opt.max_basis, 4), std::max<std::size_t>(room, 1));
  const std::size_t keep = std::max<std::size_t>(1, max_basis / 2);

  std::vector<Vec> basis;
  Vec start = random_vector(n, seed);
  orthogonalize(start, locked, basis);
  double start_norm = norm(start);
  if (start_norm < 1e-8) {
    // Degenerate draw (tiny complements only); fall back to unit vectors.
    for (std::size_t e = 0; e < n && start_norm < 1e-8; ++e) {
      std::fill(start.begin(), start.end(), 0.0);
      start[e] = 1.0;
      orthogonalize(start, locked, basis);
      start_norm = norm(start);
    }
  }
  scale(start, 1.0 / start_norm);
  basis.push_back(std::move(start));

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(max_basis, max_basis);
  Vec w(n);
  double previous = std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();
  int iters = 0;

  while (true) {
    const std::size_t j = basis.size() - 1;
    h.apply(basis[j], w);
    ++iters;
    const Vec coeff = orthogonalize(w, locked, basis);
    for (std::size_t i = 0; i <= j; ++i) {
      t(i, j) = coeff[i];
      t(j, i) = coeff[i];
    }
    const double beta = norm(w);

    const std::size_t m = j + 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t.topLeftCorner(m, m));
    const double theta = ritz.eigenvalues()(0);
    const double residual = beta * std::abs(ritz.eigenvectors()(j, 0));
    best_residual = std::min(best_residual, residual);

    const double scale_est = std::max(1.0, t.topLeftCorner(m, m).cwiseAbs().maxCoeff());
    const bool exhausted = beta <= 1e-13 * scale_est || m >= room;
    const bool converged = exhausted || (std::abs(theta - previous) < opt.tol && residual <= opt.tol);
    previous = theta;

    if (converged) {
      Eigenpair out;
      out.value = theta;
      out.vector.assign(n, 0.0);
      for (std::size_t i = 0; i < m; ++i) axpy(ritz.eigenvectors()(i, 0), basis[i], out.vector);
      orthogonalize(out.vector, locked, {});
      scale(out.vector, 1.0 / norm(out.vector));
      out.iterations = iters;
      return out;
    }
    if (iters >= max_iter)
      throw NonConvergenceError("Lanczos did not converge in " + std::to_string(iters) +
                                    " iterations (best residual " + std::to_string(best_residual) + ")",
                                best_residual, iters);

    if (m == max_basis) {
      // Thick restart: keep the lowest Ritz vectors; the next vector is the
      // current residual direction, whose couplings to them are recomputed by
      // the next orthogonalization.
      std::vector<Vec> kept(keep, Vec(n, 0.0));
      for (std::size_t q = 0; q < keep; ++q)
        for (std::size_t i = 0; i < m; ++i) axpy(ritz.eigenvectors()(i, q), basis[i], kept[q]);
      basis = std::move(kept);
      t.setZero();
      for (std::size_t q = 0; q < keep; ++q) t(q, q) = ritz.eigenvalues()(q);
    }
    scale(w, 1.0 / beta);
    basis.push_back(w);
  }
}

}  // namespace

SectorSpectrum lanczos_lowest(const LinearOperator& h, const LanczosOptions& options, double sz) {
  const std::size_t n = h.dim();
  if (n == 0) throw DomainError("empty operator");
  if (options.k < 1 || static_cast<std::size_t>(options.k) > n)
    throw DomainError("requested " + std::to_string(options.k) + " eigenpairs of a " +
                      std::to_string(n) + "-dimensional operator");
  if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");

  const int max_iter = options.max_iter > 0
                           ? options.max_iter
                           : static_cast<int>(5.0 * std::sqrt(static_cast<double>(n))) + 200;

  SectorSpectrum out;
  out.sz = sz;
  out.dim = n;
  std::vector<Vec> locked;
  Vec hv(n);
  for (int level = 0; level < options.k; ++level) {
    Eigenpair pair = lowest_in_complement(h, locked, options, options.seed + level, max_iter);
    h.apply(pair.vector, hv);
    axpy(-pair.value, pair.vector, hv);
    out.eigenvalues.push_back(pair.value);
    out.residuals.push_back(norm(hv));
    out.iterations += pair.iterations + 1;
    locked.push_back(std::move(pair.vector));
  }

  // Locked levels come out ascending up to round-off.
  std::vector<std::size_t> order(out.eigenvalues.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out.eigenvalues[a] < out.eigenvalues[b]; });
  SectorSpectrum sorted = out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.eigenvalues[i] = out.eigenvalues[order[i]];
    sorted.residuals[i] = out.residuals[order[i]];
  }
  sorted.ground_vector = std::move(locked[order[0]]);
  if (sorted.eigenvalues.size() >= 2)
    sorted.degenerate = sorted.eigenvalues[1] - sorted.eigenvalues[0] < 100.0 * options.tol;
  return sorted;
}

Eigen::MatrixXd to_dense(const SparseHamiltonian& h) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = h.diag()[i];
  h.for_each_offdiag([&](const SparseHamiltonian::Entry& e) {
    m(e.row, e.col) += e.value;
    m(e.col, e.row) += e.value;
  });
  return m;
}

DenseSpectrum dense_solve(const SparseHamiltonian& h, std::size_t cap) {
  if (h.dim() > cap)
    throw DomainError("dense solve capped at " + std::to_string(cap) + ", sector has " +
                      std::to_string(h.dim()) + " states");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(h));
  return {es.eigenvalues(), es.eigenvectors()};
}

SectorSpectrum dense_lowest(const SparseHamiltonian& h, int k, double tol) {
  const DenseSpectrum d = dense_solve(h);
  const int levels = std::min<int>(k, static_cast<int>(d.values.size()));
  SectorSpectrum out;
  out.sz = h.sz();
  out.dim = h.dim();
  const Eigen::MatrixXd dense = to_dense(h);
  for (int i = 0; i < levels; ++i) {
    out.eigenvalues.push_back(d.values(i));
    out.residuals.push_back((dense * d.vectors.col(i) - d.values(i) * d.vectors.col(i)).norm());
  }
  out.ground_vector.assign(d.vectors.col(0).data(), d.vectors.col(0).data() + d.vectors.rows());
  if (levels >= 2) out.degenerate = out.eigenvalues[1] - out.eigenvalues[0] < 100.0 * tol;
  return out;
}

}  // namespace ladder
