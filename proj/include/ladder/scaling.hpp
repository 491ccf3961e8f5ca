#pragma once

#include <span>
#include <vector>

#include "ladder/ground_state.hpp"

namespace ladder {

struct GapPoint {
  int L = 0;
  double gap = 0.0;
};

/// gap(L) ~ c0 + c1 / L + c2 / L^2; c0 is the thermodynamic-limit gap.
struct GapFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double residual = 0.0;  ///< Euclidean norm of the fit residuals

  double at(double L) const noexcept { return c0 + c1 / L + c2 / (L * L); }
};

/// Least-squares quadratic in 1/L. Throws DomainError with fewer than three
/// distinct L values.
GapFit fit_gap(std::span<const GapPoint> series);

/// Piecewise cubic Hermite interpolant of a table with strictly increasing
/// abscissae. Nodal slopes come from three-point differences, so quadratic
/// data are reproduced exactly. With `monotone` the Fritsch-Carlson limiter
/// is applied and monotone data stay monotone.
class TabulatedCurve {
 public:
  TabulatedCurve() = default;
  TabulatedCurve(std::vector<double> x, std::vector<double> y, bool monotone = false);

  double operator()(double x) const;
  double x_min() const noexcept { return x_.front(); }
  double x_max() const noexcept { return x_.back(); }
  std::size_t size() const noexcept { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

/// Central difference of the interpolant. Throws DomainError if x +- step
/// leaves the table.
double derivative(const TabulatedCurve& curve, double x, double step);

struct MagnetizationPoint {
  double field = 0.0;
  double m = 0.0;  ///< per site, in [0, 1/2]
  int L = 0;
};

/// (midpoint field, m) for every plateau bounded by two crossings.
std::vector<MagnetizationPoint> plateau_midpoints(const GroundStateCurve& curve);

/// Thermodynamic-limit estimate of m(H) per site.
class MagnetizationCurve {
 public:
  MagnetizationCurve() = default;
  explicit MagnetizationCurve(std::vector<MagnetizationPoint> points, int conflicts = 0);

  std::span<const MagnetizationPoint> points() const noexcept { return points_; }
  /// Points dropped while enforcing monotonicity.
  int conflicts() const noexcept { return conflicts_; }

  /// 0 below the first point, 1/2 above the last, monotone cubic in
  /// between; coincident fields are jumps (the upper value applies there).
  double value(double field) const;
  double derivative(double field, double step) const;

 private:
  struct Run {
    std::size_t begin;
    std::size_t end;
    TabulatedCurve interpolant;  ///< empty for single-point runs
  };

  std::vector<MagnetizationPoint> points_;
  std::vector<Run> runs_;
  int conflicts_ = 0;
};

/// Merges plateau midpoints of several ladder sizes: larger L wins at equal
/// m and in monotonicity conflicts. Anchored at m = 0 on the first crossing
/// and m = 1/2 on the last crossing of the largest ladder. Throws
/// DomainError with fewer than two distinct sizes.
MagnetizationCurve extrapolate_m(std::span<const GroundStateCurve> curves);

}  // namespace ladder
