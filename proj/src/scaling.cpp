#include "ladder/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "ladder/errors.hpp"

namespace ladder {

GapFit fit_gap(std::span<const GapPoint> series) {
  std::set<int> sizes;
  for (const auto& p : series) {
    if (p.L <= 0) throw DomainError("ladder size must be positive");
    sizes.insert(p.L);
  }
  if (sizes.size() < 3)
    throw DomainError("quadratic gap fit needs three distinct L values, got " + std::to_string(sizes.size()));

  const auto n = static_cast<Eigen::Index>(series.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double inv = 1.0 / series[i].L;
    design(i, 0) = 1.0;
    design(i, 1) = inv;
    design(i, 2) = inv * inv;
    rhs(i) = series[i].gap;
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  return {c(0), c(1), c(2), (design * c - rhs).norm()};
}

TabulatedCurve::TabulatedCurve(std::vector<double> x, std::vector<double> y, bool monotone)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("table needs at least two (x, y) pairs of equal length");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw DomainError("table abscissae must be strictly increasing");

  std::vector<double> h(n - 1);
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    secant[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = secant[0];
  } else {
    slope_[0] = ((2.0 * h[0] + h[1]) * secant[0] - h[0] * secant[1]) / (h[0] + h[1]);
    for (std::size_t i = 1; i + 1 < n; ++i)
      slope_[i] = (h[i] * secant[i - 1] + h[i - 1] * secant[i]) / (h[i - 1] + h[i]);
    const std::size_t a = n - 3;
    const std::size_t b = n - 2;
    slope_[n - 1] = ((2.0 * h[b] + h[a]) * secant[b] - h[b] * secant[a]) / (h[a] + h[b]);
  }

  if (monotone) {
    for (std::size_t i = 1; i + 1 < n; ++i)
      if (secant[i - 1] * secant[i] <= 0.0) slope_[i] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (secant[i] == 0.0) {
        slope_[i] = slope_[i + 1] = 0.0;
        continue;
      }
      double alpha = slope_[i] / secant[i];
      double beta = slope_[i + 1] / secant[i];
      if (alpha < 0.0) slope_[i] = alpha = 0.0;
      if (beta < 0.0) slope_[i + 1] = beta = 0.0;
      const double r2 = alpha * alpha + beta * beta;
      if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        slope_[i] = tau * alpha * secant[i];
        slope_[i + 1] = tau * beta * secant[i];
      }
    }
  }
}

double TabulatedCurve::operator()(double x) const {
  if (x < x_.front() || x > x_.back())
    throw DomainError("x = " + std::to_string(x) + " outside table [" + std::to_string(x_.front()) + ", " +
                      std::to_string(x_.back()) + "]");
  std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
         (t3 - t2) * h * slope_[i + 1];
}

double derivative(const TabulatedCurve& curve, double x, double step) {
  if (!(step > 0.0)) throw DomainError("difference step must be positive");
  if (x - step < curve.x_min() || x + step > curve.x_max())
    throw DomainError("central difference at x = " + std::to_string(x) + " leaves the table");
  return (curve(x + step) - curve(x - step)) / (2.0 * step);
}

std::vector<MagnetizationPoint> plateau_midpoints(const GroundStateCurve& curve) {
  std::vector<MagnetizationPoint> out;
  for (std::size_t k = 1; k < curve.crossings.size(); ++k) {
    out.push_back({0.5 * (curve.crossings[k - 1] + curve.crossings[k]),
                   curve.sz_per_interval[k] / (2.0 * curve.L), curve.L});
  }
  return out;
}

MagnetizationCurve::MagnetizationCurve(std::vector<MagnetizationPoint> points, int conflicts)
    : points_(std::move(points)), conflicts_(conflicts) {
  if (points_.empty()) throw DomainError("magnetization curve needs at least one point");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (points_[i].field < points_[i - 1].field || points_[i].m < points_[i - 1].m)
      throw DomainError("magnetization points must be nondecreasing in field and m");
  // Runs of strictly increasing field; coincident fields separate runs.
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= points_.size(); ++i) {
    if (i < points_.size() && points_[i].field > points_[i - 1].field) continue;
    Run run{begin, i, {}};
    if (i - begin >= 2) {
      std::vector<double> x;
      std::vector<double> y;
      for (std::size_t j = begin; j < i; ++j) {
        x.push_back(points_[j].field);
        y.push_back(points_[j].m);
      }
      run.interpolant = TabulatedCurve(std::move(x), std::move(y), true);
    }
    runs_.push_back(std::move(run));
    begin = i;
  }
}

double MagnetizationCurve::value(double field) const {
  if (field < points_.front().field) return points_.front().m;
  if (field >= points_.back().field) return points_.back().m;
  const Run* active = &runs_.front();
  for (const auto& run : runs_)
    if (points_[run.begin].field <= field) active = &run;
  if (active->end - active->begin == 1 || field >= points_[active->end - 1].field)
    return points_[active->end - 1].m;
  return active->interpolant(field);
}

double MagnetizationCurve::derivative(double field, double step) const {
  if (!(step > 0.0)) throw DomainError("difference step must be positive");
  return (value(field + step) - value(field - step)) / (2.0 * step);
}

MagnetizationCurve extrapolate_m(std::span<const GroundStateCurve> curves) {
  std::set<int> sizes;
  for (const auto& c : curves) sizes.insert(c.L);
  if (sizes.size() < 2) throw DomainError("magnetization extrapolation needs at least two ladder sizes");

  const GroundStateCurve* largest = &curves.front();
  for (const auto& c : curves)
    if (c.L > largest->L) largest = &c;

  std::vector<MagnetizationPoint> all;
  for (const auto& c : curves) {
    const auto mid = plateau_midpoints(c);
    all.insert(all.end(), mid.begin(), mid.end());
  }
  // Equal magnetization from several sizes: keep the largest L.
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.m - b.m) > 1e-12) return a.m < b.m;
    return a.L > b.L;
  });
  std::vector<MagnetizationPoint> unique;
  for (const auto& p : all)
    if (unique.empty() || std::abs(unique.back().m - p.m) > 1e-12) unique.push_back(p);

  const double low = largest->crossings.empty() ? 0.0 : largest->crossings.front();
  const double high = largest->crossings.empty() ? 0.0 : largest->crossings.back();
  std::sort(unique.begin(), unique.end(), [](const auto& a, const auto& b) {
    return a.field < b.field || (a.field == b.field && a.m < b.m);
  });

  int conflicts = 0;
  std::vector<MagnetizationPoint> kept{{low, 0.0, largest->L}};
  for (const auto& p : unique) {
    if (p.field < low || p.field > high) {
      ++conflicts;
      continue;
    }
    bool take = true;
    while (!kept.empty() && p.m < kept.back().m) {
      ++conflicts;
      if (kept.size() > 1 && kept.back().L < p.L) {
        kept.pop_back();
      } else {
        take = false;
        break;
      }
    }
    if (take) kept.push_back(p);
  }
  kept.push_back({high, 0.5, largest->L});
  return MagnetizationCurve(std::move(kept), conflicts);
}

}  // namespace ladder
