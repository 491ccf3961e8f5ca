#include "ladder/xxz_analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

namespace {

constexpr double kOnset = std::numbers::sqrt2 / std::numbers::pi;

}  // namespace

void AnalyticParams::validate() const {
  if (!(luttinger_k > 0.0)) throw DomainError("Luttinger exponent must be positive");
  if (separation < 1) throw DomainError("separation must be at least one site");
  if (!(j_par > 0.0)) throw DomainError("asymptotic forms need j_par > 0");
  if (!(window > 0.0)) throw DomainError("window must be positive");
  if (!(delta > 0.0)) throw DomainError("fidelity offset must be positive");
}

CriticalFields critical_fields(double j_perp, double j_par) { return {j_perp - j_par, j_perp + 2.0 * j_par}; }

Side window_of(double field, const AnalyticParams& p) {
  p.validate();
  const double w = p.window_width();
  if (field >= p.hc1() && field <= p.hc1() + w) return Side::c1;
  if (field <= p.hc2() && field >= p.hc2() - w) return Side::c2;
  throw DomainError("H = " + std::to_string(field) + " K outside the asymptotic windows [" +
                    std::to_string(p.hc1()) + ", " + std::to_string(p.hc1() + w) + "] and [" +
                    std::to_string(p.hc2() - w) + ", " + std::to_string(p.hc2()) + "]");
}

double m_analytic(double field, const AnalyticParams& p) {
  if (window_of(field, p) == Side::c1) return kOnset * std::sqrt((field - p.hc1()) / p.j_par);
  return 1.0 - kOnset * std::sqrt((p.hc2() - field) / p.j_par);
}

double dm_dh_analytic(double field, const AnalyticParams& p) {
  const double distance = window_of(field, p) == Side::c1 ? field - p.hc1() : p.hc2() - field;
  return 0.5 * kOnset / std::sqrt(distance * p.j_par);
}

double corr_zz(int r, double m, double k, double a, double b) {
  const double rr = static_cast<double>(r);
  return 0.25 * m * m + a / (rr * rr) + b * std::cos(2.0 * std::numbers::pi * m * rr) * std::pow(rr, -2.0 * k);
}

double corr_pm(int r, double m, double k, double a, double b) {
  const double rr = static_cast<double>(r);
  return a * std::cos(std::numbers::pi * (1.0 - 2.0 * m) * rr) * std::pow(rr, -(2.0 * k + 1.0) / (2.0 * k)) +
         b * std::cos(std::numbers::pi * rr) * std::pow(rr, -1.0 / (2.0 * k));
}

Rdm2 analytic_rdm2(double m, const AnalyticParams& p) {
  const double zz = corr_zz(p.separation, m, p.luttinger_k, p.a_zz, p.b_zz);
  const double pm = corr_pm(p.separation, m, p.luttinger_k, p.a_pm, p.b_pm);
  Rdm2 rho = rdm2_from_expectations(0.5 * m, zz, pm);
  try {
    validate(rho);
  } catch (const NumericalConsistencyError& e) {
    throw ParameterValidityError("correlator amplitudes give an invalid two-site density matrix at m = " +
                                 std::to_string(m) + " (<SzSz> = " + std::to_string(zz) +
                                 ", <S+S-> = " + std::to_string(pm) + "): " + e.what());
  }
  return rho;
}

AnalyticMeasures analytic_measures(double field, const AnalyticParams& p) {
  AnalyticMeasures out;
  out.m = m_analytic(field, p);
  out.rho1 = rdm1_from_m(0.5 * out.m);
  out.s1 = entropy(out.rho1);
  out.rho2 = analytic_rdm2(out.m, p);
  out.s2 = entropy(out.rho2);
  out.concurrence = concurrence_xstate(out.rho2);
  return out;
}

double measure_value(Measure measure, double field, const AnalyticParams& p) {
  switch (measure) {
    case Measure::m:
      return m_analytic(field, p);
    case Measure::s1:
      return entropy(rdm1_from_m(0.5 * m_analytic(field, p)));
    case Measure::s2:
      return entropy(analytic_rdm2(m_analytic(field, p), p));
    case Measure::concurrence:
      return concurrence_xstate(analytic_rdm2(m_analytic(field, p), p));
    case Measure::rf:
      return fidelity_reduced(rdm1_from_m(0.5 * m_analytic(field, p)),
                              rdm1_from_m(0.5 * m_analytic(field + p.delta, p)));
    case Measure::rfs:
      return rfs(field, p.delta, [&](double h) { return rdm1_from_m(0.5 * m_analytic(h, p)); }).chi;
  }
  throw DomainError("unknown measure");
}

std::vector<DerivativeSample> derivative_sweep(Measure measure, Side side, std::span<const double> eps_grid,
                                               const AnalyticParams& p) {
  p.validate();
  std::vector<DerivativeSample> out;
  out.reserve(eps_grid.size());
  for (const double eps : eps_grid) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    DerivativeSample s;
    s.eps = eps;
    s.field = side == Side::c1 ? p.hc1() + eps : p.hc2() - eps;
    s.value = measure_value(measure, s.field, p);
    double step = eps / 100.0;
    bool done = false;
    for (int attempt = 0; attempt <= 20 && !done; ++attempt, step *= 0.5) {
      try {
        const double up = measure_value(measure, s.field + step, p);
        const double down = measure_value(measure, s.field - step, p);
        s.derivative = (up - down) / (2.0 * step);
        s.step = step;
        done = true;
      } catch (const DomainError&) {
      }
    }
    if (!done)
      throw DomainError("no admissible difference step at H = " + std::to_string(s.field) + " K");
    out.push_back(s);
  }
  return out;
}

double rfs_closed_form(double field, const AnalyticParams& p) {
  const double sz = 0.5 * m_analytic(field, p);
  const double dsz = 0.5 * dm_dh_analytic(field, p);
  return dsz * dsz / (1.0 - 4.0 * sz * sz);
}

}  // namespace ladder
