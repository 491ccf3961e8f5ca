#pragma once

#include <span>
#include <vector>

#include "ladder/qinfo.hpp"

namespace ladder {

/// Strong-coupling model of the ladder near its two critical fields. The
/// magnetization m is normalized to 1 at saturation; the per-site moment is
/// <Sz> = m / 2.
struct AnalyticParams {
  double j_perp = 13.0;
  double j_par = 1.15;
  double luttinger_k = 1.0;
  /// Amplitudes of the three correlator terms whose constants the
  /// Luttinger-liquid forms leave unspecified.
  double a_zz = 1.0;
  double b_zz = 1.0;
  double a_pm = 1.0;
  double b_pm = 1.0;
  int separation = 1;
  /// Half-width of each asymptotic window, in units of j_par.
  double window = 0.2;
  /// Field offset for the reduced fidelity (kelvin).
  double delta = 1e-3;

  double hc1() const noexcept { return j_perp - j_par; }
  double hc2() const noexcept { return j_perp + 2.0 * j_par; }
  /// Field acting on the pseudo-spins of the effective XXZ chain.
  double effective_field(double field) const noexcept { return field - j_perp - 0.5 * j_par; }
  double window_width() const noexcept { return window * j_par; }

  /// Throws DomainError on K <= 0, separation < 1, j_par <= 0 or window <= 0.
  void validate() const;
};

struct CriticalFields {
  double hc1;
  double hc2;
};

/// (J_perp - J_par, J_perp + 2 J_par).
CriticalFields critical_fields(double j_perp, double j_par);

enum class Side { c1, c2 };

/// Square-root onset above hc1 or square-root approach to saturation below
/// hc2. Throws DomainError outside both windows.
double m_analytic(double field, const AnalyticParams& p);
/// Which window `field` falls into; throws DomainError if neither.
Side window_of(double field, const AnalyticParams& p);

/// <Sz(r) Sz(0)> = m^2/4 + A/r^2 + B cos(2 pi m r) r^(-2K).
double corr_zz(int r, double m, double k, double a = 1.0, double b = 1.0);
/// <S+(r) S-(0)> = A cos(pi (1 - 2m) r) r^(-(2K+1)/(2K)) + B cos(pi r) r^(-1/(2K)).
double corr_pm(int r, double m, double k, double a = 1.0, double b = 1.0);

struct AnalyticMeasures {
  double m = 0.0;
  double s1 = 0.0;           ///< one-site entropy (bits)
  double s2 = 0.0;           ///< two-site entropy at the configured separation (bits)
  double concurrence = 0.0;
  Rdm1 rho1;
  Rdm2 rho2;
};

/// Two-site matrix from the correlators; throws ParameterValidityError if the
/// chosen amplitudes make it non-positive.
Rdm2 analytic_rdm2(double m, const AnalyticParams& p);

AnalyticMeasures analytic_measures(double field, const AnalyticParams& p);

enum class Measure { m, s1, s2, concurrence, rf, rfs };

/// Value of one measure at `field`. rf is F_R(H, H + delta), rfs the reduced
/// fidelity susceptibility at the configured delta.
double measure_value(Measure measure, double field, const AnalyticParams& p);

struct DerivativeSample {
  double eps = 0.0;
  double field = 0.0;
  double value = 0.0;
  double derivative = 0.0;
  double step = 0.0;
};

/// Central differences of `measure` at hc1 + eps (side c1) or hc2 - eps
/// (side c2) with step eps / 100. Steps that leave the window are halved up
/// to 20 times before a DomainError is reported.
std::vector<DerivativeSample> derivative_sweep(Measure measure, Side side, std::span<const double> eps_grid,
                                               const AnalyticParams& p);

/// Closed-form dm/dH of the active branch.
double dm_dh_analytic(double field, const AnalyticParams& p);

/// Diagonal reduced fidelity susceptibility (d<Sz>/dH)^2 / (1 - 4 <Sz>^2).
double rfs_closed_form(double field, const AnalyticParams& p);

}  // namespace ladder
