#pragma once

// Fourier coefficients of tau -> N0(ell, tau) on (-1/2, 1/2):
//   a_0 = int N0 dtau,   a_p = int N0 cos(2 pi p tau) dtau,
// their closed forms, an exact breakpoint-integration oracle, and the
// certified inequalities built on them.

#include <cstdint>
#include <optional>

#include "stripgap/geometry.hpp"
#include "stripgap/phi_series.hpp"

namespace stripgap {

struct FourierRecord {
  double ell = 0.0;
  std::int64_t p = 0;
  double value = 0.0;
  /// Remainder bound of |a_p - ell^{1/4} phi_p|; empty for p = 0.
  std::optional<double> residual_bound;
};

/// a_0(ell) = 2 sum_{m=1}^{floor(sqrt(ell)/xi)} sqrt(ell - xi^2 m^2)
double a0_closed(const StripGeometry& geom, double ell);

/// a_p(ell) = (1 / (pi p)) sum_m sin(2 pi p sqrt(ell - xi^2 m^2)), p >= 1
double ap_closed(const StripGeometry& geom, double ell, std::int64_t p);

/// Integrates N0(ell, .) cos(2 pi p .) exactly panel by panel between the
/// jump points of N0. p = 0 gives a_0.
double ap_exact_integral(const StripGeometry& geom, double ell, std::int64_t p);

FourierRecord fourier_record(const StripGeometry& geom, double ell, std::int64_t p);

/// sqrt(2)/3 + 1/(2 pi) + sqrt(9 + 25/(1024 pi^2 p^2 ell)) / (32 pi^2 xi ell^{1/4} p^{5/2})
double s5_bound(const StripGeometry& geom, double ell, std::int64_t p);

/// The p-uniform version of s5_bound (p = 1 in the last term).
double s6_bound(const StripGeometry& geom, double ell);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// a_0(ell~) - a_0(ell) <= (pi / (2 xi)) (ell~ - ell) + sqrt(ell~ - ell),
/// for xi^2 <= ell <= ell~.
InequalityCheck lemma32_check(const StripGeometry& geom, double ell, double ell_tilde);

struct ResidualCheck {
  double residual = 0.0;  // |a_p - weight * ell^{1/4} phi_p|
  double bound = 0.0;     // s5_bound + weight * ell^{1/4} * tail_bound
  bool holds = false;
};

/// Checks the representation a_p = weight * ell^{1/4} phi_p + S5 with
/// |S5| <= s5_bound. weight = 1 is the published normalization.
ResidualCheck ap_residual_check(const StripGeometry& geom, double ell, std::int64_t p,
                                const PhiEvaluation& phi, double weight = 1.0);

struct CountingExtremes {
  std::int64_t sup_n = 0;
  std::int64_t inf_n = 0;
  double a0 = 0.0;
  double ap_abs = 0.0;
  bool holds = false;
};

/// sup_tau N0 >= a_0 + |a_p|/2 and inf_tau N0 <= a_0 - |a_p|/2.
CountingExtremes counting_extremes_check(const StripGeometry& geom, double ell, std::int64_t p);

}  // namespace stripgap
