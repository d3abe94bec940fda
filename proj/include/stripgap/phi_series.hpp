#pragma once

// The oscillatory series
//   phi_p(ell) = (1 / (pi xi)) sum_{k in Z} sin(2 pi sqrt(ell) s_k - pi/4) / s_k^{3/2},
//   s_k = sqrt(k^2 / xi^2 + p^2),
// its certified symmetric truncation, the supremum over harmonics, the
// explicit constants behind the small-xi lower bound, and two diagnostics
// (stationary-phase leading term, PDE residual of the truncated series).

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "stripgap/geometry.hpp"

namespace stripgap {

struct Enclosed {
  double value = 0.0;
  double error = 0.0;  // absolute error bound
};

/// zeta(3/2) from a compensated partial sum plus a midpoint/trapezoid
/// enclosure of the tail.
Enclosed zeta_three_halves();

/// B(1/4, 1/2) = Gamma(1/4)^2 / sqrt(2 pi).
double beta_quarter_half_reflection();
/// B(1/4, 1/2) = 2 int_0^inf (t^2 + 1)^{-3/4} dt, evaluated as
/// 2 int_0^inf cosh(u)^{-1/2} du by composite Simpson plus a tail bound.
double beta_quarter_half_integral();

struct SpectralConstants {
  Enclosed c2;      // root of 3^{3/2} t^3 + 3 t^2 + 3^{3/2} t - 1
  Enclosed c1;      // c2 / sqrt(c2^2 + 1)
  Enclosed xi0;     // (c1 / (2 zeta(3/2)))^{2/3}
  Enclosed zeta32;
  Enclosed beta_qh;
  double cubic_residual = 0.0;
  double minmax_grid = 0.0;  // min_z max{|sin z|, 3^{-3/2} |cos 3z|} on a 10^6 grid
};

/// Evaluates and self-checks the constants once; later calls return the
/// cached values. Throws ConsistencyError if a self-check fails.
const SpectralConstants& constants();

/// (c1 - 2 zeta(3/2) xi^{3/2}) / (pi xi); positive exactly when xi < xi0.
double uniform_lower_bound(double xi);

struct PhiEvaluation {
  std::int64_t p = 1;
  double ell = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;  // 4 sqrt(xi) / (pi sqrt(N)), infinite for N = 0
  std::int64_t truncation_n = 0;
};

inline constexpr std::int64_t kDefaultMaxTerms = 2'000'000'000;

/// Smallest N with 4 sqrt(xi) / (pi sqrt(N)) <= tol.
std::int64_t required_truncation(double xi, double tol);

/// Symmetric partial sum over |k| <= n.
PhiEvaluation phi_truncated(const StripGeometry& geom, double ell, std::int64_t p, std::int64_t n);

/// Partial sum with the minimal N certifying |phi_p - value| <= tol.
/// Throws PreconditionError naming the required N when it exceeds max_terms.
PhiEvaluation phi_p(const StripGeometry& geom, double ell, std::int64_t p, double tol,
                    std::int64_t max_terms = kDefaultMaxTerms);

/// |phi_p| <= 1/(pi p^{3/2} xi) + B(1/4,1/2)/(pi p^{1/2}) for every ell.
double phi_magnitude_bound(const StripGeometry& geom, std::int64_t p);

struct PhiSup {
  std::int64_t p_star = 1;
  double value = 0.0;  // max |phi_p| over the scanned harmonics
  std::int64_t p_max = 1;
  double tol = 0.0;
  double cutoff_bound = 0.0;  // phi_magnitude_bound at p_max
  /// cutoff_bound <= value + 2 tol: no harmonic beyond p_max can beat the max.
  bool cutoff_conclusive = false;
};

inline constexpr double kDefaultCutoffC1 = 3.0;

/// max |phi_p(ell)| over 1 <= p <= max(1, ceil(C1 sqrt(ell))), always
/// including p = 1 and p = 3. Harmonics may be evaluated on `workers`
/// threads; the reduction runs in p order.
PhiSup phi_sup(const StripGeometry& geom, double ell, double cutoff_c1, double tol,
               unsigned workers = 1);

struct Thm23Row {
  double ell = 0.0;
  PhiSup sup;
  double margin = 0.0;  // sup.value - c0
  bool pass = false;    // margin >= -2 tol
};

struct Thm23Report {
  double xi = 0.0;
  double c0 = 0.0;
  double tol = 0.0;
  std::vector<Thm23Row> rows;
  bool all_pass = true;
};

/// Checks sup_p |phi_p(ell)| >= c0(xi) - 2 tol on every grid point.
/// Requires xi < xi0 and ell >= 1.
Thm23Report thm23_check(const StripGeometry& geom, std::span<const double> ell_grid, double tol,
                        double cutoff_c1 = kDefaultCutoffC1, unsigned workers = 1);

/// (sqrt(p) / pi) sin(2 pi p sqrt(ell)) / ell^{1/4}
double stationary_phase_leading(double ell, std::int64_t p);

/// u_N(l, mu) = sum_{|k| <= N} sin(l sqrt(k^2 + mu) - pi/4) / (k^2 + mu)^{3/4}
double pde_series(double l, double mu, std::int64_t n);

struct PdeResidual {
  /// u_llmu + (l/2) u_l + u/4 from term-wise analytic derivatives.
  double analytic = 0.0;
  /// Same combination with central differences of step h.
  double finite_difference = 0.0;
  double scale = 0.0;  // |u_llmu| + |l/2 u_l| + |u/4|
  double numeric() const;
};

PdeResidual pde_residual(double l, double mu, std::int64_t n, double h);

}  // namespace stripgap
