#pragma once

// Bethe-Sommerfeld decision machinery: the explicit thresholds, the small-xi
// conditions, the low-spectrum counting test and band enclosures under a
// perturbation with numerical range [omega_minus, omega_plus].

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stripgap/geometry.hpp"

namespace stripgap {

struct PerturbBounds {
  double omega_minus = 0.0;
  double omega_plus = 0.0;

  double omega_l() const noexcept { return omega_plus - omega_minus; }
  /// Throws PreconditionError unless omega_minus <= omega_plus, both finite.
  void validate() const;
  /// (T^2 / pi^2) omega_L, the oscillation on the ell scale.
  double scaled_oscillation(const StripGeometry& geom) const;
};

/// Constants of the lower bound sup_p |phi_p(ell)| >= c0 ell^{-gamma}, ell >= ell0.
struct GapParams {
  double c0 = 0.0;
  double gamma = 0.0;
  double ell0 = 1.0;

  void validate() const;
  /// c0 = (c1 - 2 zeta(3/2) xi^{3/2}) / (pi xi), gamma = 0, ell0 = 1.
  /// Requires xi < xi0.
  static GapParams small_xi(double xi);
};

struct Ell1Threshold {
  double ell0_term = 0.0;
  double residual_term = 0.0;    // ((4 sqrt2 pi + 6) / (3 pi c0))^{4/(1-4 gamma)}
  double correction_term = 0.0;  // ((1/(8 pi^2 xi c0)) sqrt(9 + 25/(1024 pi^2)))^{2/(1-2 gamma)}
  double perturbation_term = 0.0;
  double max_term = 0.0;
  double value = 0.0;  // energy units: (pi^2/T^2) max_term + omega_minus
};

/// Energy above which no internal gaps remain.
Ell1Threshold ell1_threshold(const StripGeometry& geom, const GapParams& params, const PerturbBounds& bounds);

/// Scaled threshold beyond which the overlap bound applies: the first three
/// terms of the ell1 maximum.
double ell2_threshold(const StripGeometry& geom, const GapParams& params);

struct ConditionVerdicts {
  double xi = 0.0;
  double scaled_oscillation = 0.0;  // (T^2/pi^2) omega_L
  bool small_xi = false;            // xi < xi0
  double oscillation_limit = 0.0;   // ((A - xi)^2 + 1)^2 / 4 - A^2
  bool oscillation_ok = false;      // 0 <= scaled_oscillation < oscillation_limit
  double overlap_margin = 0.0;      // left side of the explicit budget inequality
  bool overlap_ok = false;          // overlap_margin >= 0
  bool first_band_ok = false;       // scaled_oscillation < 1/4 + xi^2

  /// All three hypotheses of the no-gap theorem.
  bool no_gap_theorem() const noexcept { return small_xi && oscillation_ok && overlap_ok; }
};

/// A(xi) = (sqrt(3 + 4 xi^2) + xi) / 3
double a_of_xi(double xi);

/// Evaluates every condition. Throws ConsistencyError if oscillation_ok holds
/// without first_band_ok (the former implies the latter).
ConditionVerdicts conditions_check(const StripGeometry& geom, const PerturbBounds& bounds);

struct EllStar {
  double value = 0.0;  // A(xi)^2 + (T^2/pi^2) omega_L
  double lower = 0.0;  // 1/4 + xi^2
  double upper = 2.0 / 3.0;
  bool sandwich = false;  // lower < value < upper
  /// True when small_xi and first_band_ok hold, i.e. the sandwich is promised.
  bool sandwich_promised = false;
};

EllStar ell_star(const StripGeometry& geom, const PerturbBounds& bounds);

struct LowSpectrumVerdict {
  double ell = 0.0;
  bool below_star = false;  // ell <= ell_*: tau_max = 0, otherwise tau_max = 1/2
  double tau_max = 0.0;
  double tau_min = 0.0;  // 1 - sqrt(ell)
  std::int64_t count_max = 0;  // N0(ell - (T^2/pi^2) omega_L, tau_max)
  std::int64_t count_min = 0;  // N0(ell, tau_min)
  std::int64_t difference = 0;
  bool positive = false;
};

/// Counting test certifying that no gap opens at scaled energy ell.
/// Requires 1/4 + xi^2 < ell < 1, xi < xi0 and the oscillation condition.
LowSpectrumVerdict low_spectrum_no_gap(const StripGeometry& geom, const PerturbBounds& bounds, double ell);

struct OverlapBound {
  double value = 0.0;  // lower bound for theta0_k - eta0_{k+1}
  double ell2 = 0.0;
};

/// (3 pi xi c0 / T)(T^2 eta0_k / pi^2)^{1/4 - gamma} - 3 pi xi / (2T) - 9 xi^2 / 4.
/// Throws PreconditionError, naming the required energy, when
/// eta0_k < (pi^2/T^2) ell2.
OverlapBound overlap_lower_bound(const StripGeometry& geom, const GapParams& params, double eta0_k);

struct BandEnclosure {
  std::int64_t k = 0;
  double eta0 = 0.0;
  double theta0 = 0.0;
  double lo = 0.0;  // eta0 + omega_minus, lowest possible bottom
  double hi = 0.0;  // theta0 + omega_plus, highest possible top
};

enum class GapStatus { certified_absent, undecided };
enum class GapEvidence { none, overlap, low_spectrum };

std::string_view to_string(GapStatus status);
std::string_view to_string(GapEvidence evidence);

/// Window between bands k and k+1 where a perturbed gap could open:
/// (theta0_k + omega_minus, eta0_{k+1} + omega_plus).
struct CandidateGap {
  std::int64_t k = 0;
  double lo = 0.0;
  double hi = 0.0;
  double overlap0 = 0.0;  // theta0_k - eta0_{k+1}
  GapStatus status = GapStatus::undecided;
  GapEvidence evidence = GapEvidence::none;
};

struct GapReportOptions {
  /// Relative slack when comparing theta0_k - eta0_{k+1} with omega_L.
  double tie_tolerance = 1e-12;
  /// Number of ell values in (1/4 + xi^2, 1) probed by the low-spectrum test.
  std::int64_t low_spectrum_grid = 1000;
};

struct GapReport {
  std::optional<Ell1Threshold> ell1;  // empty when no GapParams were supplied
  ConditionVerdicts conditions;
  EllStar star;
  std::vector<BandEnclosure> bands;
  std::vector<CandidateGap> gaps;
  std::int64_t low_spectrum_points = 0;
  /// Whether every probed ell gave a positive difference; empty when the
  /// test did not apply.
  std::optional<bool> low_spectrum_positive;
};

/// Turns unperturbed bands into enclosures of the perturbed ones and
/// classifies every window between consecutive bands. bands0 must reach at
/// least energy (pi^2/T^2) ell_max.
GapReport gap_report(const StripGeometry& geom, const PerturbBounds& bounds,
                     const std::optional<GapParams>& params, std::span<const SpectralBand> bands0,
                     double ell_max, const GapReportOptions& options = {});

}  // namespace stripgap
