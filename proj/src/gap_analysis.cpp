#include "stripgap/gap_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stripgap/core_spectrum.hpp"
#include "stripgap/phi_series.hpp"

namespace stripgap {
namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) { return std::to_string(x); }

}  // namespace

void PerturbBounds::validate() const {
  if (!std::isfinite(omega_minus) || !std::isfinite(omega_plus) || omega_minus > omega_plus) {
    throw PreconditionError("perturbation bounds need finite omega_minus <= omega_plus, got [" +
                            num(omega_minus) + ", " + num(omega_plus) + "]");
  }
}

double PerturbBounds::scaled_oscillation(const StripGeometry& geom) const {
  return geom.ell_from_energy(omega_l());
}

void GapParams::validate() const {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw PreconditionError("c0 must be positive, got " + num(c0));
  if (!(gamma < 0.25)) throw PreconditionError("gamma must be below 1/4, got " + num(gamma));
  if (!(ell0 >= 1.0) || !std::isfinite(ell0)) throw PreconditionError("ell0 must be >= 1, got " + num(ell0));
}

GapParams GapParams::small_xi(double xi) {
  const double xi0 = constants().xi0.value;
  if (!(xi > 0.0 && xi < xi0)) {
    throw PreconditionError("explicit constants exist only for 0 < xi < xi0 = " + num(xi0) + ", got " + num(xi));
  }
  return {uniform_lower_bound(xi), 0.0, 1.0};
}

Ell1Threshold ell1_threshold(const StripGeometry& geom, const GapParams& params, const PerturbBounds& bounds) {
  params.validate();
  bounds.validate();
  const double xi = geom.xi();
  const double T = geom.half_period();
  const double c0 = params.c0;
  const double quartic = 4.0 / (1.0 - 4.0 * params.gamma);
  const double square = 2.0 / (1.0 - 2.0 * params.gamma);

  Ell1Threshold out;
  out.ell0_term = params.ell0;
  out.residual_term = std::pow((4.0 * std::sqrt(2.0) * kPi + 6.0) / (3.0 * kPi * c0), quartic);
  out.correction_term =
      std::pow(std::sqrt(9.0 + 25.0 / (1024.0 * kPi * kPi)) / (8.0 * kPi * kPi * xi * c0), square);
  out.perturbation_term = std::pow(
      T / (4.0 * kPi * c0 * xi) * bounds.omega_l() + 1.0 / (2.0 * c0) + 3.0 * xi * T / (4.0 * kPi * c0), quartic);
  out.max_term = std::max({out.ell0_term, out.residual_term, out.correction_term, out.perturbation_term});
  out.value = geom.energy_from_ell(out.max_term) + bounds.omega_minus;
  return out;
}

double ell2_threshold(const StripGeometry& geom, const GapParams& params) {
  const Ell1Threshold t = ell1_threshold(geom, params, PerturbBounds{});
  return std::max({t.ell0_term, t.residual_term, t.correction_term});
}

double a_of_xi(double xi) { return (std::sqrt(3.0 + 4.0 * xi * xi) + xi) / 3.0; }

ConditionVerdicts conditions_check(const StripGeometry& geom, const PerturbBounds& bounds) {
  bounds.validate();
  const auto& c = constants();
  const double xi = geom.xi();
  const double T = geom.half_period();

  ConditionVerdicts v;
  v.xi = xi;
  v.scaled_oscillation = bounds.scaled_oscillation(geom);
  v.small_xi = xi < c.xi0.value;

  const double A = a_of_xi(xi);
  const double shifted = (A - xi) * (A - xi) + 1.0;
  v.oscillation_limit = shifted * shifted / 4.0 - A * A;
  v.oscillation_ok = v.scaled_oscillation >= 0.0 && v.scaled_oscillation < v.oscillation_limit;

  v.overlap_margin = c.c1.value - 2.0 * c.zeta32.value * xi * std::sqrt(xi) -
                     ((3.0 + 2.0 * std::sqrt(2.0)) * kPi + 3.0) / 6.0 * xi - 0.75 * kPi * xi * xi -
                     xi / (32.0 * kPi) * std::sqrt(9.0 + 25.0 / (1024.0 * kPi * kPi)) - T * bounds.omega_l() / 4.0;
  v.overlap_ok = v.overlap_margin >= 0.0;

  v.first_band_ok = v.scaled_oscillation >= 0.0 && v.scaled_oscillation < 0.25 + xi * xi;
  if (v.oscillation_ok && !v.first_band_ok) {
    throw ConsistencyError("oscillation condition holds but the first-band bound fails at xi = " + num(xi) +
                           ", scaled omega_L = " + num(v.scaled_oscillation));
  }
  return v;
}

EllStar ell_star(const StripGeometry& geom, const PerturbBounds& bounds) {
  bounds.validate();
  const double xi = geom.xi();
  const double A = a_of_xi(xi);
  EllStar s;
  s.value = A * A + bounds.scaled_oscillation(geom);
  s.lower = 0.25 + xi * xi;
  s.sandwich = s.lower < s.value && s.value < s.upper;
  const double scaled = bounds.scaled_oscillation(geom);
  s.sandwich_promised = xi < constants().xi0.value && scaled >= 0.0 && scaled < 0.25 + xi * xi;
  return s;
}

LowSpectrumVerdict low_spectrum_no_gap(const StripGeometry& geom, const PerturbBounds& bounds, double ell) {
  const ConditionVerdicts cond = conditions_check(geom, bounds);
  if (!cond.small_xi || !cond.oscillation_ok) {
    throw PreconditionError("the low-spectrum test needs xi < xi0 and the oscillation condition");
  }
  const double xi = geom.xi();
  if (!(ell > 0.25 + xi * xi && ell < 1.0)) {
    throw PreconditionError("the low-spectrum test needs 1/4 + xi^2 < ell < 1, got ell = " + num(ell));
  }
  const EllStar star = ell_star(geom, bounds);
  LowSpectrumVerdict v;
  v.ell = ell;
  v.below_star = ell <= star.value;
  v.tau_max = v.below_star ? 0.0 : 0.5;
  v.tau_min = 1.0 - std::sqrt(ell);
  const double lowered = std::max(0.0, ell - cond.scaled_oscillation);
  v.count_max = counting_at(geom, lowered, v.tau_max, CountingForm::rows);
  v.count_min = counting_at(geom, ell, v.tau_min, CountingForm::rows);
  v.difference = v.count_max - v.count_min;
  v.positive = v.difference > 0;
  return v;
}

OverlapBound overlap_lower_bound(const StripGeometry& geom, const GapParams& params, double eta0_k) {
  params.validate();
  const double ell2 = ell2_threshold(geom, params);
  const double needed = geom.energy_from_ell(ell2);
  if (!(eta0_k >= needed)) {
    throw PreconditionError("the overlap bound needs eta0_k >= (pi^2/T^2) ell2 = " + num(needed) +
                            " (ell2 = " + num(ell2) + "), got " + num(eta0_k));
  }
  const double xi = geom.xi();
  const double T = geom.half_period();
  OverlapBound out;
  out.ell2 = ell2;
  out.value = 3.0 * kPi * xi * params.c0 / T * std::pow(geom.ell_from_energy(eta0_k), 0.25 - params.gamma) -
              3.0 * kPi * xi / (2.0 * T) - 9.0 * xi * xi / 4.0;
  return out;
}

std::string_view to_string(GapStatus status) {
  return status == GapStatus::certified_absent ? "certified-absent" : "undecided";
}

std::string_view to_string(GapEvidence evidence) {
  switch (evidence) {
    case GapEvidence::overlap: return "overlap";
    case GapEvidence::low_spectrum: return "low-spectrum";
    case GapEvidence::none: break;
  }
  return "none";
}

GapReport gap_report(const StripGeometry& geom, const PerturbBounds& bounds,
                     const std::optional<GapParams>& params, std::span<const SpectralBand> bands0,
                     double ell_max, const GapReportOptions& options) {
  bounds.validate();
  if (bands0.empty()) throw PreconditionError("gap report needs at least one unperturbed band");
  const double reach = geom.energy_from_ell(ell_max);
  if (bands0.back().hi < reach && bands0.back().lo < reach) {
    throw PreconditionError("unperturbed bands stop at energy " + num(bands0.back().hi) +
                            ", below the requested " + num(reach));
  }
  for (std::size_t i = 1; i < bands0.size(); ++i) {
    if (bands0[i].k != bands0[i - 1].k + 1) throw PreconditionError("unperturbed bands must be consecutive in k");
  }

  GapReport report;
  if (params) report.ell1 = ell1_threshold(geom, *params, bounds);
  report.conditions = conditions_check(geom, bounds);
  report.star = ell_star(geom, bounds);

  for (const auto& b : bands0) {
    report.bands.push_back({b.k, b.lo, b.hi, b.lo + bounds.omega_minus, b.hi + bounds.omega_plus});
  }

  // The counting argument covers every window lying below pi^2/T^2 + omega_minus.
  const double xi = geom.xi();
  bool low_certified = false;
  if (report.conditions.small_xi && report.conditions.oscillation_ok && options.low_spectrum_grid > 0) {
    const double lower = 0.25 + xi * xi;
    bool all_positive = true;
    for (std::int64_t i = 1; i <= options.low_spectrum_grid; ++i) {
      const double ell = lower + (1.0 - lower) * static_cast<double>(i) /
                                     static_cast<double>(options.low_spectrum_grid + 1);
      all_positive = low_spectrum_no_gap(geom, bounds, ell).positive && all_positive;
    }
    report.low_spectrum_points = options.low_spectrum_grid;
    report.low_spectrum_positive = all_positive;
    low_certified = all_positive;
  }
  const double low_ceiling = geom.energy_scale() + bounds.omega_minus;

  for (std::size_t i = 0; i + 1 < bands0.size(); ++i) {
    CandidateGap gap;
    gap.k = bands0[i].k;
    gap.lo = bands0[i].hi + bounds.omega_minus;
    gap.hi = bands0[i + 1].lo + bounds.omega_plus;
    gap.overlap0 = bands0[i].hi - bands0[i + 1].lo;
    const double slack = options.tie_tolerance * std::max(1.0, std::abs(bands0[i].hi));
    if (gap.overlap0 >= bounds.omega_l() - slack) {
      gap.status = GapStatus::certified_absent;
      gap.evidence = GapEvidence::overlap;
    } else if (low_certified && gap.hi <= low_ceiling) {
      gap.status = GapStatus::certified_absent;
      gap.evidence = GapEvidence::low_spectrum;
    }
    report.gaps.push_back(gap);
  }
  return report;
}

}  // namespace stripgap
