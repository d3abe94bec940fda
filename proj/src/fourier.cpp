#include "stripgap/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stripgap/core_spectrum.hpp"

namespace stripgap {
namespace {

constexpr double kPi = std::numbers::pi;

void check_ell(double ell) {
  if (!(ell >= 0.0) || !std::isfinite(ell)) {
    throw PreconditionError("scaled energy ell must be finite and >= 0, got " + std::to_string(ell));
  }
}

void check_harmonic(std::int64_t p) {
  if (p < 1) throw PreconditionError("harmonic index p must be >= 1, got " + std::to_string(p));
}

// Calls f(sqrt(ell - xi^2 m^2)) for m = 1 .. floor(sqrt(ell) / xi).
template <class F>
void for_each_row_radius(double xi, double ell, F&& f) {
  if (ell < xi * xi) return;
  const auto m_hi = static_cast<std::int64_t>(std::floor(std::sqrt(ell) / xi));
  for (std::int64_t m = 1; m <= m_hi; ++m) {
    const double mm = static_cast<double>(m);
    f(std::sqrt(std::max(0.0, ell - xi * xi * mm * mm)));
  }
}

bool within(double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)); }

}  // namespace

double a0_closed(const StripGeometry& geom, double ell) {
  check_ell(ell);
  double sum = 0.0;
  for_each_row_radius(geom.xi(), ell, [&](double r) { sum += r; });
  return 2.0 * sum;
}

double ap_closed(const StripGeometry& geom, double ell, std::int64_t p) {
  check_ell(ell);
  check_harmonic(p);
  const double pp = static_cast<double>(p);
  double sum = 0.0;
  for_each_row_radius(geom.xi(), ell, [&](double r) { sum += std::sin(2.0 * kPi * pp * r); });
  return sum / (kPi * pp);
}

double ap_exact_integral(const StripGeometry& geom, double ell, std::int64_t p) {
  check_ell(ell);
  if (p < 0) throw PreconditionError("harmonic index p must be >= 0");
  const CountingProfile profile = counting_profile(geom, ell);
  const auto& x = profile.nodes;
  const auto& n = profile.panel_counts;

  if (p == 0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) sum += static_cast<double>(n[i]) * (x[i + 1] - x[i]);
    return sum;
  }
  // Summation by parts: the antiderivative S(t) = sin(2 pi p t) / (2 pi p)
  // vanishes at +-1/2, so only the jumps between panels contribute.
  const double w = 2.0 * kPi * static_cast<double>(p);
  double sum = 0.0;
  for (std::size_t i = 1; i < n.size(); ++i) {
    const auto jump = n[i] - n[i - 1];
    if (jump != 0) sum -= static_cast<double>(jump) * std::sin(w * x[i]);
  }
  return sum / w;
}

FourierRecord fourier_record(const StripGeometry& geom, double ell, std::int64_t p) {
  FourierRecord rec;
  rec.ell = ell;
  rec.p = p;
  if (p == 0) {
    rec.value = a0_closed(geom, ell);
  } else {
    rec.value = ap_closed(geom, ell, p);
    if (ell > 0.0) rec.residual_bound = s5_bound(geom, ell, p);
  }
  return rec;
}

double s5_bound(const StripGeometry& geom, double ell, std::int64_t p) {
  if (!(ell > 0.0)) throw PreconditionError("the residual bound needs ell > 0");
  check_harmonic(p);
  const double pp = static_cast<double>(p);
  const double tail = std::sqrt(9.0 + 25.0 / (1024.0 * kPi * kPi * pp * pp * ell)) /
                      (32.0 * kPi * kPi * geom.xi() * std::pow(ell, 0.25) * pp * pp * std::sqrt(pp));
  return std::sqrt(2.0) / 3.0 + 1.0 / (2.0 * kPi) + tail;
}

double s6_bound(const StripGeometry& geom, double ell) { return s5_bound(geom, ell, 1); }

InequalityCheck lemma32_check(const StripGeometry& geom, double ell, double ell_tilde) {
  const double xi = geom.xi();
  if (!(xi * xi <= ell && ell <= ell_tilde) || !std::isfinite(ell_tilde)) {
    throw PreconditionError("need xi^2 <= ell <= ell~, got ell = " + std::to_string(ell) +
                            ", ell~ = " + std::to_string(ell_tilde));
  }
  InequalityCheck out;
  out.lhs = a0_closed(geom, ell_tilde) - a0_closed(geom, ell);
  const double gap = ell_tilde - ell;
  out.rhs = kPi / (2.0 * xi) * gap + std::sqrt(gap);
  out.holds = within(out.lhs, out.rhs);
  return out;
}

ResidualCheck ap_residual_check(const StripGeometry& geom, double ell, std::int64_t p,
                                const PhiEvaluation& phi, double weight) {
  if (!(ell > 0.0)) throw PreconditionError("the residual check needs ell > 0");
  check_harmonic(p);
  if (phi.p != p || phi.ell != ell) {
    throw PreconditionError("phi evaluation was made for a different (ell, p)");
  }
  const double scale = std::pow(ell, 0.25);
  ResidualCheck out;
  out.residual = std::abs(ap_closed(geom, ell, p) - weight * scale * phi.value);
  out.bound = s5_bound(geom, ell, p) + std::abs(weight) * scale * phi.tail_bound;
  out.holds = out.residual <= out.bound;
  return out;
}

CountingExtremes counting_extremes_check(const StripGeometry& geom, double ell, std::int64_t p) {
  check_harmonic(p);
  const CountingProfile profile = counting_profile(geom, ell);
  CountingExtremes out;
  const auto [node_lo, node_hi] = std::minmax_element(profile.node_counts.begin(), profile.node_counts.end());
  const auto [panel_lo, panel_hi] =
      std::minmax_element(profile.panel_counts.begin(), profile.panel_counts.end());
  out.sup_n = std::max(*node_hi, *panel_hi);
  out.inf_n = std::min(*node_lo, *panel_lo);
  out.a0 = a0_closed(geom, ell);
  out.ap_abs = std::abs(ap_closed(geom, ell, p));
  out.holds = within(out.a0 + 0.5 * out.ap_abs, static_cast<double>(out.sup_n)) &&
              within(static_cast<double>(out.inf_n), out.a0 - 0.5 * out.ap_abs);
  return out;
}

}  // namespace stripgap
