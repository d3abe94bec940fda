#include "stripgap/phi_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stripgap/parallel.hpp"

namespace stripgap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier's variant of compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double cubic(double t) {
  const double r3 = std::pow(3.0, 1.5);
  return ((r3 * t + 3.0) * t + r3) * t - 1.0;
}

double cubic_slope(double t) {
  const double r3 = std::pow(3.0, 1.5);
  return (3.0 * r3 * t + 6.0) * t + r3;
}

}  // namespace

Enclosed zeta_three_halves() {
  constexpr std::int64_t kTerms = 100'000;
  CompensatedSum partial;
  for (std::int64_t k = kTerms; k >= 1; --k) {
    const double x = static_cast<double>(k);
    partial.add(1.0 / (x * std::sqrt(x)));
  }
  // f(t) = t^{-3/2} is convex and decreasing, so for the tail sum_{k>K} f(k)
  //   midpoint:  f(k) <= int_{k-1/2}^{k+1/2} f      -> upper = 2 / sqrt(K + 1/2)
  //   trapezoid: (f(k)+f(k+1))/2 >= int_k^{k+1} f  -> lower = 2 / sqrt(K + 1) + f(K + 1) / 2
  const double K = static_cast<double>(kTerms);
  const double upper = 2.0 / std::sqrt(K + 0.5);
  const double lower = 2.0 / std::sqrt(K + 1.0) + 0.5 / ((K + 1.0) * std::sqrt(K + 1.0));
  const double value = partial.value() + 0.5 * (upper + lower);
  return {value, 0.5 * (upper - lower) + 8.0 * kEps * value};
}

double beta_quarter_half_reflection() {
  const double g = std::tgamma(0.25);
  return g * g / std::sqrt(2.0 * kPi);
}

double beta_quarter_half_integral() {
  // t = sinh(u) turns (t^2+1)^{-3/4} dt into cosh(u)^{-1/2} du; the tail past
  // U is below 2 sqrt(2) exp(-U/2) ~ 1e-17.
  constexpr double kUpper = 80.0;
  constexpr int kPanels = 1 << 16;
  const double h = kUpper / kPanels;
  const auto f = [](double u) { return 1.0 / std::sqrt(std::cosh(u)); };
  CompensatedSum acc;
  acc.add(f(0.0));
  acc.add(f(kUpper));
  for (int i = 1; i < kPanels; ++i) acc.add((i % 2 == 1 ? 4.0 : 2.0) * f(h * i));
  return 2.0 * acc.value() * h / 3.0;
}

const SpectralConstants& constants() {
  static const SpectralConstants cached = [] {
    SpectralConstants out;
    const double s3 = std::sqrt(3.0);
    const double cube = std::cbrt(78.0 * s3 + 54.0 * std::sqrt(11.0));
    const double c2 = (cube - s3) / 9.0 - 8.0 / (3.0 * cube);
    out.cubic_residual = std::abs(cubic(c2));
    out.c2 = {c2, out.cubic_residual / std::abs(cubic_slope(c2)) + 8.0 * kEps};

    const double c1 = c2 / std::sqrt(c2 * c2 + 1.0);
    // |d c1 / d c2| = (c2^2 + 1)^{-3/2} <= 1
    out.c1 = {c1, out.c2.error + 8.0 * kEps};

    out.zeta32 = zeta_three_halves();
    const double ratio = c1 / (2.0 * out.zeta32.value);
    const double xi0 = std::cbrt(ratio * ratio);
    const double rel = out.c1.error / c1 + out.zeta32.error / out.zeta32.value;
    out.xi0 = {xi0, xi0 * (2.0 / 3.0) * rel + 8.0 * kEps};

    const double beta_a = beta_quarter_half_reflection();
    const double beta_b = beta_quarter_half_integral();
    if (std::abs(beta_a - beta_b) > 1e-8) {
      throw ConsistencyError("B(1/4,1/2) routes disagree: " + std::to_string(beta_a) + " vs " +
                             std::to_string(beta_b));
    }
    out.beta_qh = {beta_a, std::max(std::abs(beta_a - beta_b), 16.0 * kEps * beta_a)};

    constexpr int kGrid = 1'000'000;
    const double w = std::pow(3.0, -1.5);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kGrid; ++i) {
      const double z = kPi * i / kGrid;
      best = std::min(best, std::max(std::abs(std::sin(z)), w * std::abs(std::cos(3.0 * z))));
    }
    out.minmax_grid = best;

    if (out.cubic_residual > 1e-10) {
      throw ConsistencyError("closed-form c2 misses the cubic by " + std::to_string(out.cubic_residual));
    }
    if (std::abs(best - c1) > 1e-5) {
      throw ConsistencyError("grid min-max " + std::to_string(best) + " disagrees with c1 " +
                             std::to_string(c1));
    }
    if (!(xi0 > 0.0 && xi0 < 1.0)) throw ConsistencyError("xi0 outside (0, 1)");
    return out;
  }();
  return cached;
}

double uniform_lower_bound(double xi) {
  const auto& c = constants();
  return (c.c1.value - 2.0 * c.zeta32.value * xi * std::sqrt(xi)) / (kPi * xi);
}

std::int64_t required_truncation(double xi, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const double root = 4.0 * std::sqrt(xi) / (kPi * tol);
  const double estimate = std::ceil(root * root);
  if (estimate > 9e18) {
    throw PreconditionError("tolerance " + std::to_string(tol) + " needs more than 9e18 terms");
  }
  auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(estimate));
  while (4.0 * std::sqrt(xi) / (kPi * std::sqrt(static_cast<double>(n))) > tol) ++n;
  while (n > 1 && 4.0 * std::sqrt(xi) / (kPi * std::sqrt(static_cast<double>(n - 1))) <= tol) --n;
  return n;
}

PhiEvaluation phi_truncated(const StripGeometry& geom, double ell, std::int64_t p, std::int64_t n) {
  if (!(ell > 0.0)) throw PreconditionError("phi_p needs ell > 0");
  if (p < 1) throw PreconditionError("harmonic index p must be >= 1");
  if (n < 0) throw PreconditionError("truncation N must be >= 0");
  const double xi = geom.xi();
  const double root_ell = std::sqrt(ell);
  const double inv_xi2 = 1.0 / (xi * xi);
  const double pp = static_cast<double>(p) * static_cast<double>(p);

  // Phase is reduced in turns: sin(2 pi (sqrt(ell) s - 1/8)).
  const auto term = [&](double k) {
    const double x = k * k * inv_xi2 + pp;
    const double s = std::sqrt(x);
    const double turns = root_ell * s - 0.125;
    const double frac = turns - std::floor(turns);
    return std::sin(2.0 * kPi * frac) / (s * std::sqrt(s));
  };

  constexpr std::int64_t kBlock = 4096;
  CompensatedSum total;
  for (std::int64_t start = 1; start <= n; start += kBlock) {
    const std::int64_t stop = std::min(n, start + kBlock - 1);
    double block = 0.0;
    for (std::int64_t k = start; k <= stop; ++k) block += term(static_cast<double>(k));
    total.add(block);
  }

  PhiEvaluation out;
  out.p = p;
  out.ell = ell;
  out.truncation_n = n;
  out.value = (term(0.0) + 2.0 * total.value()) / (kPi * xi);
  out.tail_bound = n == 0 ? std::numeric_limits<double>::infinity()
                          : 4.0 * std::sqrt(xi) / (kPi * std::sqrt(static_cast<double>(n)));
  return out;
}

PhiEvaluation phi_p(const StripGeometry& geom, double ell, std::int64_t p, double tol,
                    std::int64_t max_terms) {
  const std::int64_t n = required_truncation(geom.xi(), tol);
  if (n > max_terms) {
    throw PreconditionError("tolerance " + std::to_string(tol) + " needs N = " + std::to_string(n) +
                            " terms, above the ceiling " + std::to_string(max_terms));
  }
  return phi_truncated(geom, ell, p, n);
}

double phi_magnitude_bound(const StripGeometry& geom, std::int64_t p) {
  const double pp = static_cast<double>(p);
  return 1.0 / (kPi * pp * std::sqrt(pp) * geom.xi()) + constants().beta_qh.value / (kPi * std::sqrt(pp));
}

PhiSup phi_sup(const StripGeometry& geom, double ell, double cutoff_c1, double tol, unsigned workers) {
  if (!(cutoff_c1 > 0.0)) throw PreconditionError("cutoff constant C1 must be positive");
  if (!(ell > 0.0)) throw PreconditionError("phi_sup needs ell > 0");
  const auto p_max = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(cutoff_c1 * std::sqrt(ell))));
  std::vector<std::int64_t> harmonics;
  for (std::int64_t p = 1; p <= p_max; ++p) harmonics.push_back(p);
  if (p_max < 3) harmonics.push_back(3);

  const std::int64_t n = required_truncation(geom.xi(), tol);
  if (n > kDefaultMaxTerms) {
    throw PreconditionError("tolerance " + std::to_string(tol) + " needs N = " + std::to_string(n) + " terms");
  }
  std::vector<double> magnitude(harmonics.size());
  parallel_for(harmonics.size(), workers, [&](std::size_t i) {
    magnitude[i] = std::abs(phi_truncated(geom, ell, harmonics[i], n).value);
  });

  PhiSup out;
  out.p_max = p_max;
  out.tol = tol;
  out.value = -1.0;
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    if (magnitude[i] > out.value) {
      out.value = magnitude[i];
      out.p_star = harmonics[i];
    }
  }
  out.cutoff_bound = phi_magnitude_bound(geom, p_max);
  out.cutoff_conclusive = out.cutoff_bound <= out.value + 2.0 * tol;
  return out;
}

Thm23Report thm23_check(const StripGeometry& geom, std::span<const double> ell_grid, double tol,
                        double cutoff_c1, unsigned workers) {
  const auto& c = constants();
  if (!(geom.xi() < c.xi0.value)) {
    throw PreconditionError("the uniform lower bound needs xi < xi0 = " + std::to_string(c.xi0.value) +
                            ", got xi = " + std::to_string(geom.xi()));
  }
  for (const double ell : ell_grid) {
    if (!(ell >= 1.0)) throw PreconditionError("grid values must satisfy ell >= 1");
  }
  Thm23Report report;
  report.xi = geom.xi();
  report.c0 = uniform_lower_bound(geom.xi());
  report.tol = tol;
  report.rows.resize(ell_grid.size());
  parallel_for(ell_grid.size(), workers, [&](std::size_t i) {
    auto& row = report.rows[i];
    row.ell = ell_grid[i];
    row.sup = phi_sup(geom, row.ell, cutoff_c1, tol);
    row.margin = row.sup.value - report.c0;
    row.pass = row.margin >= -2.0 * tol;
  });
  report.all_pass = std::all_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.pass; });
  return report;
}

double stationary_phase_leading(double ell, std::int64_t p) {
  if (!(ell > 0.0)) throw PreconditionError("stationary-phase term needs ell > 0");
  const double pp = static_cast<double>(p);
  return std::sqrt(pp) / kPi * std::sin(2.0 * kPi * pp * std::sqrt(ell)) / std::pow(ell, 0.25);
}

namespace {

template <class Real>
Real series_value(Real l, Real mu, std::int64_t n) {
  const Real quarter_pi = std::numbers::pi_v<Real> / 4;
  Real sum = 0;
  for (std::int64_t k = -n; k <= n; ++k) {
    const Real kk = static_cast<Real>(k);
    const Real s = std::sqrt(kk * kk + mu);
    sum += std::sin(l * s - quarter_pi) / (s * std::sqrt(s));
  }
  return sum;
}

}  // namespace

double pde_series(double l, double mu, std::int64_t n) {
  if (!(mu > 0.0)) throw PreconditionError("mu must be positive");
  return series_value<double>(l, mu, n);
}

double PdeResidual::numeric() const { return std::max(std::abs(analytic), std::abs(finite_difference)); }

PdeResidual pde_residual(double l, double mu, std::int64_t n, double h) {
  if (!(mu > 0.0)) throw PreconditionError("mu must be positive");
  if (!(h > 0.0) || !(mu - h > 0.0)) throw PreconditionError("step h must satisfy 0 < h < mu");
  if (n < 0) throw PreconditionError("truncation N must be >= 0");

  // Term f = s^{-3/2} sin(phi), s = sqrt(k^2 + mu), phi = l s - pi/4:
  //   f_l    = s^{-1/2} cos(phi)
  //   f_llmu = -(1/4) s^{-3/2} sin(phi) - (l/2) s^{-1/2} cos(phi)
  CompensatedSum u, u_l, u_llmu;
  for (std::int64_t k = -n; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = std::sqrt(kk * kk + mu);
    const double phase = l * s - kPi / 4.0;
    const double sn = std::sin(phase);
    const double cs = std::cos(phase);
    const double rs = std::sqrt(s);
    u.add(sn / (s * rs));
    u_l.add(cs / rs);
    u_llmu.add(-0.25 * sn / (s * rs) - 0.5 * l * cs / rs);
  }
  PdeResidual out;
  const double a = u_llmu.value();
  const double b = 0.5 * l * u_l.value();
  const double c = 0.25 * u.value();
  out.analytic = a + b + c;
  out.scale = std::abs(a) + std::abs(b) + std::abs(c);

  // Central differences in extended precision; the third-order mixed
  // difference loses ~eps/h^3 to rounding.
  using Ld = long double;
  const Ld L = l, M = mu, H = h;
  const auto U = [&](Ld ll, Ld mm) { return series_value<Ld>(ll, mm, n); };
  const auto second_l = [&](Ld mm) { return (U(L + H, mm) - 2 * U(L, mm) + U(L - H, mm)) / (H * H); };
  const Ld d_llmu = (second_l(M + H) - second_l(M - H)) / (2 * H);
  const Ld d_l = (U(L + H, M) - U(L - H, M)) / (2 * H);
  out.finite_difference = static_cast<double>(d_llmu + L / 2 * d_l + U(L, M) / 4);
  return out;
}

}  // namespace stripgap
