#include "stripgap/core_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace stripgap {
namespace {

constexpr double kPi = std::numbers::pi;

double tie_slack(double ell) { return kCountingTieTolerance * std::max(1.0, ell); }

struct LatticeWindow {
  std::int64_t n_lo;
  std::int64_t n_hi;
  std::int64_t m_hi;
};

// Every (n, m) that can satisfy (n+tau)^2 + xi^2 m^2 <= ell + slack.
LatticeWindow window(double xi, double level, double tau) {
  const double r = std::sqrt(level);
  return {static_cast<std::int64_t>(std::floor(-r - tau)),
          static_cast<std::int64_t>(std::ceil(r - tau)),
          static_cast<std::int64_t>(std::floor(r / xi)) + 1};
}

class InsideTest {
 public:
  InsideTest(double xi, double ell, double tau)
      : xi2_(xi * xi), level_(ell + tie_slack(ell)), tau_(tau) {}

  bool operator()(std::int64_t n, std::int64_t m) const {
    const double s = static_cast<double>(n) + tau_;
    const double mm = static_cast<double>(m);
    return s * s + xi2_ * mm * mm <= level_;
  }
  double level() const { return level_; }

 private:
  double xi2_;
  double level_;
  double tau_;
};

std::int64_t count_lattice(double xi, double ell, double tau) {
  const InsideTest inside(xi, ell, tau);
  const auto w = window(xi, inside.level(), tau);
  std::int64_t total = 0;
  for (std::int64_t n = w.n_lo; n <= w.n_hi; ++n) {
    for (std::int64_t m = 1; m <= w.m_hi; ++m) {
      if (inside(n, m)) ++total;
    }
  }
  return total;
}

// Row form: for each n the admissible m are 1..floor(sqrt(ell - (n+tau)^2) / xi).
std::int64_t count_rows(double xi, double ell, double tau) {
  const InsideTest inside(xi, ell, tau);
  const auto w = window(xi, inside.level(), tau);
  std::int64_t total = 0;
  for (std::int64_t n = w.n_lo; n <= w.n_hi; ++n) {
    const double s = static_cast<double>(n) + tau;
    const double rest = inside.level() - s * s;
    if (rest < 0.0) continue;
    auto m = static_cast<std::int64_t>(std::floor(std::sqrt(rest) / xi));
    // floor(sqrt()) can be off by one against the exact predicate
    while (inside(n, m + 1)) ++m;
    while (m > 0 && !inside(n, m)) --m;
    total += m;
  }
  return total;
}

void check_ell(double ell) {
  if (!(ell >= 0.0) || !std::isfinite(ell)) {
    throw PreconditionError("scaled energy ell must be finite and >= 0, got " + std::to_string(ell));
  }
}

}  // namespace

double mode_energy(const StripGeometry& geom, QuasiMomentum tau, Mode mode) {
  const double s = tau.value() + static_cast<double>(mode.n);
  const double m = static_cast<double>(mode.m);
  const double T = geom.half_period();
  const double d = geom.width();
  return kPi * kPi / (T * T) * s * s + kPi * kPi * m * m / (d * d);
}

std::int64_t counting_at(const StripGeometry& geom, double ell, double tau, CountingForm form) {
  check_ell(ell);
  const double xi = geom.xi();
  if (ell + tie_slack(ell) < xi * xi) return 0;
  return form == CountingForm::lattice ? count_lattice(xi, ell, tau) : count_rows(xi, ell, tau);
}

std::int64_t counting(const StripGeometry& geom, double ell, QuasiMomentum tau, CountingForm form) {
  return counting_at(geom, ell, tau.value(), form);
}

CountingProfile counting_profile(const StripGeometry& geom, double ell) {
  check_ell(ell);
  constexpr double kEdgeClamp = 1e-12;
  constexpr double kMergeGap = 1e-13;
  const double xi = geom.xi();

  std::vector<double> nodes{-0.5, 0.5};
  if (ell >= xi * xi) {
    const auto m_hi = static_cast<std::int64_t>(std::floor(std::sqrt(ell) / xi)) + 1;
    for (std::int64_t m = 1; m <= m_hi; ++m) {
      const double rest = ell - xi * xi * static_cast<double>(m) * static_cast<double>(m);
      if (rest < 0.0) break;
      const double r = std::sqrt(rest);
      // Row m contains n exactly when tau lies in [-n - r, -n + r].
      for (const double edge : {r, -r}) {
        const auto n_lo = static_cast<std::int64_t>(std::floor(edge - 0.5)) - 1;
        for (std::int64_t n = n_lo; n <= n_lo + 3; ++n) {
          const double t = edge - static_cast<double>(n);
          if (t <= -0.5 + kEdgeClamp || t >= 0.5 - kEdgeClamp) continue;
          nodes.push_back(t);
        }
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> merged;
  merged.reserve(nodes.size());
  for (const double t : nodes) {
    if (merged.empty() || t - merged.back() > kMergeGap) merged.push_back(t);
  }
  merged.back() = 0.5;

  CountingProfile profile;
  profile.nodes = std::move(merged);
  const auto& x = profile.nodes;
  profile.node_counts.reserve(x.size());
  profile.panel_counts.reserve(x.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    profile.node_counts.push_back(counting_at(geom, ell, x[i], CountingForm::rows));
    if (i + 1 < x.size()) {
      profile.panel_counts.push_back(counting_at(geom, ell, 0.5 * (x[i] + x[i + 1]), CountingForm::rows));
    }
  }
  return profile;
}

std::vector<double> lowest_energies(const StripGeometry& geom, double tau, std::int64_t count,
                                    double scaled_ceiling) {
  if (count < 1) throw PreconditionError("band index must be >= 1");
  const double xi = geom.xi();
  double level = xi * xi + 1.0;
  while (counting_at(geom, level, tau) < count) {
    if (level > scaled_ceiling) {
      throw PreconditionError("fewer than " + std::to_string(count) +
                              " modes below the search ceiling ell = " + std::to_string(scaled_ceiling) +
                              "; raise the ceiling");
    }
    level *= 2.0;
  }
  const InsideTest inside(xi, level, tau);
  const auto w = window(xi, inside.level(), tau);
  std::vector<double> energies;
  energies.reserve(static_cast<std::size_t>(2 * count + 8));
  for (std::int64_t n = w.n_lo; n <= w.n_hi; ++n) {
    for (std::int64_t m = 1; m <= w.m_hi; ++m) {
      if (!inside(n, m)) continue;
      const double s = static_cast<double>(n) + tau;
      const double mm = static_cast<double>(m);
      energies.push_back(geom.energy_scale() * s * s + kPi * kPi * mm * mm / (geom.width() * geom.width()));
    }
  }
  const auto keep = static_cast<std::ptrdiff_t>(count);
  std::partial_sort(energies.begin(), energies.begin() + keep, energies.end());
  energies.resize(static_cast<std::size_t>(count));
  return energies;
}

double band_energy(const StripGeometry& geom, std::int64_t k, double tau, double scaled_ceiling) {
  return lowest_energies(geom, tau, k, scaled_ceiling).back();
}

namespace {

// Golden-section search for the extremum of f on [a, b]; sign = +1 for a
// minimum, -1 for a maximum. Returns (argument, value).
template <class F>
std::pair<double, double> golden_extremum(F&& f, double a, double b, double sign, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sign * f(c);
  double fd = sign * f(d);
  for (int it = 0; it < iterations; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sign * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sign * f(d);
    }
  }
  return fc < fd ? std::pair{c, sign * fc} : std::pair{d, sign * fd};
}

// Band functions are minima/maxima over convex parabolas (tau+n)^2 + xi^2 m^2,
// so their extrema off the grid sit where two parabolas cross. Golden section
// only gets close to such a kink; this lists the exact crossings of the
// branches that pass near (tau, level) and lie inside [a, b].
std::vector<double> nearby_crossings(double xi, double tau, double level, double a, double b) {
  const double slack = 1e-6 * std::max(1.0, level);
  const auto w = window(xi, level + slack, tau);
  std::vector<std::pair<std::int64_t, double>> near;  // (n, xi^2 m^2)
  for (std::int64_t n = w.n_lo; n <= w.n_hi; ++n) {
    const double s = static_cast<double>(n) + tau;
    for (std::int64_t m = 1; m <= w.m_hi; ++m) {
      const double q = xi * xi * static_cast<double>(m) * static_cast<double>(m);
      if (std::abs(s * s + q - level) <= slack) near.emplace_back(n, q);
    }
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < near.size(); ++i) {
    for (std::size_t j = i + 1; j < near.size(); ++j) {
      const auto [n1, q1] = near[i];
      const auto [n2, q2] = near[j];
      if (n1 == n2) continue;
      const double x1 = static_cast<double>(n1);
      const double x2 = static_cast<double>(n2);
      const double t = (q2 - q1 + x2 * x2 - x1 * x1) / (2.0 * (x1 - x2));
      if (t >= a && t <= b) out.push_back(t);
    }
  }
  return out;
}

}  // namespace

BandEndpoints band_endpoints_unperturbed(const StripGeometry& geom, std::int64_t k,
                                         std::int64_t tau_grid_size, double scaled_ceiling) {
  if (k < 1) throw PreconditionError("band index k must be >= 1");
  if (tau_grid_size < 3) throw PreconditionError("tau grid needs at least 3 points");
  constexpr int kGoldenIterations = 40;

  const auto n = static_cast<std::size_t>(tau_grid_size);
  std::vector<double> taus(n);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    taus[i] = 0.5 * static_cast<double>(i) / static_cast<double>(n - 1);
    values[i] = band_energy(geom, k, taus[i], scaled_ceiling);
  }
  const auto energy = [&](double t) { return band_energy(geom, k, t, scaled_ceiling); };
  const auto i_min = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  const auto i_max = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());

  BandEndpoints out{values[i_min], values[i_max], taus[i_min], taus[i_max]};
  const auto cell = [&](std::size_t i) {
    return std::pair{taus[i == 0 ? 0 : i - 1], taus[std::min(i + 1, n - 1)]};
  };
  const auto refine = [&](std::size_t i, double sign, double& best, double& arg) {
    const auto [a, b] = cell(i);
    const auto [t, v] = golden_extremum(energy, a, b, sign, kGoldenIterations);
    std::vector<double> candidates{t};
    const auto kinks = nearby_crossings(geom.xi(), t, geom.ell_from_energy(v), a, b);
    candidates.insert(candidates.end(), kinks.begin(), kinks.end());
    for (const double c : candidates) {
      const double e = c == t ? v : energy(c);
      if (sign * e < sign * best) {
        best = e;
        arg = c;
      }
    }
  };
  refine(i_min, +1.0, out.eta, out.tau_argmin);
  refine(i_max, -1.0, out.theta, out.tau_argmax);
  return out;
}

std::vector<SpectralBand> unperturbed_bands(const StripGeometry& geom, double ell_max,
                                            std::int64_t tau_grid_size) {
  check_ell(ell_max);
  const double top = geom.energy_from_ell(ell_max);
  std::vector<SpectralBand> bands;
  for (std::int64_t k = 1;; ++k) {
    const auto e = band_endpoints_unperturbed(geom, k, tau_grid_size,
                                              std::max(1e7, 4.0 * ell_max + 4.0));
    bands.push_back({k, e.eta, e.theta});
    if (e.eta > top) break;
  }
  return bands;
}

}  // namespace stripgap
