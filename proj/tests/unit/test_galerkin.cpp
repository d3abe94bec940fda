#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "stripgap/core_spectrum.hpp"
#include "stripgap/galerkin.hpp"

using namespace stripgap;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> tau_grid(int n) {
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(0.5 * i / n);
  return t;
}

}  // namespace

TEST_CASE("potential validation") {
  CHECK_THROWS_AS(PotentialSpec({{1, 0, {0.1, 0.0}}}), PreconditionError);
  CHECK_THROWS_AS(PotentialSpec({{1, 0, {0.1, 0.2}}, {-1, 0, {0.1, 0.2}}}), PreconditionError);
  CHECK_NOTHROW(PotentialSpec({{1, 2, {0.1, 0.2}}, {-1, 2, {0.1, -0.2}}}));
  CHECK_THROWS_AS(PotentialSpec({{0, -1, {1.0, 0.0}}}), PreconditionError);
  const PotentialSpec merged({{0, 0, 1.0}, {0, 0, 2.0}});
  CHECK(merged.coefficient(0, 0) == std::complex<double>(3.0, 0.0));
  CHECK(PotentialSpec::cosine(0.4, 2).coefficient(-2, 0) == std::complex<double>(0.2, 0.0));
  CHECK(PotentialSpec::constant(0.0).empty());
}

TEST_CASE("potential values") {
  const StripGeometry g(2.0, 1.5);
  const auto v = PotentialSpec::cosine(1.0, 1) + PotentialSpec::cosine(1.0, 0, 1);
  CHECK(v.value(g, 0.0, 0.0) == Approx(2.0));
  CHECK(v.value(g, 1.5, 2.0) == Approx(-2.0));
  CHECK(v.value(g, 0.75, 1.0) == Approx(0.0).epsilon(1e-15));
  CHECK(v.max_j() == 1);
  CHECK(v.max_q() == 1);
  const PotentialSpec phased({{1, 0, {0.0, 0.5}}, {-1, 0, {0.0, -0.5}}});  // -sin(pi x1 / T)
  CHECK(phased.value(g, 0.75, 0.3) == Approx(-1.0));
}

TEST_CASE("potential file parsing") {
  std::istringstream in(
      "# cosine along the strip\n"
      "T=3.14159 d=6.28318\n"
      "1 0 0.1 0   # v_{1,0}\n"
      "\n"
      "-1 0 0.1 0\n"
      "0 2 -0.05 0\n");
  const auto f = parse_potential(in);
  CHECK(f.half_period == Approx(3.14159));
  CHECK(f.width == Approx(6.28318));
  CHECK(f.potential.terms().size() == 3);
  CHECK(f.potential.coefficient(0, 2).real() == Approx(-0.05));

  std::istringstream missing("1 0 0.1 0\n");
  CHECK_THROWS_AS(parse_potential(missing), PreconditionError);
  std::istringstream junk("T=1 d=1\n1 0 0.1\n");
  CHECK_THROWS_AS(parse_potential(junk), PreconditionError);
  std::istringstream bad_key("T=1 w=1\n");
  CHECK_THROWS_AS(parse_potential(bad_key), PreconditionError);
  CHECK_THROWS_AS(read_potential_file("/nonexistent/potential.txt"), PreconditionError);
}

TEST_CASE("transverse weights") {
  for (int m = 1; m <= 5; ++m) {
    for (int mp = 1; mp <= 5; ++mp) CHECK(transverse_weight(mp, m, 0) == (m == mp ? 1.0 : 0.0));
  }
  // Quadrature of (2/d) sin sin cos on [0, d] with d = 1.
  for (auto [mp, m, q] : {std::tuple{1, 3, 2}, {2, 2, 4}, {1, 2, 3}, {3, 1, 4}, {2, 5, 3}}) {
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n;
      s += 2.0 * std::sin(kPi * mp * x) * std::sin(kPi * m * x) * std::cos(kPi * q * x) / n;
    }
    CHECK(transverse_weight(mp, m, q) == Approx(s).epsilon(1e-7));
  }
}

TEST_CASE("two-mode cosine example") {
  const StripGeometry g(kPi, kPi);
  const std::vector<Mode> basis{{0, 1}, {1, 1}};
  const double v = 0.3;
  const auto h = assemble(g, 0.0, PotentialSpec::cosine(2 * v, 1), basis);
  CHECK(h(0, 0).real() == Approx(1.0));
  CHECK(h(1, 1).real() == Approx(2.0));
  CHECK(h(0, 1).real() == Approx(v));
  CHECK(h(1, 0).real() == Approx(v));
  const auto e = hermitian_eigenvalues(h);
  CHECK(e[0] == Approx((3 - std::sqrt(1 + 4 * v * v)) / 2).epsilon(1e-12));
  CHECK(e[1] == Approx((3 + std::sqrt(1 + 4 * v * v)) / 2).epsilon(1e-12));

  const auto unit = hermitian_eigenvalues(assemble(g, 0.0, PotentialSpec::cosine(2.0, 1), basis));
  CHECK(std::abs(unit[0] - (3 - std::sqrt(5.0)) / 2) <= 1e-10);
  CHECK(std::abs(unit[1] - (3 + std::sqrt(5.0)) / 2) <= 1e-10);
}

TEST_CASE("hermitian eigenvalues") {
  HermitianMatrix m(2, 2);
  m << 1, 1, 1, 2;
  const auto e = hermitian_eigenvalues(m);
  CHECK(e[0] == Approx(0.381966011250105).epsilon(1e-12));
  CHECK(e[1] == Approx(2.618033988749895).epsilon(1e-12));
  const auto id = hermitian_eigenvalues(HermitianMatrix::Identity(3, 3));
  CHECK(id == std::vector<double>{1.0, 1.0, 1.0});
  HermitianMatrix d = HermitianMatrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = -1;
  d(2, 2) = 2;
  CHECK(hermitian_eigenvalues(d) == std::vector<double>{-1.0, 2.0, 3.0});
  HermitianMatrix bad(2, 2);
  bad << 1, 1, 0, 2;
  CHECK_THROWS_AS(hermitian_eigenvalues(bad), PreconditionError);
}

TEST_CASE("assembled matrices are exactly Hermitian") {
  const StripGeometry g(1.3, 0.7);
  const PotentialSpec v({{1, 0, {0.2, 0.1}}, {-1, 0, {0.2, -0.1}}, {2, 3, {0.0, 0.05}}, {-2, 3, {0.0, -0.05}},
                         {0, 1, {0.3, 0.0}}});
  const auto h = assemble(g, 0.21, v, 4, 5);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(assemble(g, 0.0, v, 100, 100), PreconditionError);
}

TEST_CASE("zero potential reproduces lattice energies") {
  const StripGeometry g(1.7, 1.1);
  const auto taus = tau_grid(10);
  const auto bands = band_functions(g, PotentialSpec{}, taus, 8, {6, 6});
  const auto lattice = lattice_band_table(g, taus, 8);
  CHECK((bands.energies - lattice.energies).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(bands.gate_drift <= 1e-10);
  const auto v = verify_enclosure(bands, lattice, {});
  CHECK(v.holds);
  CHECK(std::abs(v.worst_margin) <= 1e-10);
}

TEST_CASE("constant potential shifts every eigenvalue") {
  const StripGeometry g(1.0, 0.6);
  const auto taus = tau_grid(6);
  const auto bands = band_functions(g, PotentialSpec::constant(0.7), taus, 6, {5, 5});
  const auto lattice = lattice_band_table(g, taus, 6);
  CHECK((bands.energies.array() - lattice.energies.array() - 0.7).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("adding a nonnegative constant never lowers eigenvalues") {
  const StripGeometry g(1.0, 0.8);
  const PotentialSpec v({{1, 1, {0.3, 0.2}}, {-1, 1, {0.3, -0.2}}, {0, 2, {0.4, 0.0}}});
  const auto a = hermitian_eigenvalues(assemble(g, 0.3, v, 4, 4));
  const auto b = hermitian_eigenvalues(assemble(g, 0.3, v.shifted(0.25), 4, 4));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] - a[i] == Approx(0.25).epsilon(1e-10));
}

TEST_CASE("bands agree at the two zone edges") {
  const StripGeometry g(1.0, 0.8);
  const PotentialSpec v({{1, 1, {0.3, 0.2}}, {-1, 1, {0.3, -0.2}}});
  const std::vector<double> edges{-0.5, 0.5};
  const auto t = band_functions(g, v, edges, 5, {8, 6});
  for (int k = 0; k < 5; ++k) CHECK(t.energies(0, k) == Approx(t.energies(1, k)).epsilon(1e-9));
}

TEST_CASE("omega bounds") {
  const StripGeometry g(1.0, 1.0);
  const double v = 0.15;
  const auto c = omega_bounds(g, PotentialSpec::cosine(2 * v, 1));
  CHECK(c.bounds.omega_minus <= -2 * v);
  CHECK(c.bounds.omega_plus >= 2 * v);
  CHECK(c.bounds.omega_minus >= -2 * v - c.inflation - 1e-15);
  CHECK(c.bounds.omega_plus <= 2 * v + c.inflation + 1e-15);

  const auto k = omega_bounds(g, PotentialSpec::constant(1.25));
  CHECK(k.bounds.omega_minus == 1.25);
  CHECK(k.bounds.omega_plus == 1.25);
  CHECK(k.bounds.omega_l() == 0.0);

  // cos(pi x1) + cos(pi x2): max 2 at the corner, min -2 at (1, 1).
  const auto mixed = PotentialSpec::cosine(1.0, 1) + PotentialSpec::cosine(1.0, 0, 1);
  const auto m = omega_bounds(g, mixed, 1000);
  CHECK(m.grid_max == Approx(2.0));
  CHECK(m.bounds.omega_plus >= 2.0);
  CHECK(m.bounds.omega_minus <= -2.0);
  CHECK(m.grid_min == Approx(-2.0));
}

TEST_CASE("enclosure holds for a cosine perturbation") {
  const auto g = StripGeometry::from_ratio(0.05);
  const auto v = PotentialSpec::cosine(0.2, 1);
  const auto taus = tau_grid(10);
  const auto bands = band_functions(g, v, taus, 6, {6, 12});
  const auto lattice = lattice_band_table(g, taus, 6);
  const auto omega = omega_bounds(g, v);
  const auto verdict = verify_enclosure(bands, lattice, omega.bounds);
  CHECK(verdict.holds);
  CHECK(verdict.worst_margin >= -1e-6);
  CHECK(bands.gate_drift < 1e-6);
  CHECK(verify_enclosure(bands, lattice, {-0.2, 0.2}).holds);
}

TEST_CASE("convergence gate reports drift") {
  const StripGeometry g(1.0, 1.0);
  const PotentialSpec strong({{1, 1, {3.0, 0.0}}, {-1, 1, {3.0, 0.0}}});
  const auto taus = tau_grid(2);
  try {
    band_functions(g, strong, taus, 4, {1, 2});
    FAIL("expected a convergence failure");
  } catch (const ConvergenceError& e) {
    CHECK(e.drift() >= 1e-6);
  }
}

TEST_CASE("threaded and serial band tables agree") {
  const StripGeometry g(1.0, 0.8);
  const PotentialSpec v({{1, 1, {0.3, 0.2}}, {-1, 1, {0.3, -0.2}}});
  const auto taus = tau_grid(8);
  BandOptions serial;
  serial.check_gate = false;
  BandOptions threaded = serial;
  threaded.workers = 4;
  const auto a = band_functions(g, v, taus, 5, {6, 6}, serial);
  const auto b = band_functions(g, v, taus, 5, {6, 6}, threaded);
  CHECK(a.energies == b.energies);
}

TEST_CASE("mismatched tables are rejected") {
  const StripGeometry g(1.0, 1.0);
  const auto a = lattice_band_table(g, tau_grid(3), 3);
  const auto b = lattice_band_table(g, tau_grid(4), 3);
  CHECK_THROWS_AS(verify_enclosure(a, b, {}), PreconditionError);
}
