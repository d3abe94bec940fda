#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stripgap/fourier.hpp"

using namespace stripgap;
using doctest::Approx;

namespace {

// Midpoint rule on a fine grid of N0(ell, tau) cos(2 pi p tau); slow but independent.
double sampled_coefficient(double xi, double ell, std::int64_t p, int samples) {
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double tau = -0.5 + (i + 0.5) / samples;
    sum += static_cast<double>(oracle::count_points(xi, ell, tau)) *
           std::cos(2.0 * std::numbers::pi * static_cast<double>(p) * tau);
  }
  return sum / samples;
}

}  // namespace

TEST_CASE("a0 closed form") {
  const auto g = StripGeometry::from_ratio(0.5);
  CHECK(a0_closed(g, 1.3) == Approx(3.14483526820225190).epsilon(1e-15));
  CHECK(a0_closed(g, 0.2) == 0.0);
  CHECK(a0_closed(g, 0.25) == 0.0);
}

TEST_CASE("ap closed form") {
  const auto g = StripGeometry::from_ratio(0.5);
  CHECK(ap_closed(g, 1.3, 1) == Approx(-0.0448290814667603712).epsilon(1e-13));
  CHECK(ap_closed(g, 0.2, 3) == 0.0);
  CHECK(ap_closed(StripGeometry::from_ratio(1.0), 1.0, 1) == Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(ap_closed(g, 1.3, 0), PreconditionError);
}

TEST_CASE("exact integral reproduces the closed forms") {
  const auto g = StripGeometry::from_ratio(0.5);
  CHECK(ap_exact_integral(g, 1.3, 0) == Approx(3.14483526820225190).epsilon(1e-14));
  CHECK(ap_exact_integral(g, 1.3, 1) == Approx(-0.0448290814667603712).epsilon(1e-12));
  for (std::int64_t p : {0, 1, 4}) CHECK(ap_exact_integral(g, 0.2, p) == 0.0);

  auto rng = oracle::rng(11);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double xi = oracle::uniform(rng, 0.02, 0.9);
    const auto geom = StripGeometry::from_ratio(xi);
    const double ell = oracle::uniform(rng, xi * xi, 100.0);
    const auto p = static_cast<std::int64_t>(i % 11);
    const double closed = p == 0 ? a0_closed(geom, ell) : ap_closed(geom, ell, p);
    worst = std::max(worst, std::abs(closed - ap_exact_integral(geom, ell, p)) / std::max(1.0, std::abs(closed)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("exact integral agrees with brute-force sampling") {
  for (auto [xi, ell, p] : {std::tuple{0.4, 3.3, 1}, {0.7, 9.1, 2}, {0.25, 2.2, 3}}) {
    const auto g = StripGeometry::from_ratio(xi);
    CHECK(ap_exact_integral(g, ell, p) == Approx(sampled_coefficient(xi, ell, p, 200000)).epsilon(1e-3));
  }
}

TEST_CASE("fourier record") {
  const auto g = StripGeometry::from_ratio(0.5);
  const auto r0 = fourier_record(g, 1.3, 0);
  CHECK(!r0.residual_bound.has_value());
  const auto r1 = fourier_record(g, 1.3, 1);
  REQUIRE(r1.residual_bound.has_value());
  CHECK(*r1.residual_bound == Approx(s5_bound(g, 1.3, 1)));
  CHECK(std::abs(r1.value) <= r0.value + 1.0);
}

TEST_CASE("residual bound constant part") {
  const auto g = StripGeometry::from_ratio(0.5);
  CHECK(s5_bound(g, 1.0, 1) >= std::sqrt(2.0) / 3.0 + 1.0 / (2.0 * std::numbers::pi));
  CHECK(s6_bound(g, 3.0) == Approx(s5_bound(g, 3.0, 1)));
  CHECK(s5_bound(g, 3.0, 2) < s5_bound(g, 3.0, 1));
}

TEST_CASE("lemma 3.2 examples") {
  const auto g = StripGeometry::from_ratio(0.5);
  const auto same = lemma32_check(g, 1.3, 1.3);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.holds);
  CHECK(lemma32_check(g, 1.3, 2.0).holds);
  CHECK(lemma32_check(StripGeometry::from_ratio(0.1), 1.0, 100.0).holds);
  CHECK_THROWS_AS(lemma32_check(g, 2.0, 1.3), PreconditionError);
  CHECK_THROWS_AS(lemma32_check(g, 0.1, 1.3), PreconditionError);
}

TEST_CASE("lemma 3.2 can fail just above a new row") {
  // Between ell and ell~ a new row m = floor(sqrt(ell~)/xi) opens and the
  // partial row near t = sqrt(ell)/xi is not covered by the estimate.
  const auto g = StripGeometry::from_ratio(0.8939);
  const auto c = lemma32_check(g, 79.850, 81.840);
  CHECK(c.lhs == Approx(5.407).epsilon(1e-3));
  CHECK(c.rhs == Approx(4.906).epsilon(1e-3));
  CHECK_FALSE(c.holds);
}

TEST_CASE("a0 is nondecreasing in ell") {
  auto rng = oracle::rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto g = StripGeometry::from_ratio(oracle::uniform(rng, 0.02, 0.9));
    const double ell = oracle::uniform(rng, 0.0, 100.0);
    REQUIRE(a0_closed(g, ell) <= a0_closed(g, ell + oracle::uniform(rng, 0.0, 1.0)));
  }
}

TEST_CASE("counting extremes bracket a0") {
  const auto g = StripGeometry::from_ratio(0.5);
  const auto e = counting_extremes_check(g, 1.3, 1);
  CHECK(e.sup_n == 4);
  CHECK(e.inf_n == 3);
  CHECK(e.a0 == Approx(3.1448352682));
  CHECK(e.ap_abs == Approx(0.0448290815));
  CHECK(e.holds);
  const auto empty = counting_extremes_check(g, 0.2, 1);
  CHECK(empty.sup_n == 0);
  CHECK(empty.inf_n == 0);
  CHECK(empty.a0 == 0.0);
  CHECK(empty.holds);
  CHECK(counting_extremes_check(StripGeometry::from_ratio(0.1), 2.0, 3).holds);

  auto rng = oracle::rng(99);
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    const double xi = oracle::uniform(rng, 0.02, 0.9);
    const auto geom = StripGeometry::from_ratio(xi);
    const double ell = oracle::uniform(rng, xi * xi, 100.0);
    if (!counting_extremes_check(geom, ell, 1 + i % 10).holds) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("residual check arithmetic") {
  const auto g = StripGeometry::from_ratio(0.5);
  PhiEvaluation phi;
  phi.p = 1;
  phi.ell = 1.0;
  phi.value = 0.1;
  phi.tail_bound = 0.01;
  const auto r = ap_residual_check(g, 1.0, 1, phi);
  CHECK(r.residual == Approx(std::abs(ap_closed(g, 1.0, 1) - 0.1)));
  CHECK(r.bound == Approx(s5_bound(g, 1.0, 1) + 0.01));
  CHECK(r.bound >= 0.6305);
  const auto half = ap_residual_check(g, 1.0, 1, phi, 0.5);
  CHECK(half.residual == Approx(std::abs(ap_closed(g, 1.0, 1) - 0.05)));
  phi.p = 2;
  CHECK_THROWS_AS(ap_residual_check(g, 1.0, 1, phi), PreconditionError);
}

TEST_CASE("coefficient is twice the published residual normalisation") {
  // a_p tracks (1/2) ell^{1/4} phi_p far more closely than ell^{1/4} phi_p.
  const auto g = StripGeometry::from_ratio(0.02);
  const auto phi = phi_p(g, 100.0, 1, 1e-3);
  const auto full = ap_residual_check(g, 100.0, 1, phi);
  const auto half = ap_residual_check(g, 100.0, 1, phi, 0.5);
  CHECK_FALSE(full.holds);
  CHECK(full.residual == Approx(18.06).epsilon(2e-3));
  CHECK(half.holds);
}

TEST_CASE("residual at xi 0.05 only closes with the half weight") {
  const auto g = StripGeometry::from_ratio(0.05);
  struct Case {
    double ell;
    std::int64_t p;
    double full_residual;
  };
  for (const auto c : {Case{4.0, 1, 3.42797395}, Case{100.0, 2, 2.629305881}}) {
    CAPTURE(c.ell);
    const auto phi = phi_p(g, c.ell, c.p, 1e-4);
    const auto full = ap_residual_check(g, c.ell, c.p, phi);
    CHECK(full.residual == Approx(c.full_residual).epsilon(1e-6));
    CHECK_FALSE(full.holds);
    CHECK(ap_residual_check(g, c.ell, c.p, phi, 0.5).holds);
  }
}
