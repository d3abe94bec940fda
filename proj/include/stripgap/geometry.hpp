#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stripgap {

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical self-check inside an operation does not close.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strip of width d with period 2T along x1. xi = T/d is stored as computed.
class StripGeometry {
 public:
  StripGeometry(double width, double half_period);

  static StripGeometry from_ratio(double xi, double half_period = 1.0);

  double width() const noexcept { return d_; }
  double half_period() const noexcept { return T_; }
  double xi() const noexcept { return xi_; }

  /// pi^2 / T^2: converts a scaled spectral parameter ell into an energy.
  double energy_scale() const noexcept {
    return std::numbers::pi * std::numbers::pi / (T_ * T_);
  }
  double energy_from_ell(double ell) const noexcept { return energy_scale() * ell; }
  double ell_from_energy(double energy) const noexcept { return energy / energy_scale(); }

 private:
  double d_;
  double T_;
  double xi_;
};

/// Quasimomentum in one Brillouin zone, -1/2 < tau <= 1/2.
class QuasiMomentum {
 public:
  explicit QuasiMomentum(double tau);

  /// Maps any real number into (-1/2, 1/2] by integer shifts.
  static QuasiMomentum wrap(double tau);

  double value() const noexcept { return tau_; }

 private:
  double tau_;
};

/// Lattice label of an unperturbed eigenfunction exp(i pi n x1 / T) sin(pi m x2 / d).
struct Mode {
  std::int64_t n = 0;
  std::int64_t m = 1;
};

/// A spectral band [lo, hi] in energy units.
struct SpectralBand {
  std::int64_t k = 0;
  double lo = 0.0;
  double hi = 0.0;
};

}  // namespace stripgap
