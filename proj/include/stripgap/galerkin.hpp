#pragma once

// Plane-wave/sine Galerkin discretisation of the fibre operator
//   (i d/dx1 + pi tau / T)^2 - d^2/dx2^2 + V
// for trigonometric potentials
//   V(x) = sum v_{j,q} exp(i pi j x1 / T) cos(pi q x2 / d).
// Matrix entries are exact, so truncation is the only discretisation error.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stripgap/gap_analysis.hpp"
#include "stripgap/geometry.hpp"

namespace stripgap {

using HermitianMatrix = Eigen::MatrixXcd;

struct PotentialTerm {
  std::int64_t j = 0;
  std::int64_t q = 0;
  std::complex<double> coeff;
};

/// Finite trigonometric potential. Construction merges repeated (j, q) and
/// rejects coefficient sets that do not describe a real-valued V, i.e.
/// v_{-j,q} != conj(v_{j,q}) beyond 1e-12.
class PotentialSpec {
 public:
  PotentialSpec() = default;
  explicit PotentialSpec(std::vector<PotentialTerm> terms);

  static PotentialSpec constant(double c);
  /// amplitude * cos(pi j x1 / T) * cos(pi q x2 / d)
  static PotentialSpec cosine(double amplitude, std::int64_t j, std::int64_t q = 0);

  const std::vector<PotentialTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::complex<double> coefficient(std::int64_t j, std::int64_t q) const;
  std::int64_t max_j() const noexcept;
  std::int64_t max_q() const noexcept;

  /// Sum of |v_{j,q}| pi (|j|/T + q/d): a Lipschitz constant of V.
  double gradient_bound(const StripGeometry& geom) const;
  double value(const StripGeometry& geom, double x1, double x2) const;

  /// V + c.
  PotentialSpec shifted(double c) const;
  /// V_a + V_b.
  friend PotentialSpec operator+(const PotentialSpec& a, const PotentialSpec& b);

 private:
  std::vector<PotentialTerm> terms_;  // sorted by (j, q), zero entries dropped
};

/// Potential file contents: a header line `T=<value> d=<value>` followed by
/// records `j q re im`; `#` starts a comment, blank lines are skipped.
struct PotentialFile {
  double half_period = 0.0;
  double width = 0.0;
  PotentialSpec potential;
};

PotentialFile parse_potential(std::istream& in);
PotentialFile read_potential_file(const std::string& path);

/// Largest basis accepted by assemble().
inline constexpr std::int64_t kMaxBasisSize = 4096;

/// Transverse weight: (2/d) int_0^d sin(pi m' x/d) sin(pi m x/d) cos(pi q x/d) dx.
double transverse_weight(std::int64_t m_prime, std::int64_t m, std::int64_t q);

/// Basis {|n| <= n_max} x {1 <= m <= m_max}, n outer, m inner.
std::vector<Mode> galerkin_basis(std::int64_t n_max, std::int64_t m_max);

HermitianMatrix assemble(const StripGeometry& geom, double tau, const PotentialSpec& potential,
                         std::span<const Mode> basis);
HermitianMatrix assemble(const StripGeometry& geom, double tau, const PotentialSpec& potential,
                         std::int64_t n_max, std::int64_t m_max);

/// All eigenvalues, ascending, with multiplicity. Rejects matrices whose
/// entries differ from their conjugate transpose by more than
/// 1e-12 * max(1, max |h_ij|).
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& matrix);

struct Truncation {
  std::int64_t n_max = 4;
  std::int64_t m_max = 4;
};

/// Lowest k_max eigenvalues on a tau grid. energies(i, k-1) = E_k(tau_grid[i]).
struct BandTable {
  std::vector<double> tau_grid;
  Eigen::MatrixXd energies;
  Truncation truncation;
  double gate_drift = 0.0;  // max |E_k(bigger basis) - E_k| over the table
  bool gate_checked = false;
};

/// Raised when enlarging the truncation moves an eigenvalue by more than
/// the gate tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double drift) : std::runtime_error(what), drift_(drift) {}
  double drift() const noexcept { return drift_; }

 private:
  double drift_;
};

struct BandOptions {
  unsigned workers = 1;
  std::int64_t gate_step = 5;   // both n_max and m_max grow by this much
  double gate_tolerance = 1e-6;
  bool check_gate = true;
};

/// Perturbed band functions. With check_gate, every entry is recomputed on the
/// enlarged basis and ConvergenceError is thrown when the drift reaches the
/// tolerance.
BandTable band_functions(const StripGeometry& geom, const PotentialSpec& potential,
                         std::span<const double> tau_grid, std::int64_t k_max, Truncation truncation,
                         const BandOptions& options = {});

/// Exact unperturbed band functions from the lattice energies.
BandTable lattice_band_table(const StripGeometry& geom, std::span<const double> tau_grid, std::int64_t k_max);

struct OmegaEnclosure {
  PerturbBounds bounds;  // rigorous: omega_minus <= min V, omega_plus >= max V
  double grid_min = 0.0;
  double grid_max = 0.0;
  double inflation = 0.0;  // gradient bound times cell diameter over grid size
};

/// Samples V on a grid x grid lattice over the cell and widens the sampled
/// range by the Lipschitz inflation.
OmegaEnclosure omega_bounds(const StripGeometry& geom, const PotentialSpec& potential, std::int64_t grid = 512);

struct EnclosureVerdict {
  double worst_margin = 0.0;  // min over entries of the two signed margins
  std::size_t worst_tau_index = 0;
  std::int64_t worst_k = 0;
  bool holds = false;  // worst_margin >= -tolerance
};

/// Checks E0_k(tau) + omega_minus <= E_k(tau) <= E0_k(tau) + omega_plus at
/// every grid point. Throws PreconditionError on mismatched tables.
EnclosureVerdict verify_enclosure(const BandTable& bands, const BandTable& bands0, const PerturbBounds& bounds,
                                  double tolerance = 1e-6);

}  // namespace stripgap
