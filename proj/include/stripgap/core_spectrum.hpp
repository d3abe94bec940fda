#pragma once

// Exact spectral data of the unperturbed Dirichlet strip: lattice energies,
// the rescaled counting function N0(ell, tau) and band endpoints.

#include <cstdint>
#include <vector>

#include "stripgap/geometry.hpp"

namespace stripgap {

enum class CountingForm { lattice, rows };

/// Relative tie tolerance: a lattice point within 1e-12 * max(1, ell) of the
/// level curve counts as inside.
inline constexpr double kCountingTieTolerance = 1e-12;

/// (pi^2/T^2)(tau+n)^2 + pi^2 m^2 / d^2
double mode_energy(const StripGeometry& geom, QuasiMomentum tau, Mode mode);

/// #{(n, m) : n in Z, m >= 1, (n+tau)^2 + xi^2 m^2 <= ell}.
std::int64_t counting(const StripGeometry& geom, double ell, QuasiMomentum tau,
                      CountingForm form = CountingForm::lattice);

/// Same count for an arbitrary real tau (N0 is 1-periodic in tau).
std::int64_t counting_at(const StripGeometry& geom, double ell, double tau,
                         CountingForm form = CountingForm::lattice);

/// N0(ell, .) on [-1/2, 1/2] as a step function: nodes[0] = -1/2,
/// nodes.back() = 1/2, panel i is (nodes[i], nodes[i+1]) with count
/// panel_counts[i]; node_counts[i] is the value at the node itself.
struct CountingProfile {
  std::vector<double> nodes;
  std::vector<std::int64_t> panel_counts;
  std::vector<std::int64_t> node_counts;
};

/// Builds the profile from the jump points tau = +-sqrt(ell - xi^2 m^2) - n.
/// Jump points within 1e-12 of +-1/2 are clamped onto the edge.
CountingProfile counting_profile(const StripGeometry& geom, double ell);

/// k-th smallest lattice energy (1-based) at the given tau, energy units.
/// Throws PreconditionError when fewer than k modes lie below the scaled
/// ceiling.
double band_energy(const StripGeometry& geom, std::int64_t k, double tau,
                   double scaled_ceiling = 1e7);

/// All unperturbed energies at tau in ascending order, first `count` of them.
std::vector<double> lowest_energies(const StripGeometry& geom, double tau, std::int64_t count,
                                    double scaled_ceiling = 1e7);

struct BandEndpoints {
  double eta = 0.0;    // min over tau of E_k^0
  double theta = 0.0;  // max over tau of E_k^0
  double tau_argmin = 0.0;
  double tau_argmax = 0.0;
};

/// Min and max of E_k^0 over a uniform grid on [0, 1/2] (E_k^0 is even in tau),
/// followed by a 40-step golden-section refinement on the cells adjacent to
/// each grid extremizer. Off-grid extrema are kinks where two lattice
/// parabolas cross, so the refined point is finally snapped to the exact
/// crossing of the branches meeting there.
BandEndpoints band_endpoints_unperturbed(const StripGeometry& geom, std::int64_t k,
                                         std::int64_t tau_grid_size,
                                         double scaled_ceiling = 1e7);

/// Bands k = 1, 2, ... up to and including the first band whose bottom lies
/// above energy_from_ell(ell_max).
std::vector<SpectralBand> unperturbed_bands(const StripGeometry& geom, double ell_max,
                                            std::int64_t tau_grid_size);

}  // namespace stripgap
