#include "stripgap/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "stripgap/core_spectrum.hpp"
#include "stripgap/parallel.hpp"

namespace stripgap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHermitianTolerance = 1e-12;

std::string num(double x) { return std::to_string(x); }

}  // namespace

PotentialSpec::PotentialSpec(std::vector<PotentialTerm> terms) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::complex<double>> merged;
  for (const auto& t : terms) {
    if (t.q < 0) throw PreconditionError("potential index q must be >= 0, got " + std::to_string(t.q));
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
      throw PreconditionError("potential coefficients must be finite");
    }
    merged[{t.j, t.q}] += t.coeff;
  }
  double scale = 1.0;
  for (const auto& [key, c] : merged) scale = std::max(scale, std::abs(c));
  for (const auto& [key, c] : merged) {
    const auto it = merged.find({-key.first, key.second});
    const std::complex<double> partner = it == merged.end() ? 0.0 : it->second;
    if (std::abs(c - std::conj(partner)) > kHermitianTolerance * scale) {
      throw PreconditionError("potential is not real-valued: v(" + std::to_string(key.first) + "," +
                              std::to_string(key.second) + ") is not the conjugate of v(" +
                              std::to_string(-key.first) + "," + std::to_string(key.second) + ")");
    }
  }
  for (const auto& [key, c] : merged) {
    if (c != 0.0) terms_.push_back({key.first, key.second, c});
  }
}

PotentialSpec PotentialSpec::constant(double c) { return PotentialSpec({{0, 0, c}}); }

PotentialSpec PotentialSpec::cosine(double amplitude, std::int64_t j, std::int64_t q) {
  if (j == 0) return PotentialSpec({{0, q, amplitude}});
  return PotentialSpec({{j, q, 0.5 * amplitude}, {-j, q, 0.5 * amplitude}});
}

std::complex<double> PotentialSpec::coefficient(std::int64_t j, std::int64_t q) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair{j, q}, [](const PotentialTerm& t, auto key) {
    return std::pair{t.j, t.q} < key;
  });
  return it != terms_.end() && it->j == j && it->q == q ? it->coeff : 0.0;
}

std::int64_t PotentialSpec::max_j() const noexcept {
  std::int64_t out = 0;
  for (const auto& t : terms_) out = std::max(out, std::abs(t.j));
  return out;
}

std::int64_t PotentialSpec::max_q() const noexcept {
  std::int64_t out = 0;
  for (const auto& t : terms_) out = std::max(out, t.q);
  return out;
}

double PotentialSpec::gradient_bound(const StripGeometry& geom) const {
  double out = 0.0;
  for (const auto& t : terms_) {
    out += std::abs(t.coeff) * kPi *
           (static_cast<double>(std::abs(t.j)) / geom.half_period() + static_cast<double>(t.q) / geom.width());
  }
  return out;
}

double PotentialSpec::value(const StripGeometry& geom, double x1, double x2) const {
  double out = 0.0;
  for (const auto& t : terms_) {
    const double phase = kPi * static_cast<double>(t.j) * x1 / geom.half_period();
    const double re = t.coeff.real() * std::cos(phase) - t.coeff.imag() * std::sin(phase);
    out += re * std::cos(kPi * static_cast<double>(t.q) * x2 / geom.width());
  }
  return out;
}

PotentialSpec PotentialSpec::shifted(double c) const { return *this + constant(c); }

PotentialSpec operator+(const PotentialSpec& a, const PotentialSpec& b) {
  std::vector<PotentialTerm> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return PotentialSpec(std::move(all));
}

PotentialFile parse_potential(std::istream& in) {
  PotentialFile out;
  bool have_header = false;
  std::vector<PotentialTerm> terms;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    const auto where = " on line " + std::to_string(line_no);
    if (!have_header) {
      std::string second;
      fields >> second;
      double T = 0.0, d = 0.0;
      bool got_T = false, got_d = false;
      for (const auto& tok : {first, second}) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw PreconditionError("expected header `T=... d=...`" + where);
        const auto key = tok.substr(0, eq);
        double val = 0.0;
        try {
          std::size_t used = 0;
          val = std::stod(tok.substr(eq + 1), &used);
          if (used != tok.size() - eq - 1) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
          throw PreconditionError("malformed header value `" + tok + "`" + where);
        }
        if (key == "T") {
          T = val;
          got_T = true;
        } else if (key == "d") {
          d = val;
          got_d = true;
        } else {
          throw PreconditionError("unknown header key `" + key + "`" + where);
        }
      }
      std::string extra;
      if (!got_T || !got_d || (fields >> extra)) throw PreconditionError("expected header `T=... d=...`" + where);
      const StripGeometry check(d, T);
      out.half_period = check.half_period();
      out.width = check.width();
      have_header = true;
      continue;
    }
    std::istringstream record(line);
    PotentialTerm t;
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(record >> t.j >> t.q >> re >> im) || (record >> extra)) {
      throw PreconditionError("expected record `j q re im`" + where);
    }
    t.coeff = {re, im};
    terms.push_back(t);
  }
  if (!have_header) throw PreconditionError("potential file has no `T=... d=...` header");
  out.potential = PotentialSpec(std::move(terms));
  return out;
}

PotentialFile read_potential_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open potential file " + path);
  return parse_potential(in);
}

double transverse_weight(std::int64_t m_prime, std::int64_t m, std::int64_t q) {
  double w = 0.0;
  if (std::abs(m - m_prime) == q) w += q == 0 ? 2.0 : 1.0;
  if (m + m_prime == q) w -= 1.0;
  return 0.5 * w;
}

std::vector<Mode> galerkin_basis(std::int64_t n_max, std::int64_t m_max) {
  if (n_max < 0 || m_max < 1) throw PreconditionError("truncation needs n_max >= 0 and m_max >= 1");
  const auto size = (2 * n_max + 1) * m_max;
  if (size > kMaxBasisSize) {
    throw PreconditionError("basis size " + std::to_string(size) + " exceeds the ceiling " +
                            std::to_string(kMaxBasisSize));
  }
  std::vector<Mode> basis;
  basis.reserve(static_cast<std::size_t>(size));
  for (std::int64_t n = -n_max; n <= n_max; ++n) {
    for (std::int64_t m = 1; m <= m_max; ++m) basis.push_back({n, m});
  }
  return basis;
}

HermitianMatrix assemble(const StripGeometry& geom, double tau, const PotentialSpec& potential,
                         std::span<const Mode> basis) {
  const auto size = static_cast<Eigen::Index>(basis.size());
  if (size > kMaxBasisSize) {
    throw PreconditionError("basis size " + std::to_string(size) + " exceeds the ceiling " +
                            std::to_string(kMaxBasisSize));
  }
  if (!std::isfinite(tau)) throw PreconditionError("tau must be finite");
  const double long_scale = geom.energy_scale();
  const double cross_scale = kPi * kPi / (geom.width() * geom.width());
  HermitianMatrix h = HermitianMatrix::Zero(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    const Mode& row = basis[static_cast<std::size_t>(a)];
    if (row.m < 1) throw PreconditionError("basis modes need m >= 1");
    const double s = tau + static_cast<double>(row.n);
    const double mm = static_cast<double>(row.m);
    h(a, a) = long_scale * s * s + cross_scale * mm * mm;
  }
  for (const auto& t : potential.terms()) {
    for (Eigen::Index a = 0; a < size; ++a) {
      const Mode& row = basis[static_cast<std::size_t>(a)];
      for (Eigen::Index b = 0; b < size; ++b) {
        const Mode& col = basis[static_cast<std::size_t>(b)];
        if (row.n - col.n != t.j) continue;
        const double w = transverse_weight(row.m, col.m, t.q);
        if (w != 0.0) h(a, b) += t.coeff * w;
      }
    }
  }
  return h;
}

HermitianMatrix assemble(const StripGeometry& geom, double tau, const PotentialSpec& potential,
                         std::int64_t n_max, std::int64_t m_max) {
  const auto basis = galerkin_basis(n_max, m_max);
  return assemble(geom, tau, potential, basis);
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw PreconditionError("matrix must be square");
  if (matrix.size() == 0) return {};
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance * scale) {
    throw PreconditionError("matrix is not Hermitian: max |H - H*| = " + num(asym));
  }
  const Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConsistencyError("Hermitian eigensolver did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

BandTable band_functions(const StripGeometry& geom, const PotentialSpec& potential,
                         std::span<const double> tau_grid, std::int64_t k_max, Truncation truncation,
                         const BandOptions& options) {
  if (k_max < 1) throw PreconditionError("k_max must be >= 1");
  const auto basis = galerkin_basis(truncation.n_max, truncation.m_max);
  if (static_cast<std::int64_t>(basis.size()) < k_max) {
    throw PreconditionError("basis of size " + std::to_string(basis.size()) + " cannot resolve " +
                            std::to_string(k_max) + " bands");
  }
  std::vector<Mode> bigger;
  if (options.check_gate) {
    bigger = galerkin_basis(truncation.n_max + options.gate_step, truncation.m_max + options.gate_step);
  }

  BandTable table;
  table.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  table.truncation = truncation;
  table.gate_checked = options.check_gate;
  table.energies.resize(static_cast<Eigen::Index>(tau_grid.size()), k_max);
  std::vector<double> drift(tau_grid.size(), 0.0);

  parallel_for(tau_grid.size(), options.workers, [&](std::size_t i) {
    const auto values = hermitian_eigenvalues(assemble(geom, tau_grid[i], potential, basis));
    for (std::int64_t k = 0; k < k_max; ++k) {
      table.energies(static_cast<Eigen::Index>(i), k) = values[static_cast<std::size_t>(k)];
    }
    if (options.check_gate) {
      const auto refined = hermitian_eigenvalues(assemble(geom, tau_grid[i], potential, bigger));
      for (std::int64_t k = 0; k < k_max; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        drift[i] = std::max(drift[i], std::abs(refined[ks] - values[ks]));
      }
    }
  });
  table.gate_drift = drift.empty() ? 0.0 : *std::max_element(drift.begin(), drift.end());
  if (options.check_gate && !(table.gate_drift < options.gate_tolerance)) {
    throw ConvergenceError("truncation (" + std::to_string(truncation.n_max) + ", " +
                               std::to_string(truncation.m_max) + ") not converged: enlarging by " +
                               std::to_string(options.gate_step) + " moves an eigenvalue by " + num(table.gate_drift),
                           table.gate_drift);
  }
  return table;
}

BandTable lattice_band_table(const StripGeometry& geom, std::span<const double> tau_grid, std::int64_t k_max) {
  if (k_max < 1) throw PreconditionError("k_max must be >= 1");
  BandTable table;
  table.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  table.energies.resize(static_cast<Eigen::Index>(tau_grid.size()), k_max);
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    const auto values = lowest_energies(geom, tau_grid[i], k_max);
    for (std::int64_t k = 0; k < k_max; ++k) {
      table.energies(static_cast<Eigen::Index>(i), k) = values[static_cast<std::size_t>(k)];
    }
  }
  return table;
}

OmegaEnclosure omega_bounds(const StripGeometry& geom, const PotentialSpec& potential, std::int64_t grid) {
  if (grid < 1) throw PreconditionError("grid size must be >= 1");
  const double T = geom.half_period();
  const double d = geom.width();
  OmegaEnclosure out;
  out.grid_min = std::numeric_limits<double>::infinity();
  out.grid_max = -std::numeric_limits<double>::infinity();
  const auto g = static_cast<double>(grid);
  for (std::int64_t a = 0; a < grid; ++a) {
    const double x1 = -T + 2.0 * T * static_cast<double>(a) / g;
    for (std::int64_t b = 0; b <= grid; ++b) {
      const double v = potential.value(geom, x1, d * static_cast<double>(b) / g);
      out.grid_min = std::min(out.grid_min, v);
      out.grid_max = std::max(out.grid_max, v);
    }
  }
  out.inflation = potential.gradient_bound(geom) * std::hypot(2.0 * T, d) / g;
  out.bounds = {out.grid_min - out.inflation, out.grid_max + out.inflation};
  return out;
}

EnclosureVerdict verify_enclosure(const BandTable& bands, const BandTable& bands0, const PerturbBounds& bounds,
                                  double tolerance) {
  bounds.validate();
  if (bands.tau_grid != bands0.tau_grid || bands.energies.rows() != bands0.energies.rows() ||
      bands.energies.cols() != bands0.energies.cols()) {
    throw PreconditionError("band tables use different tau grids or band counts");
  }
  EnclosureVerdict out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < bands.energies.rows(); ++i) {
    for (Eigen::Index k = 0; k < bands.energies.cols(); ++k) {
      const double e = bands.energies(i, k);
      const double e0 = bands0.energies(i, k);
      const double margin = std::min(e - (e0 + bounds.omega_minus), (e0 + bounds.omega_plus) - e);
      if (margin < out.worst_margin) {
        out.worst_margin = margin;
        out.worst_tau_index = static_cast<std::size_t>(i);
        out.worst_k = k + 1;
      }
    }
  }
  if (bands.energies.size() == 0) out.worst_margin = 0.0;
  out.holds = out.worst_margin >= -tolerance;
  return out;
}

}  // namespace stripgap
