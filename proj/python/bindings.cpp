// Python bindings for the numerical core. PreconditionError surfaces as
// ValueError and ConsistencyError as RuntimeError.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stripgap/cli_io.hpp"
#include "stripgap/core_spectrum.hpp"
#include "stripgap/fourier.hpp"
#include "stripgap/galerkin.hpp"
#include "stripgap/gap_analysis.hpp"
#include "stripgap/phi_series.hpp"

namespace py = pybind11;
using namespace stripgap;

namespace {

CountingForm parse_form(const std::string& form) {
  if (form == "lattice") return CountingForm::lattice;
  if (form == "rows") return CountingForm::rows;
  throw PreconditionError("form must be 'lattice' or 'rows', got '" + form + "'");
}

PotentialSpec cosine_potential(double amplitude, std::int64_t j, std::int64_t q) {
  return amplitude == 0.0 ? PotentialSpec{} : PotentialSpec::cosine(amplitude, j, q);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Band spectra and gap certificates for periodic Schroedinger operators on a strip";

  py::class_<StripGeometry>(m, "StripGeometry")
      .def(py::init<double, double>(), py::arg("width"), py::arg("half_period"))
      .def_static("from_ratio", &StripGeometry::from_ratio, py::arg("xi"), py::arg("half_period") = 1.0)
      .def_property_readonly("width", &StripGeometry::width)
      .def_property_readonly("half_period", &StripGeometry::half_period)
      .def_property_readonly("xi", &StripGeometry::xi)
      .def_property_readonly("energy_scale", &StripGeometry::energy_scale)
      .def("__repr__", [](const StripGeometry& g) {
        return "StripGeometry(width=" + std::to_string(g.width()) +
               ", half_period=" + std::to_string(g.half_period()) + ")";
      });

  m.def(
      "mode_energy",
      [](const StripGeometry& g, double tau, std::int64_t n, std::int64_t mm) {
        return mode_energy(g, QuasiMomentum(tau), Mode{n, mm});
      },
      py::arg("geom"), py::arg("tau"), py::arg("n"), py::arg("m"));
  m.def(
      "counting",
      [](const StripGeometry& g, double ell, double tau, const std::string& form) {
        return counting(g, ell, QuasiMomentum(tau), parse_form(form));
      },
      py::arg("geom"), py::arg("ell"), py::arg("tau") = 0.0, py::arg("form") = "lattice");
  m.def("band_energy", &band_energy, py::arg("geom"), py::arg("k"), py::arg("tau"),
        py::arg("scaled_ceiling") = 1e7);
  m.def(
      "unperturbed_bands",
      [](const StripGeometry& g, double ell_max, std::int64_t grid) {
        std::vector<std::pair<double, double>> out;
        for (const auto& b : unperturbed_bands(g, ell_max, grid)) out.emplace_back(b.lo, b.hi);
        return out;
      },
      py::arg("geom"), py::arg("ell_max"), py::arg("grid") = 201, "List of (bottom, top) in energy units.");

  m.def("a0_closed", &a0_closed, py::arg("geom"), py::arg("ell"));
  m.def("ap_closed", &ap_closed, py::arg("geom"), py::arg("ell"), py::arg("p"));
  m.def("ap_exact_integral", &ap_exact_integral, py::arg("geom"), py::arg("ell"), py::arg("p"));
  m.def("s5_bound", &s5_bound, py::arg("geom"), py::arg("ell"), py::arg("p"));

  py::class_<PhiEvaluation>(m, "PhiEvaluation")
      .def_readonly("p", &PhiEvaluation::p)
      .def_readonly("ell", &PhiEvaluation::ell)
      .def_readonly("value", &PhiEvaluation::value)
      .def_readonly("tail_bound", &PhiEvaluation::tail_bound)
      .def_readonly("truncation_n", &PhiEvaluation::truncation_n);
  m.def(
      "phi_p", [](const StripGeometry& g, double ell, std::int64_t p, double tol) { return phi_p(g, ell, p, tol); },
      py::arg("geom"), py::arg("ell"), py::arg("p"), py::arg("tol"));

  py::class_<PhiSup>(m, "PhiSup")
      .def_readonly("p_star", &PhiSup::p_star)
      .def_readonly("value", &PhiSup::value)
      .def_readonly("p_max", &PhiSup::p_max)
      .def_readonly("cutoff_bound", &PhiSup::cutoff_bound)
      .def_readonly("cutoff_conclusive", &PhiSup::cutoff_conclusive);
  m.def("phi_sup", &phi_sup, py::arg("geom"), py::arg("ell"), py::arg("cutoff_c1") = kDefaultCutoffC1,
        py::arg("tol") = 1e-4, py::arg("workers") = 1u);

  m.def("constants", [] {
    const auto& c = constants();
    return py::dict(py::arg("c2") = c.c2.value, py::arg("c1") = c.c1.value, py::arg("xi0") = c.xi0.value,
                    py::arg("zeta32") = c.zeta32.value, py::arg("beta_quarter_half") = c.beta_qh.value);
  });

  py::class_<ConditionVerdicts>(m, "ConditionVerdicts")
      .def_readonly("scaled_oscillation", &ConditionVerdicts::scaled_oscillation)
      .def_readonly("small_xi", &ConditionVerdicts::small_xi)
      .def_readonly("oscillation_limit", &ConditionVerdicts::oscillation_limit)
      .def_readonly("oscillation_ok", &ConditionVerdicts::oscillation_ok)
      .def_readonly("overlap_margin", &ConditionVerdicts::overlap_margin)
      .def_readonly("overlap_ok", &ConditionVerdicts::overlap_ok)
      .def_property_readonly("no_gap_theorem", &ConditionVerdicts::no_gap_theorem);
  m.def(
      "conditions_check",
      [](const StripGeometry& g, double omega_minus, double omega_plus) {
        return conditions_check(g, PerturbBounds{omega_minus, omega_plus});
      },
      py::arg("geom"), py::arg("omega_minus") = 0.0, py::arg("omega_plus") = 0.0);
  m.def(
      "ell1_threshold",
      [](const StripGeometry& g, double c0, double gamma, double ell0, double omega_minus, double omega_plus) {
        return ell1_threshold(g, GapParams{c0, gamma, ell0}, PerturbBounds{omega_minus, omega_plus}).value;
      },
      py::arg("geom"), py::arg("c0"), py::arg("gamma") = 0.0, py::arg("ell0") = 1.0, py::arg("omega_minus") = 0.0,
      py::arg("omega_plus") = 0.0, "Energy above which no internal gaps remain.");
  m.def(
      "low_spectrum_difference",
      [](const StripGeometry& g, double ell, double omega_minus, double omega_plus) {
        return low_spectrum_no_gap(g, PerturbBounds{omega_minus, omega_plus}, ell).difference;
      },
      py::arg("geom"), py::arg("ell"), py::arg("omega_minus") = 0.0, py::arg("omega_plus") = 0.0);

  m.def(
      "galerkin_bands",
      [](const StripGeometry& g, const std::vector<double>& taus, std::int64_t k_max, double v_cos,
         std::int64_t n_max, std::int64_t m_max, unsigned workers) {
        BandOptions options;
        options.workers = workers;
        return band_functions(g, cosine_potential(v_cos, 1, 0), taus, k_max, {n_max, m_max}, options).energies;
      },
      py::arg("geom"), py::arg("taus"), py::arg("k_max"), py::arg("v_cos") = 0.0, py::arg("n_max") = 6,
      py::arg("m_max") = 6, py::arg("workers") = 1u,
      "Lowest k_max eigenvalues for V = v_cos cos(pi x1 / T), one row per tau.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"stripgap"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        const int status = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (status, stdout, stderr).");

  m.attr("__version__") = std::string(cli::kVersion);
}
