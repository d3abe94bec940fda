#include "stripgap/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "stripgap/core_spectrum.hpp"
#include "stripgap/fourier.hpp"
#include "stripgap/galerkin.hpp"
#include "stripgap/gap_analysis.hpp"
#include "stripgap/parallel.hpp"
#include "stripgap/phi_series.hpp"

namespace stripgap::cli {
namespace {

using Row = std::vector<std::string>;

const std::vector<std::string> kGeometryKeys = {"xi", "T", "d"};

std::vector<std::string> with_geometry(std::initializer_list<std::string> extra) {
  std::vector<std::string> keys = kGeometryKeys;
  keys.insert(keys.end(), extra);
  return keys;
}

const std::map<std::string, std::vector<std::string>>& key_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"constants", {}},
      {"count", with_geometry({"ell", "tau", "form"})},
      {"bands", with_geometry({"ell", "k", "grid"})},
      {"fourier", with_geometry({"ell", "p"})},
      {"phi", with_geometry({"ell", "p", "tol", "n"})},
      {"phi-sup", with_geometry({"ell", "tol", "c1"})},
      {"check-thm23", with_geometry({"tol", "c1", "ell-from", "ell-to", "ell-steps"})},
      {"gaps", with_geometry({"omega-minus", "omega-plus", "omega-l", "potential", "omega-grid", "ell", "grid",
                              "c0", "gamma", "ell0", "low-grid"})},
      {"galerkin", with_geometry({"potential", "v-cos", "k", "n-max", "m-max", "grid", "omega-grid"})},
      {"sweep", {"param", "from", "to", "steps", "inner"}},
  };
  return table;
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string str(std::int64_t x) { return std::to_string(x); }
std::string str(bool b) { return b ? "true" : "false"; }

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& values) : values_(values) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw PreconditionError("missing required option --" + key);
    return it->second;
  }

  double number(const std::string& key) const {
    const std::string& s = text(key);
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x)) {
      throw PreconditionError("option --" + key + " expects a finite number, got `" + s + "`");
    }
    return x;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const std::string& key) const {
    const std::string& s = text(key);
    std::int64_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw PreconditionError("option --" + key + " expects an integer, got `" + s + "`");
    }
    return x;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::optional<StripGeometry> geometry() const {
    const bool x = has("xi"), t = has("T"), w = has("d");
    if (x && t && w) {
      const StripGeometry g(number("d"), number("T"));
      if (std::abs(g.xi() - number("xi")) > 1e-12 * std::abs(g.xi())) {
        throw PreconditionError("--xi disagrees with --T / --d; give any two of them");
      }
      return g;
    }
    if (x && t) return StripGeometry::from_ratio(number("xi"), number("T"));
    if (x && w) {
      const double xi = number("xi");
      return StripGeometry(number("d"), xi * number("d"));
    }
    if (t && w) return StripGeometry(number("d"), number("T"));
    if (x) return StripGeometry::from_ratio(number("xi"));
    if (t || w) throw PreconditionError("give two of --xi, --T, --d (or --xi alone for T = 1)");
    return std::nullopt;
  }

  StripGeometry required_geometry() const {
    auto g = geometry();
    if (!g) throw PreconditionError("missing geometry: give two of --xi, --T, --d");
    return *g;
  }

 private:
  const std::map<std::string, std::string>& values_;
};

double positive(double x, const char* what) {
  if (!(x > 0.0)) throw PreconditionError(std::string(what) + " must be positive");
  return x;
}

std::int64_t at_least(std::int64_t x, std::int64_t lo, const char* what) {
  if (x < lo) throw PreconditionError(std::string(what) + " must be >= " + std::to_string(lo));
  return x;
}

RunResult cmd_constants(const Params&) {
  const auto& c = constants();
  RunResult r;
  r.table.columns = {"name", "value", "error"};
  const auto add = [&](const char* name, Enclosed e) {
    r.table.rows.push_back({name, format_number(e.value), format_number(e.error)});
  };
  add("c2", c.c2);
  add("c1", c.c1);
  add("xi0", c.xi0);
  add("zeta32", c.zeta32);
  add("beta_qh", c.beta_qh);
  r.table.rows.push_back({"cubic_residual", format_number(c.cubic_residual), ""});
  r.table.rows.push_back({"minmax_grid", format_number(c.minmax_grid), format_number(std::abs(c.minmax_grid - c.c1.value))});
  for (const auto& row : r.table.rows) r.table.summary.emplace_back(row[0], row[1]);
  return r;
}

RunResult cmd_count(const Params& p) {
  const auto geom = p.required_geometry();
  const double ell = p.number("ell");
  const QuasiMomentum tau(p.number("tau", 0.0));
  const std::string form = p.has("form") ? p.text("form") : "lattice";
  if (form != "lattice" && form != "rows") throw PreconditionError("--form must be lattice or rows");
  const auto n = counting(geom, ell, tau, form == "rows" ? CountingForm::rows : CountingForm::lattice);
  RunResult r;
  r.table.columns = {"xi", "ell", "tau", "form", "count"};
  r.table.rows.push_back({format_number(geom.xi()), format_number(ell), format_number(tau.value()), form, str(n)});
  return r;
}

RunResult cmd_bands(const Params& p) {
  const auto geom = p.required_geometry();
  const auto grid = at_least(p.integer("grid", 101), 3, "--grid");
  RunResult r;
  r.table.columns = {"k", "eta0", "theta0", "tau_argmin", "tau_argmax"};
  const auto add = [&](std::int64_t k, const BandEndpoints& b) {
    r.table.rows.push_back({str(k), format_number(b.eta), format_number(b.theta), format_number(b.tau_argmin),
                            format_number(b.tau_argmax)});
  };
  if (p.has("k")) {
    if (p.has("ell")) throw PreconditionError("give either --k or --ell, not both");
    const auto k = at_least(p.integer("k"), 1, "--k");
    add(k, band_endpoints_unperturbed(geom, k, grid));
    return r;
  }
  const double reach = geom.energy_from_ell(p.number("ell", 10.0));
  for (std::int64_t k = 1;; ++k) {
    const auto b = band_endpoints_unperturbed(geom, k, grid);
    add(k, b);
    if (b.eta > reach) break;
  }
  return r;
}

RunResult cmd_fourier(const Params& p) {
  const auto geom = p.required_geometry();
  const double ell = p.number("ell");
  const auto harmonic = at_least(p.integer("p", 1), 0, "--p");
  const auto rec = fourier_record(geom, ell, harmonic);
  RunResult r;
  r.table.columns = {"xi", "ell", "p", "value", "exact", "residual_bound", "sup_n", "inf_n", "extremes_hold"};
  Row row{format_number(geom.xi()), format_number(ell), str(harmonic), format_number(rec.value),
          format_number(ap_exact_integral(geom, ell, harmonic)),
          rec.residual_bound ? format_number(*rec.residual_bound) : ""};
  if (harmonic >= 1) {
    const auto ext = counting_extremes_check(geom, ell, harmonic);
    row.insert(row.end(), {str(ext.sup_n), str(ext.inf_n), str(ext.holds)});
    if (!ext.holds) r.status = kConditionFailed;
  } else {
    row.insert(row.end(), {"", "", ""});
  }
  r.table.rows.push_back(std::move(row));
  return r;
}

RunResult cmd_phi(const Params& p) {
  const auto geom = p.required_geometry();
  const double ell = p.number("ell");
  const auto harmonic = at_least(p.integer("p", 1), 1, "--p");
  PhiEvaluation e;
  if (p.has("n")) {
    if (p.has("tol")) throw PreconditionError("give either --n or --tol, not both");
    e = phi_truncated(geom, ell, harmonic, at_least(p.integer("n"), 0, "--n"));
  } else {
    e = phi_p(geom, ell, harmonic, positive(p.number("tol", 1e-4), "--tol"));
  }
  RunResult r;
  r.table.columns = {"xi", "ell", "p", "value", "tail_bound", "truncation_n"};
  r.table.rows.push_back({format_number(geom.xi()), format_number(ell), str(harmonic), format_number(e.value),
                          format_number(e.tail_bound), str(e.truncation_n)});
  return r;
}

RunResult cmd_phi_sup(const Params& p, unsigned workers) {
  const auto geom = p.required_geometry();
  const double ell = p.number("ell");
  const double tol = positive(p.number("tol", 1e-4), "--tol");
  const auto s = phi_sup(geom, ell, positive(p.number("c1", kDefaultCutoffC1), "--c1"), tol, workers);
  RunResult r;
  r.table.columns = {"xi", "ell", "p_star", "value", "p_max", "cutoff_bound", "cutoff_conclusive"};
  r.table.rows.push_back({format_number(geom.xi()), format_number(ell), str(s.p_star), format_number(s.value),
                          str(s.p_max), format_number(s.cutoff_bound), str(s.cutoff_conclusive)});
  if (geom.xi() < constants().xi0.value) r.table.summary.push_back({"c0", format_number(uniform_lower_bound(geom.xi()))});
  return r;
}

RunResult cmd_thm23(const Params& p, unsigned workers) {
  const auto geom = p.required_geometry();
  const double tol = positive(p.number("tol", 1e-4), "--tol");
  const double from = p.number("ell-from", 1.0);
  const double to = p.number("ell-to", 100.0);
  const auto steps = at_least(p.integer("ell-steps", 100), 1, "--ell-steps");
  if (from > to) throw PreconditionError("--ell-from must not exceed --ell-to");
  std::vector<double> grid;
  for (std::int64_t i = 0; i < steps; ++i) {
    grid.push_back(steps == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  const auto rep = thm23_check(geom, grid, tol, positive(p.number("c1", kDefaultCutoffC1), "--c1"), workers);
  RunResult r;
  r.table.columns = {"ell", "sup", "p_star", "c0", "margin", "pass"};
  for (const auto& row : rep.rows) {
    r.table.rows.push_back({format_number(row.ell), format_number(row.sup.value), str(row.sup.p_star),
                            format_number(rep.c0), format_number(row.margin), str(row.pass)});
  }
  r.table.summary = {{"xi", format_number(rep.xi)}, {"c0", format_number(rep.c0)}, {"all_pass", str(rep.all_pass)}};
  if (!rep.all_pass) r.status = kConditionFailed;
  return r;
}

struct GeometryAndPotential {
  StripGeometry geom;
  std::optional<PotentialSpec> potential;
};

GeometryAndPotential geometry_with_potential(const Params& p) {
  auto geom = p.geometry();
  if (!p.has("potential")) {
    if (!geom) throw PreconditionError("missing geometry: give two of --xi, --T, --d");
    return {*geom, std::nullopt};
  }
  const auto file = read_potential_file(p.text("potential"));
  const StripGeometry from_file(file.width, file.half_period);
  if (geom && (std::abs(geom->width() - from_file.width()) > 1e-12 * from_file.width() ||
               std::abs(geom->half_period() - from_file.half_period()) > 1e-12 * from_file.half_period())) {
    throw PreconditionError("geometry options disagree with the potential file header");
  }
  return {from_file, file.potential};
}

RunResult cmd_gaps(const Params& p) {
  const auto [geom, potential] = geometry_with_potential(p);
  PerturbBounds bounds;
  const bool explicit_omega = p.has("omega-minus") || p.has("omega-plus");
  if (static_cast<int>(explicit_omega) + static_cast<int>(p.has("omega-l")) + static_cast<int>(potential.has_value()) > 1) {
    throw PreconditionError("give the perturbation once: --omega-minus/--omega-plus, --omega-l or --potential");
  }
  if (explicit_omega) {
    bounds = {p.number("omega-minus", 0.0), p.number("omega-plus", 0.0)};
  } else if (p.has("omega-l")) {
    bounds = {0.0, p.number("omega-l")};
  } else if (potential) {
    bounds = omega_bounds(geom, *potential, at_least(p.integer("omega-grid", 512), 1, "--omega-grid")).bounds;
  }
  bounds.validate();

  std::optional<GapParams> params;
  if (p.has("c0")) {
    params = GapParams{p.number("c0"), p.number("gamma", 0.0), p.number("ell0", 1.0)};
    params->validate();
  } else if (p.has("gamma") || p.has("ell0")) {
    throw PreconditionError("--gamma and --ell0 need --c0");
  } else if (geom.xi() < constants().xi0.value) {
    params = GapParams::small_xi(geom.xi());
  }

  const double ell_max = positive(p.number("ell", 20.0), "--ell");
  const auto grid = at_least(p.integer("grid", 101), 3, "--grid");
  GapReportOptions options;
  options.low_spectrum_grid = at_least(p.integer("low-grid", 1000), 0, "--low-grid");
  const auto bands0 = unperturbed_bands(geom, ell_max, grid);
  const auto rep = gap_report(geom, bounds, params, bands0, ell_max, options);

  RunResult r;
  r.table.columns = {"k", "lo", "hi", "overlap0", "status", "evidence"};
  for (const auto& g : rep.gaps) {
    r.table.rows.push_back({str(g.k), format_number(g.lo), format_number(g.hi), format_number(g.overlap0),
                            std::string(to_string(g.status)), std::string(to_string(g.evidence))});
  }
  auto& s = r.table.summary;
  const auto& c = rep.conditions;
  s.push_back({"xi", format_number(geom.xi())});
  s.push_back({"omega_minus", format_number(bounds.omega_minus)});
  s.push_back({"omega_plus", format_number(bounds.omega_plus)});
  if (rep.ell1) {
    s.push_back({"ell1", format_number(rep.ell1->value)});
    s.push_back({"ell1_terms", format_number(rep.ell1->ell0_term) + " " + format_number(rep.ell1->residual_term) + " " +
                                   format_number(rep.ell1->correction_term) + " " +
                                   format_number(rep.ell1->perturbation_term)});
  } else {
    s.push_back({"ell1", "unavailable (pass --c0)"});
  }
  s.push_back({"condition_small_xi", str(c.small_xi)});
  s.push_back({"condition_oscillation", str(c.oscillation_ok)});
  s.push_back({"oscillation_limit", format_number(c.oscillation_limit)});
  s.push_back({"condition_overlap", str(c.overlap_ok)});
  s.push_back({"overlap_margin", format_number(c.overlap_margin)});
  s.push_back({"condition_first_band", str(c.first_band_ok)});
  s.push_back({"ell_star", format_number(rep.star.value)});
  s.push_back({"ell_star_sandwich", str(rep.star.sandwich)});
  s.push_back({"low_spectrum",
               rep.low_spectrum_positive ? (*rep.low_spectrum_positive ? "positive" : "not positive") : "not applicable"});
  if (!c.no_gap_theorem()) r.status = kConditionFailed;
  return r;
}

RunResult cmd_galerkin(const Params& p, unsigned workers) {
  auto [geom, potential] = geometry_with_potential(p);
  if (p.has("v-cos")) {
    if (potential) throw PreconditionError("give either --potential or --v-cos, not both");
    potential = PotentialSpec::cosine(p.number("v-cos"), 1);
  }
  if (!potential) throw PreconditionError("missing potential: give --potential <file> or --v-cos <amplitude>");
  const auto k_max = at_least(p.integer("k", 4), 1, "--k");
  const Truncation trunc{at_least(p.integer("n-max", 6), 0, "--n-max"), at_least(p.integer("m-max", 6), 1, "--m-max")};
  const auto grid = at_least(p.integer("grid", 11), 1, "--grid");
  std::vector<double> taus;
  for (std::int64_t i = 1; i <= grid; ++i) taus.push_back(-0.5 + static_cast<double>(i) / static_cast<double>(grid));

  const auto omega = omega_bounds(geom, *potential, at_least(p.integer("omega-grid", 512), 1, "--omega-grid"));
  BandOptions options;
  options.workers = workers;
  const auto bands = band_functions(geom, *potential, taus, k_max, trunc, options);
  const auto bands0 = lattice_band_table(geom, taus, k_max);
  const auto verdict = verify_enclosure(bands, bands0, omega.bounds);

  RunResult r;
  r.table.columns = {"tau", "k", "energy", "energy0", "lower", "upper"};
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::int64_t k = 0; k < k_max; ++k) {
      const double e0 = bands0.energies(static_cast<Eigen::Index>(i), k);
      r.table.rows.push_back({format_number(taus[i]), str(k + 1),
                              format_number(bands.energies(static_cast<Eigen::Index>(i), k)), format_number(e0),
                              format_number(e0 + omega.bounds.omega_minus), format_number(e0 + omega.bounds.omega_plus)});
    }
  }
  r.table.summary = {{"omega_minus", format_number(omega.bounds.omega_minus)},
                     {"omega_plus", format_number(omega.bounds.omega_plus)},
                     {"omega_inflation", format_number(omega.inflation)},
                     {"gate_drift", format_number(bands.gate_drift)},
                     {"worst_margin", format_number(verdict.worst_margin)},
                     {"enclosure_holds", str(verdict.holds)}};
  if (!verdict.holds) r.status = kConditionFailed;
  return r;
}

RunResult dispatch(const RunConfig& config, unsigned workers);

RunResult cmd_sweep(const RunConfig& config) {
  const Params p(config.params);
  const std::string inner = p.text("inner");
  if (inner == "sweep" || !key_table().count(inner)) throw PreconditionError("unknown inner command `" + inner + "`");
  const std::string param = p.text("param");
  const auto& inner_keys = key_table().at(inner);
  if (std::find(inner_keys.begin(), inner_keys.end(), param) == inner_keys.end()) {
    throw PreconditionError("inner command " + inner + " has no parameter `" + param + "`");
  }
  const double from = p.number("from");
  const double to = p.number("to");
  const auto steps = at_least(p.integer("steps"), 1, "--steps");
  if (from > to) throw PreconditionError("--from must not exceed --to");

  RunConfig base;
  base.command = inner;
  for (const auto& [key, value] : config.params) {
    if (key == "param" || key == "from" || key == "to" || key == "steps" || key == "inner") continue;
    base.params[key] = value;
  }
  base.params.erase(param);

  std::vector<double> values(static_cast<std::size_t>(steps));
  for (std::int64_t i = 0; i < steps; ++i) {
    values[static_cast<std::size_t>(i)] =
        steps == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  std::vector<RunResult> results(values.size());
  parallel_for(values.size(), config.workers, [&](std::size_t i) {
    RunConfig one = base;
    one.params[param] = shortest(values[i]);
    results[i] = dispatch(one, 1);
  });

  RunResult r;
  std::vector<std::string> inner_columns;
  for (const auto& res : results) {
    if (res.status != kUsageError) {
      inner_columns = res.table.columns;
      break;
    }
  }
  r.table.columns = {param, "status"};
  r.table.columns.insert(r.table.columns.end(), inner_columns.begin(), inner_columns.end());
  r.table.columns.push_back("error");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    r.status = std::max(r.status, res.status);
    if (res.status == kUsageError) {
      Row row{format_number(values[i]), str(static_cast<std::int64_t>(res.status))};
      row.resize(2 + inner_columns.size());
      std::string error = res.error;
      std::replace(error.begin(), error.end(), ',', ';');
      row.push_back(std::move(error));
      r.table.rows.push_back(std::move(row));
      continue;
    }
    for (const auto& inner_row : res.table.rows) {
      Row row{format_number(values[i]), str(static_cast<std::int64_t>(res.status))};
      row.insert(row.end(), inner_row.begin(), inner_row.end());
      row.push_back("");
      r.table.rows.push_back(std::move(row));
    }
  }
  r.table.summary = {{"rows", str(static_cast<std::int64_t>(values.size()))}};
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const RunResult& res) { return res.status == kUsageError; });
  if (failed > 0) r.error = std::to_string(failed) + " of " + std::to_string(results.size()) + " sweep points failed";
  return r;
}

void validate_keys(const RunConfig& config) {
  const auto it = key_table().find(config.command);
  if (it == key_table().end()) throw PreconditionError("unknown command `" + config.command + "`");
  std::set<std::string> allowed(it->second.begin(), it->second.end());
  if (config.command == "sweep") {
    const auto inner = config.params.find("inner");
    if (inner != config.params.end() && key_table().count(inner->second)) {
      const auto& keys = key_table().at(inner->second);
      allowed.insert(keys.begin(), keys.end());
    }
  }
  for (const auto& [key, value] : config.params) {
    if (!allowed.count(key)) throw PreconditionError("command " + config.command + " does not accept --" + key);
  }
}

RunResult dispatch(const RunConfig& config, unsigned workers) {
  try {
    validate_keys(config);
    const Params p(config.params);
    const std::string& c = config.command;
    if (c == "constants") return cmd_constants(p);
    if (c == "count") return cmd_count(p);
    if (c == "bands") return cmd_bands(p);
    if (c == "fourier") return cmd_fourier(p);
    if (c == "phi") return cmd_phi(p);
    if (c == "phi-sup") return cmd_phi_sup(p, workers);
    if (c == "check-thm23") return cmd_thm23(p, workers);
    if (c == "gaps") return cmd_gaps(p);
    if (c == "galerkin") return cmd_galerkin(p, workers);
    RunConfig sweep = config;
    sweep.workers = workers;
    return cmd_sweep(sweep);
  } catch (const std::exception& e) {
    RunResult r;
    r.status = kUsageError;
    r.error = e.what();
    return r;
  }
}

std::string join(const Row& row, char sep) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += sep;
    out += row[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::report: return "report";
    case OutputFormat::table: return "table";
    case OutputFormat::csv: break;
  }
  return "csv";
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "report") return OutputFormat::report;
  if (text == "table") return OutputFormat::table;
  throw PreconditionError("--format must be csv, report or table");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, keys] : key_table()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& command_keys(const std::string& command) {
  const auto it = key_table().find(command);
  if (it == key_table().end()) throw PreconditionError("unknown command `" + command + "`");
  return it->second;
}

RunResult run(const RunConfig& config) { return dispatch(config, std::max(1u, config.workers)); }

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return {buf, res.ptr};
}

std::string metadata_block(const RunConfig& config) {
  std::string out = "# stripgap " + std::string(kVersion) + "\n# command: " + config.command + "\n# config:";
  for (const auto& [key, value] : config.params) out += " " + key + "=" + value;
  out += "\n# format: " + std::string(to_string(config.format)) + "\n# seed: " + std::to_string(config.seed) + "\n";
  return out;
}

RunConfig config_from_metadata(std::string_view block) {
  RunConfig config;
  std::istringstream in{std::string(block)};
  std::string line;
  const auto field = [&](std::string_view label) -> std::optional<std::string> {
    const std::string prefix = "# " + std::string(label) + ":";
    if (line.rfind(prefix, 0) != 0) return std::nullopt;
    std::string rest = line.substr(prefix.size());
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
    return rest;
  };
  while (std::getline(in, line)) {
    if (auto v = field("command")) {
      config.command = *v;
    } else if (auto v = field("config")) {
      std::istringstream pairs(*v);
      std::string token;
      while (pairs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw PreconditionError("malformed config echo token `" + token + "`");
        config.params[token.substr(0, eq)] = token.substr(eq + 1);
      }
    } else if (auto v = field("format")) {
      config.format = parse_format(*v);
    } else if (auto v = field("seed")) {
      config.seed = std::stoull(*v);
    }
  }
  if (config.command.empty()) throw PreconditionError("metadata block has no command line");
  return config;
}

std::string render(const RunConfig& config, const RunResult& result) {
  const Table& t = result.table;
  // A usage error with a table (a sweep with bad points) still prints its rows.
  const bool bare_error = result.status == kUsageError && t.columns.empty();
  std::string out;
  if (config.format == OutputFormat::csv) {
    if (bare_error) return out;
    out += join(t.columns, ',') + "\n";
    for (const auto& row : t.rows) out += join(row, ',') + "\n";
    return out;
  }
  out += metadata_block(config);
  out += "status: " + std::to_string(result.status) + "\n";
  if (bare_error) return out + "error: " + result.error + "\n";
  if (result.status == kUsageError) out += "error: " + result.error + "\n";
  for (const auto& [key, value] : t.summary) out += key + ": " + value + "\n";

  if (config.format == OutputFormat::report) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      out += "\n[" + std::to_string(i + 1) + "]\n";
      for (std::size_t c = 0; c < t.columns.size(); ++c) out += t.columns[c] + ": " + t.rows[i][c] + "\n";
    }
    return out;
  }
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    width[c] = t.columns[c].size();
    for (const auto& row : t.rows) width[c] = std::max(width[c], row[c].size());
  }
  const auto line = [&](const Row& row) {
    std::string s;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += "  ";
      s += row[c] + std::string(width[c] - row[c].size(), ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + "\n";
  };
  out += "\n" + line(t.columns);
  for (const auto& row : t.rows) out += line(row);
  return out;
}

}  // namespace stripgap::cli
