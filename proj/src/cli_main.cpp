#include <CLI11.hpp>

#include <map>
#include <ostream>
#include <set>

#include "stripgap/cli_io.hpp"

namespace stripgap::cli {
namespace {

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"constants", "Explicit constants c2, c1, xi0, zeta(3/2), B(1/4,1/2) with error bounds"},
      {"count", "Counting function N0(ell, tau)"},
      {"bands", "Unperturbed band endpoints [eta0_k, theta0_k]"},
      {"fourier", "Fourier coefficient a_p(ell): closed form, exact integral, bounds"},
      {"phi", "Truncated phi_p(ell) with certified tail"},
      {"phi-sup", "max_p |phi_p(ell)| with cutoff bound"},
      {"check-thm23", "Uniform lower bound sup_p |phi_p| >= c0(xi) on an ell grid"},
      {"gaps", "Conditions, thresholds and gap certification for a perturbation"},
      {"galerkin", "Perturbed band functions for a trigonometric potential"},
      {"sweep", "Run a command over a parameter range, one row per value"},
  };
  return d;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral gap toolkit for periodically perturbed Dirichlet strips", "stripgap"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "report", "table"}));
  app.add_option("--seed", seed, "Seed echoed in the metadata block");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> registered;
  std::set<std::string> all_keys;
  for (const auto& name : command_names()) {
    if (name != "sweep") all_keys.insert(command_keys(name).begin(), command_keys(name).end());
  }
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, descriptions().at(name));
    sub->fallthrough();
    std::set<std::string> keys(command_keys(name).begin(), command_keys(name).end());
    if (name == "sweep") keys.insert(all_keys.begin(), all_keys.end());
    for (const auto& key : keys) {
      auto* opt = sub->add_option("--" + key, values[name][key]);
      registered[name].emplace_back(key, opt);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  RunConfig config;
  config.format = parse_format(format);
  config.seed = seed;
  config.workers = workers;
  for (auto* sub : app.get_subcommands()) {
    config.command = sub->get_name();
    for (const auto& [key, opt] : registered[config.command]) {
      if (opt->count() > 0) config.params[key] = values[config.command][key];
    }
  }
  const RunResult result = run(config);
  out << render(config, result);
  if (result.status == kUsageError) err << "error: " << result.error << "\n";
  return result.status;
}

}  // namespace stripgap::cli
