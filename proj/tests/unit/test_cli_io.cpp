#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stripgap/cli_io.hpp"

using namespace stripgap::cli;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "stripgap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.14159265358979) == "3.14159265359");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-2.5e-20) == "-2.5e-20");
  CHECK(format_number(1672.02192528) == "1672.02192528");
}

TEST_CASE("count command") {
  const auto r = invoke({"count", "--xi", "0.5", "--ell", "1.3", "--tau", "0"});
  CHECK(r.status == kOk);
  CHECK(r.out == "xi,ell,tau,form,count\n0.5,1.3,0,lattice,4\n");
  const auto rows = invoke({"count", "--xi", "0.5", "--ell", "1.3", "--tau", "0.25", "--form", "rows"});
  CHECK(rows.out.find(",rows,3\n") != std::string::npos);
}

TEST_CASE("constants report") {
  const auto r = invoke({"constants", "--format", "report"});
  CHECK(r.status == kOk);
  CHECK(r.out.rfind("# stripgap ", 0) == 0);
  CHECK(r.out.find("xi0: 0.10121085431\n") != std::string::npos);
}

TEST_CASE("gaps reports the failing overlap condition with status 2") {
  const auto r = invoke({"gaps", "--xi", "0.1", "--T", "1", "--omega-l", "0", "--format", "report"});
  CHECK(r.status == kConditionFailed);
  CHECK(r.out.find("condition_overlap: false") != std::string::npos);
  CHECK(r.out.find("oscillation_limit: 0.0222512694026") != std::string::npos);
  const auto ok = invoke({"gaps", "--xi", "0.03", "--omega-l", "0", "--ell", "0.5"});
  CHECK(ok.status == kOk);
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(invoke({"count", "--xi", "0.5", "--ell", "1.3", "--bogus", "1"}).status == kUsageError);
  CHECK(invoke({"count", "--xi", "0.5"}).status == kUsageError);
  CHECK(invoke({"count", "--xi", "abc", "--ell", "1"}).status == kUsageError);
  CHECK(invoke({"count", "--T", "1", "--ell", "1"}).status == kUsageError);
  CHECK(invoke({"count", "--xi", "0.5", "--T", "1", "--d", "3", "--ell", "1"}).status == kUsageError);
  CHECK(invoke({"check-thm23", "--xi", "0.2", "--ell-steps", "2"}).status == kUsageError);
  CHECK(invoke({"nonsense"}).status == kUsageError);
  CHECK(invoke({}).status == kUsageError);
  const auto r = invoke({"count", "--xi", "0.5"});
  CHECK(r.err.find("--ell") != std::string::npos);
}

TEST_CASE("geometry from any two of xi, T, d") {
  const auto a = invoke({"count", "--xi", "0.5", "--T", "2", "--ell", "1.3"});
  const auto b = invoke({"count", "--d", "4", "--T", "2", "--ell", "1.3"});
  const auto c = invoke({"count", "--xi", "0.5", "--d", "4", "--ell", "1.3"});
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("metadata round trip") {
  RunConfig config;
  config.command = "phi";
  config.params = {{"xi", "0.5"}, {"ell", "1"}, {"p", "2"}, {"tol", "0.001"}};
  config.format = OutputFormat::report;
  config.seed = 42;
  const auto back = config_from_metadata(metadata_block(config));
  CHECK(back.command == config.command);
  CHECK(back.params == config.params);
  CHECK(back.format == config.format);
  CHECK(back.seed == 42);
  CHECK(render(config, run(config)) == render(back, run(back)));
}

TEST_CASE("sweep output is ordered and worker independent") {
  const std::vector<std::string> base{"sweep", "--inner", "phi-sup", "--param", "xi", "--from", "0.02", "--to",
                                      "0.09", "--steps", "8", "--ell", "1", "--tol", "0.001", "--c1", "1"};
  auto one = base;
  one.insert(one.end(), {"--workers", "1"});
  auto many = base;
  many.insert(many.end(), {"--workers", "8"});
  const auto a = invoke(one);
  const auto b = invoke(many);
  CHECK(a.status == kOk);
  CHECK(a.out == b.out);
  CHECK(a.out == invoke(one).out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "xi,status,xi,ell,p_star,value,p_max,cutoff_bound,cutoff_conclusive,error");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 8);
}

TEST_CASE("single-step sweep matches a direct run") {
  const auto sweep = invoke({"sweep", "--inner", "count", "--param", "ell", "--from", "1.3", "--to", "1.3",
                             "--steps", "1", "--xi", "0.5"});
  const auto direct = invoke({"count", "--xi", "0.5", "--ell", "1.3"});
  CHECK(sweep.out == "ell,status,xi,ell,tau,form,count,error\n1.3,0,0.5,1.3,0,lattice,4,\n");
  CHECK(direct.out == "xi,ell,tau,form,count\n0.5,1.3,0,lattice,4\n");
}

TEST_CASE("sweep keeps going past failing rows") {
  const auto r = invoke({"sweep", "--inner", "count", "--param", "tau", "--from", "-0.5", "--to", "0.5", "--steps",
                         "3", "--xi", "0.5", "--ell", "1.3"});
  CHECK(r.status == kUsageError);
  std::istringstream lines(r.out);
  std::string header, first, second, third;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  std::getline(lines, third);
  CHECK(first.rfind("-0.5,1,", 0) == 0);
  CHECK(second == "0,0,0.5,1.3,0,lattice,4,");
  CHECK(third.rfind("0.5,0,", 0) == 0);
}

TEST_CASE("sweep rejects parameters the inner command lacks") {
  CHECK(invoke({"sweep", "--inner", "count", "--param", "p", "--from", "1", "--to", "2", "--steps", "2", "--xi",
                "0.5", "--ell", "1"})
            .status == kUsageError);
  CHECK(invoke({"sweep", "--inner", "count", "--param", "ell", "--from", "1", "--to", "2", "--steps", "2", "--xi",
                "0.5", "--p", "1"})
            .status == kUsageError);
}

TEST_CASE("galerkin command with a potential file") {
  const std::string path = "stripgap_cli_potential_test.txt";
  {
    std::ofstream f(path);
    f << "T=1 d=20\n1 0 0.1 0\n-1 0 0.1 0\n";
  }
  const auto r = invoke({"galerkin", "--potential", path, "--k", "3", "--grid", "4", "--m-max", "8",
                         "--format", "table"});
  std::remove(path.c_str());
  CHECK(r.status == kOk);
  CHECK(r.out.find("enclosure_holds: true") != std::string::npos);
  CHECK(invoke({"galerkin", "--xi", "0.5"}).status == kUsageError);
}

TEST_CASE("other commands run") {
  CHECK(invoke({"bands", "--T", "1", "--d", "1", "--k", "1"}).out.find("1,9.86960440109,12.3370055014") !=
        std::string::npos);
  CHECK(invoke({"bands", "--xi", "0.5", "--ell", "2"}).status == kOk);
  const auto f = invoke({"fourier", "--xi", "0.5", "--ell", "1.3", "--p", "1"});
  CHECK(f.out.find("-0.0448290814668") != std::string::npos);
  CHECK(f.out.find(",4,3,true") != std::string::npos);
  CHECK(invoke({"phi", "--xi", "0.5", "--ell", "1", "--n", "0"}).out.find("-0.450158158079") != std::string::npos);
  CHECK(invoke({"check-thm23", "--xi", "0.05", "--ell-steps", "3", "--tol", "0.001", "--c1", "1"}).status == kOk);
}
