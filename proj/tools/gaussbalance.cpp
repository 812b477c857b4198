// Command-line front end: runs verification suites and writes a CSV or
// JSON report. Exit status is 0 iff every hard check passes, 1 if a hard
// check fails and 2 for usage or configuration errors.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gaussbalance/cli.hpp"
#include "gaussbalance/parallel.hpp"

int main(int argc, char** argv) {
  using namespace gaussbalance;
  CLI::App app{"Gaussian vector balancing verification suites"};
  app.set_help_all_flag("--help-all");

  std::string command = "all";
  std::vector<double> ps;
  int grid = 0;
  long long seed = -1;
  std::vector<std::string> tolerances;
  std::string out;
  std::string format;
  std::string config_path;

  app.add_option("command", command,
                 "verify-cone | verify-planar | verify-claims | verify-lattice | verify-balancing | "
                 "counterexample | bounds-table | all")
      ->check(CLI::IsMember({"verify-cone", "verify-planar", "verify-claims", "verify-lattice", "verify-balancing",
                             "counterexample", "bounds-table", "all"}));
  app.add_option("--p", ps, "probabilities in (0, 1); replaces each suite's defaults")->delimiter(',');
  app.add_option("--grid", grid, "angles in the cone sweep")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for every randomized suite")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", tolerances, "tolerance override key=value (repeatable)");
  app.add_option("--out", out, "report path (default: standard output)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "JSON config file; flags given explicitly override it")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      config = config_from_json(Json::parse(in));
    }
    if (app.count("command") > 0) config.command = parse_command(command);
    if (!ps.empty()) config.p_list = ps;
    if (grid > 0) config.grid = grid;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    for (const auto& kv : tolerances) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--tol expects key=value, got '" + kv + "'");
      std::size_t used = 0;
      const std::string value = kv.substr(eq + 1);
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("--tol value is not a number: '" + value + "'");
      set_tolerance(config.tol, kv.substr(0, eq), v);
    }
    if (!out.empty()) config.out = out;
    if (!format.empty()) config.format = parse_format(format);

    configure_threads_from_env();
    return run(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "gaussbalance: " << e.what() << '\n';
    return 2;
  }
}
