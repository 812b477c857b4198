#pragma once

// Verification suites behind the command-line front end. Each suite adds
// pass/fail checks and tables to a Report; proven statements are hard
// checks, conjectures are soft.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaussbalance/json_io.hpp"
#include "gaussbalance/report.hpp"

namespace gaussbalance {

enum class Command {
  verify_cone,
  verify_planar,
  verify_claims,
  verify_lattice,
  verify_balancing,
  counterexample,
  bounds_table,
  all,
};

enum class Format { csv, json };

struct Tolerances {
  double endpoint = 1e-2;      // cone measure limits at the grid ends
  double derivative = 1e-5;    // closed form vs central difference, relative
  double convexity = 1e-9;     // midpoint convexity slack
  double steiner = 1e-8;       // allowed measure decrease under symmetrization
  double slice = 1e-9;         // slice preservation under symmetrization
  double ehrhard = 1e-4;       // symmetrized vs direct measure
  double concavity = 1e-9;     // midpoint concavity slack of Ehrhard profiles
  double lattice_exact = 2e-2; // covering radii of Z^2 against l_p balls
  double lattice_3d = 5e-2;    // covering radius of Z^3
  double lattice = 3e-2;       // slabs, certificates, alpha <= beta, tensorization
  double balance = 1e-6;       // counterexample balancing certificate
  double bounds = 1e-12;       // closed-form identities
  double limit = 1e-6;         // f_n limit at n = 40
};

/// Sets the tolerance called `key` (a Tolerances field name). Throws
/// std::invalid_argument for unknown keys or non-positive values.
void set_tolerance(Tolerances& tol, const std::string& key, double value);

struct RunConfig {
  Command command = Command::all;
  std::vector<double> p_list;  // empty: each suite's defaults
  int grid = 200;              // angles in the cone sweep
  int lattice_grid = 64;       // covering-radius grid per generator
  int planar_regions = 1000;
  int steiner_cones = 100;
  int random_instances = 100;  // alpha <= beta suite
  int tensor_instances = 20;
  std::uint64_t seed = 42;
  Tolerances tol;
  std::string out;             // empty: standard output
  Format format = Format::csv;
};

Command parse_command(const std::string& name);
std::string to_string(Command command);
Format parse_format(const std::string& name);

/// Overlays the fields present in `doc` onto `base`. Recognized keys:
/// command, p, grid, lattice_grid, planar_regions, steiner_cones,
/// random_instances, tensor_instances, seed, tolerances (object), out, format.
RunConfig config_from_json(const Json& doc, RunConfig base = {});

/// Runs the suites selected by the command.
Report build_report(const RunConfig& config);

/// Builds the report and writes it to config.out (or `fallback`). Returns 0
/// iff every hard check passed, 1 otherwise.
int run(const RunConfig& config, std::ostream& fallback);

}  // namespace gaussbalance
