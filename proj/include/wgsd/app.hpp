#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgsd/system.hpp"

namespace wgsd {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitSolverFailure = 2,
  kExitGateFailure = 3,
  kExitInterfaceGuard = 4,
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string example = "example1";
  int k = 1;
  std::vector<int> ns{2, 4, 8, 16, 32};
  std::vector<double> mus{1.0};
  double kappa = 1.0;
  double alpha = 1.0;
  std::string algorithm = "robust";  // robust, standard or both
  std::string out_dir = ".";
  /// Non-empty switches to a viscosity sweep on the mesh `fixed_n`
  /// (defaults to the largest entry of `ns`).
  std::vector<double> sweep_mus;
  int fixed_n = 0;
  bool dump_system = false;
  bool dump_mesh = false;
  int jobs = 0;  // worker threads; 0 picks the hardware concurrency

  /// Throws UsageError naming the offending field.
  void validate() const;
  std::vector<Algorithm> algorithms() const;
  nlohmann::json to_json() const;
};

/// Runs every requested table or sweep, writes CSV and JSON files to
/// `out_dir` and returns an ExitCode. Progress and diagnostics go to `log`.
int run(const RunConfig& config, std::ostream& log);

/// Compares two table CSVs cell by cell; kExitGateFailure when any cell
/// is out of tolerance, kExitUsage when the files cannot be compared.
int compare(const std::string& actual_csv, const std::string& expected_csv, double error_tol, double order_tol,
            std::ostream& log);

}  // namespace wgsd
