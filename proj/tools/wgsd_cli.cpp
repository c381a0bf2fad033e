// wgsd: convergence tables and viscosity sweeps for the coupled
// Stokes-Darcy weak Galerkin solver.

#include <iostream>

#include <CLI11.hpp>

#include "wgsd/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Weak Galerkin Stokes-Darcy solver: convergence tables and viscosity sweeps"};
  cli.set_config("--config", "", "Read options from a TOML/INI key-value file; flags override it");

  wgsd::RunConfig cfg;
  cli.add_option("--example", cfg.example, "Manufactured solution")
      ->check(CLI::IsMember({"example1", "example2"}))
      ->capture_default_str();
  cli.add_option("--k", cfg.k, "Polynomial degree")->check(CLI::IsMember({1, 2}))->capture_default_str();
  cli.add_option("--n", cfg.ns, "Mesh sizes, comma separated")->delimiter(',')->capture_default_str();
  cli.add_option("--mu", cfg.mus, "Viscosities, comma separated")->delimiter(',')->capture_default_str();
  cli.add_option("--kappa", cfg.kappa, "Isotropic permeability")->capture_default_str();
  cli.add_option("--alpha", cfg.alpha, "Slip coefficient")->capture_default_str();
  cli.add_option("--algorithm", cfg.algorithm, "robust, standard or both")
      ->check(CLI::IsMember({"robust", "standard", "both"}))
      ->capture_default_str();
  cli.add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  cli.add_option("--sweep-mu", cfg.sweep_mus, "Viscosity sweep on a fixed mesh, comma separated")->delimiter(',');
  cli.add_option("--fixed-n", cfg.fixed_n, "Mesh of the sweep (default: largest --n)");
  cli.add_flag("--dump-system", cfg.dump_system, "Write each reduced system in MatrixMarket format");
  cli.add_flag("--dump-mesh", cfg.dump_mesh, "Write each mesh as plain text");
  cli.add_option("--jobs", cfg.jobs, "Worker threads (0: all cores)")->capture_default_str();

  std::string actual, expected;
  double error_tol = 0.01, order_tol = 0.05;
  CLI::App* cmp = cli.add_subcommand("compare", "Compare two table CSVs cell by cell");
  cmp->add_option("actual", actual, "Generated table")->required();
  cmp->add_option("expected", expected, "Reference table")->required();
  cmp->add_option("--error-tol", error_tol, "Relative tolerance on error columns")->capture_default_str();
  cmp->add_option("--order-tol", order_tol, "Absolute tolerance on order columns")->capture_default_str();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? wgsd::kExitOk : wgsd::kExitUsage;
  }

  if (*cmp) return wgsd::compare(actual, expected, error_tol, order_tol, std::cout);
  return wgsd::run(cfg, std::cout);
}
