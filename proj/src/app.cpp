#include "wgsd/app.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>

#include "wgsd/analysis.hpp"
#include "wgsd/report_io.hpp"

namespace wgsd {

namespace fs = std::filesystem;

namespace {

std::string mu_tag(double mu) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", mu);
  return buf;
}

// Runs tasks on at most `jobs` threads. The first exception (in task
// order) is rethrown after all workers finish.
void run_pool(std::vector<std::function<void()>>& tasks, int jobs) {
  const std::size_t n = tasks.size();
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t count = std::min(n, jobs > 0 ? static_cast<std::size_t>(jobs) : hw);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
}

PhysicalParams params_for(const RunConfig& c, double mu) { return PhysicalParams::isotropic(mu, c.kappa, c.alpha); }

void dump_artifacts(const RunConfig& c, const ExactSolution& exact, const fs::path& dir, std::ostream& log) {
  for (int n : c.ns) {
    const Mesh mesh = build_uniform_mesh(exact.geometry, n);
    if (c.dump_mesh) {
      const fs::path p = dir / ("mesh_" + c.example + "_n" + std::to_string(n) + ".txt");
      write_file(p, [&](std::ostream& os) { write_mesh(mesh, os); });
      log << "wrote " << p.string() << '\n';
    }
    if (!c.dump_system) continue;
    const Discretization disc(mesh, c.k);
    for (Algorithm a : c.algorithms()) {
      for (double mu : c.mus) {
        const PhysicalParams params = params_for(c, mu);
        const ManufacturedData data = manufactured_data(exact, params);
        const SparseSystem sys =
            apply_constraints(assemble_matrix(disc, params), assemble_rhs(disc, data.source, a), disc.dofs(),
                              boundary_values(disc, data.boundary));
        const std::string stem = "system_" + c.example + "_k" + std::to_string(c.k) + "_" + to_string(a) + "_mu" +
                                 mu_tag(mu) + "_n" + std::to_string(n);
        write_file(dir / (stem + ".mtx"), [&](std::ostream& os) { write_matrix_market(sys.matrix, os); });
        write_file(dir / (stem + "_rhs.txt"), [&](std::ostream& os) {
          os.precision(17);
          for (Index i = 0; i < sys.rhs.size(); ++i) os << sys.rhs[i] << '\n';
        });
        log << "wrote " << (dir / (stem + ".mtx")).string() << '\n';
      }
    }
  }
}

// True when every report passes the divergence gate; failures are logged.
bool check_gate(const std::vector<ErrorReport>& reports, std::ostream& log) {
  bool ok = true;
  for (const ErrorReport& r : reports) {
    if (r.divergence_defect <= divergence_tolerance(r)) continue;
    ok = false;
    log << "divergence gate failed: " << to_string(r.algorithm) << " mu=" << r.mu << " n=" << r.n << " defect "
        << r.divergence_defect << " > " << divergence_tolerance(r) << '\n';
  }
  return ok;
}

int run_tables(const RunConfig& c, const ExactSolution& exact, const fs::path& dir, std::ostream& log) {
  const auto algs = c.algorithms();
  const std::size_t nn = c.ns.size();
  std::vector<ErrorReport> reports(algs.size() * c.mus.size() * nn);
  std::vector<std::function<void()>> tasks;
  for (std::size_t a = 0; a < algs.size(); ++a)
    for (std::size_t m = 0; m < c.mus.size(); ++m)
      for (std::size_t i = 0; i < nn; ++i) {
        ErrorReport* slot = &reports[(a * c.mus.size() + m) * nn + i];
        tasks.emplace_back([&, a, m, i, slot] {
          try {
            *slot = run_case(exact, c.k, c.ns[i], params_for(c, c.mus[m]), algs[a]).report;
          } catch (const SolverError& e) {
            throw SolverError(std::string(to_string(algs[a])) + " mu=" + mu_tag(c.mus[m]) +
                              " n=" + std::to_string(c.ns[i]) + ": " + e.what());
          }
        });
      }
  run_pool(tasks, c.jobs);

  for (std::size_t a = 0; a < algs.size(); ++a)
    for (std::size_t m = 0; m < c.mus.size(); ++m) {
      const auto first = reports.begin() + static_cast<std::ptrdiff_t>((a * c.mus.size() + m) * nn);
      const ConvergenceTable table = make_table({first, first + static_cast<std::ptrdiff_t>(nn)});
      nlohmann::json cfg = c.to_json();
      cfg["algorithm"] = to_string(algs[a]);
      cfg["mu"] = c.mus[m];
      const std::string stem =
          "table_" + c.example + "_k" + std::to_string(c.k) + "_" + to_string(algs[a]) + "_mu" + mu_tag(c.mus[m]);
      write_file(dir / (stem + ".csv"), [&](std::ostream& os) { write_table_csv(table, cfg, os); });
      write_file(dir / (stem + ".json"), [&](std::ostream& os) { os << run_record(table, cfg).dump(2) << '\n'; });
      log << "wrote " << (dir / (stem + ".csv")).string() << '\n';
    }
  return check_gate(reports, log) ? kExitOk : kExitGateFailure;
}

int run_sweep(const RunConfig& c, const ExactSolution& exact, const fs::path& dir, std::ostream& log) {
  const auto algs = c.algorithms();
  const int n = c.fixed_n > 0 ? c.fixed_n : *std::max_element(c.ns.begin(), c.ns.end());
  const Discretization disc(build_uniform_mesh(exact.geometry, n), c.k);
  std::vector<ErrorReport> reports(algs.size() * c.sweep_mus.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t a = 0; a < algs.size(); ++a)
    for (std::size_t m = 0; m < c.sweep_mus.size(); ++m) {
      ErrorReport* slot = &reports[a * c.sweep_mus.size() + m];
      tasks.emplace_back([&, a, m, slot] {
        try {
          *slot = run_case(disc, exact, params_for(c, c.sweep_mus[m]), algs[a]).report;
        } catch (const SolverError& e) {
          throw SolverError(std::string(to_string(algs[a])) + " mu=" + mu_tag(c.sweep_mus[m]) + ": " + e.what());
        }
      });
    }
  run_pool(tasks, c.jobs);

  nlohmann::json cfg = c.to_json();
  cfg["fixed_n"] = n;
  const std::string stem = "sweep_" + c.example + "_k" + std::to_string(c.k) + "_n" + std::to_string(n);
  write_file(dir / (stem + ".csv"), [&](std::ostream& os) { write_sweep_csv(reports, cfg, os); });
  write_file(dir / (stem + ".json"), [&](std::ostream& os) { os << sweep_record(reports, cfg).dump(2) << '\n'; });
  log << "wrote " << (dir / (stem + ".csv")).string() << '\n';
  return check_gate(reports, log) ? kExitOk : kExitGateFailure;
}

}  // namespace

void RunConfig::validate() const {
  if (example != "example1" && example != "example2") throw UsageError("example must be example1 or example2");
  if (k != 1 && k != 2) throw UsageError("k must be 1 or 2");
  if (ns.empty()) throw UsageError("mesh list is empty");
  for (int n : ns)
    if (n < 1) throw UsageError("mesh sizes must be positive");
  if (mus.empty()) throw UsageError("viscosity list is empty");
  for (double mu : mus)
    if (!(mu > 0.0)) throw UsageError("viscosities must be positive");
  for (double mu : sweep_mus)
    if (!(mu > 0.0)) throw UsageError("sweep viscosities must be positive");
  if (!(kappa > 0.0)) throw UsageError("kappa must be positive");
  if (!(alpha >= 0.0)) throw UsageError("alpha must be nonnegative");
  if (algorithm != "robust" && algorithm != "standard" && algorithm != "both")
    throw UsageError("algorithm must be robust, standard or both");
  if (fixed_n < 0) throw UsageError("fixed-n must be positive");
  if (jobs < 0) throw UsageError("jobs must be nonnegative");
}

std::vector<Algorithm> RunConfig::algorithms() const {
  if (algorithm == "both") return {Algorithm::Robust, Algorithm::Standard};
  return {parse_algorithm(algorithm)};
}

nlohmann::json RunConfig::to_json() const {
  return {{"example", example}, {"k", k},           {"n", ns},
          {"mu", mus},          {"kappa", kappa},   {"alpha", alpha},
          {"algorithm", algorithm}, {"sweep_mu", sweep_mus}, {"fixed_n", fixed_n}};
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    const ExactSolution exact = make_example(config.example);
    std::vector<double> all_mus = config.mus;
    all_mus.insert(all_mus.end(), config.sweep_mus.begin(), config.sweep_mus.end());
    for (double mu : all_mus) check_interface_consistency(exact, params_for(config, mu));

    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    if (config.dump_mesh || config.dump_system) dump_artifacts(config, exact, dir, log);
    return config.sweep_mus.empty() ? run_tables(config, exact, dir, log) : run_sweep(config, exact, dir, log);
  } catch (const InterfaceGuardError& e) {
    log << "interface guard: " << e.what() << '\n';
    return kExitInterfaceGuard;
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
}

int compare(const std::string& actual_csv, const std::string& expected_csv, double error_tol, double order_tol,
            std::ostream& log) {
  Comparison cmp;
  try {
    cmp = compare_tables(read_csv_file(actual_csv), read_csv_file(expected_csv), error_tol, order_tol);
  } catch (const std::exception& e) {
    log << "cannot compare: " << e.what() << '\n';
    return kExitUsage;
  }
  log << "max relative deviation (errors): " << cmp.max_error_deviation << '\n'
      << "max absolute deviation (orders): " << cmp.max_order_deviation << '\n';
  for (const CellDeviation& f : cmp.failures)
    log << "FAIL row " << f.row << " " << f.column << ": " << f.actual << " vs " << f.expected << " (deviation "
        << f.deviation << ")\n";
  log << (cmp.passed() ? "PASS" : "FAIL") << '\n';
  return cmp.passed() ? kExitOk : kExitGateFailure;
}

}  // namespace wgsd
