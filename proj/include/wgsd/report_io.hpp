#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgsd/analysis.hpp"

namespace wgsd {

/// Column header of a convergence table CSV.
const std::vector<std::string>& table_columns();

/// Convergence table as CSV. The first line is "# config: " followed by
/// the compact JSON of `config`; orders of the first row are left blank.
void write_table_csv(const ConvergenceTable& table, const nlohmann::json& config, std::ostream& os);
/// Sweep reports as CSV: mu, algorithm, n, then the six error columns.
void write_sweep_csv(const std::vector<ErrorReport>& reports, const nlohmann::json& config, std::ostream& os);

nlohmann::json to_json(const ErrorReport& r);
/// Run record: config, per-row errors, orders, residuals and timings.
nlohmann::json run_record(const ConvergenceTable& table, const nlohmann::json& config);
nlohmann::json sweep_record(const std::vector<ErrorReport>& reports, const nlohmann::json& config);

/// Numeric CSV with a header row. Lines starting with '#' are comments;
/// blank cells read as NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Throws std::runtime_error on ragged rows or non-numeric cells.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

struct CellDeviation {
  std::size_t row = 0;
  std::string column;
  double actual = 0.0;
  double expected = 0.0;
  double deviation = 0.0;  // relative for errors, absolute for orders
};

struct Comparison {
  double max_error_deviation = 0.0;
  double max_order_deviation = 0.0;
  std::vector<CellDeviation> failures;
  bool passed() const { return failures.empty(); }
};

/// Cellwise comparison of congruent tables. Columns named "order" are
/// compared by absolute difference against `order_tol`, the "n" column
/// must agree exactly, and every other column by relative deviation
/// against `error_tol`. Cells blank in `expected` are not checked.
/// Throws std::invalid_argument if the shapes or headers differ.
Comparison compare_tables(const CsvTable& actual, const CsvTable& expected, double error_tol = 0.01,
                          double order_tol = 0.05);

}  // namespace wgsd
