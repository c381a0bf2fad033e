#include "wgsd/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wgsd {

namespace {

constexpr const char* kErrorNames[6] = {"err_energy_s", "err_l2_s", "err_p_s",
                                        "err_energy_d", "err_l2_d", "err_p_d"};

std::string fmt_error(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6E", v);
  return buf;
}

std::string fmt_order(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fmt_mu(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_config_line(const nlohmann::json& config, std::ostream& os) { os << "# config: " << config.dump() << '\n'; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

const std::vector<std::string>& table_columns() {
  static const std::vector<std::string> cols = {"n",        "err_energy_s", "order", "err_l2_s", "order",
                                                "err_p_s",  "order",        "err_energy_d", "order",
                                                "err_l2_d", "order",        "err_p_d",      "order"};
  return cols;
}

void write_table_csv(const ConvergenceTable& table, const nlohmann::json& config, std::ostream& os) {
  write_config_line(config, os);
  const auto& cols = table_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto e = table.rows[r].columns();
    os << table.rows[r].n;
    for (int c = 0; c < 6; ++c) os << ',' << fmt_error(e[c]) << ',' << fmt_order(table.orders[r][c]);
    os << '\n';
  }
}

void write_sweep_csv(const std::vector<ErrorReport>& reports, const nlohmann::json& config, std::ostream& os) {
  write_config_line(config, os);
  os << "mu,algorithm,n";
  for (const char* name : kErrorNames) os << ',' << name;
  os << '\n';
  for (const ErrorReport& r : reports) {
    os << fmt_mu(r.mu) << ',' << to_string(r.algorithm) << ',' << r.n;
    for (double v : r.columns()) os << ',' << fmt_error(v);
    os << '\n';
  }
}

nlohmann::json to_json(const ErrorReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["mu"] = r.mu;
  j["algorithm"] = to_string(r.algorithm);
  const auto e = r.columns();
  for (int c = 0; c < 6; ++c) j[kErrorNames[c]] = e[c];
  j["relative_residual"] = r.relative_residual;
  j["divergence_defect"] = r.divergence_defect;
  j["source_norm"] = r.source_norm;
  j["velocity_norm"] = r.velocity_norm;
  j["unknowns"] = r.unknowns;
  j["seconds"] = r.seconds;
  return j;
}

nlohmann::json run_record(const ConvergenceTable& table, const nlohmann::json& config) {
  nlohmann::json j;
  j["config"] = config;
  j["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    nlohmann::json row = to_json(table.rows[r]);
    nlohmann::json orders = nlohmann::json::object();
    for (int c = 0; c < 6; ++c) {
      const double o = table.orders[r][c];
      orders[kErrorNames[c]] = std::isfinite(o) ? nlohmann::json(o) : nlohmann::json(nullptr);
    }
    row["orders"] = orders;
    j["rows"].push_back(row);
  }
  return j;
}

nlohmann::json sweep_record(const std::vector<ErrorReport>& reports, const nlohmann::json& config) {
  nlohmann::json j;
  j["config"] = config;
  j["rows"] = nlohmann::json::array();
  for (const ErrorReport& r : reports) j["rows"].push_back(to_json(r));
  return j;
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto cells = split(s);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                               " cells, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      if (c.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size()) throw std::runtime_error("line " + std::to_string(lineno) + ": bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw std::runtime_error("CSV has no header");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return read_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Comparison compare_tables(const CsvTable& actual, const CsvTable& expected, double error_tol, double order_tol) {
  if (actual.header != expected.header) throw std::invalid_argument("table headers differ");
  if (actual.rows.size() != expected.rows.size())
    throw std::invalid_argument("row counts differ: " + std::to_string(actual.rows.size()) + " vs " +
                                std::to_string(expected.rows.size()));
  Comparison cmp;
  for (std::size_t r = 0; r < actual.rows.size(); ++r) {
    for (std::size_t c = 0; c < actual.header.size(); ++c) {
      const std::string& name = actual.header[c];
      const double a = actual.rows[r][c];
      const double e = expected.rows[r][c];
      if (std::isnan(e)) continue;
      CellDeviation cell{r, name, a, e, std::numeric_limits<double>::infinity()};
      bool ok = false;
      if (std::isnan(a)) {
        ok = false;
      } else if (name == "n") {
        cell.deviation = std::abs(a - e);
        ok = a == e;
      } else if (name == "order") {
        cell.deviation = std::abs(a - e);
        cmp.max_order_deviation = std::max(cmp.max_order_deviation, cell.deviation);
        ok = cell.deviation <= order_tol;
      } else {
        const double scale = std::max(std::abs(a), std::abs(e));
        cell.deviation = scale > 0.0 ? std::abs(a - e) / std::abs(e != 0.0 ? e : scale) : 0.0;
        cmp.max_error_deviation = std::max(cmp.max_error_deviation, cell.deviation);
        ok = cell.deviation <= error_tol;
      }
      if (!ok) cmp.failures.push_back(cell);
    }
  }
  return cmp;
}

}  // namespace wgsd
