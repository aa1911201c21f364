#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdmacap/table_io.hpp"

namespace cdmacap {

struct RunConfig {
  enum class Command { analytic, kappa_sweep, simulate, outage, validate };
  Command command = Command::analytic;

  std::vector<double> beta_grid;   // analytic, kappa-sweep
  std::vector<double> kappa_grid;  // analytic, kappa-sweep, outage
  std::vector<double> ebn0_grid;   // outage

  int users = 16;                // simulate
  double beta = 0.5;             // simulate, outage
  std::string kappa_text = "0";  // simulate margin, kept as exact decimal
  int trials = 20;               // simulate
  uint64_t seed = 0;             // simulate

  double tol = 1e-12;
  int max_iter = 10000;
  int workers = 1;

  std::string output_path = "-";  // "-" writes the table to stdout
  TableFormat format = TableFormat::csv;
};

// Executes one command: writes one table, prints a one-line summary to
// `out`, warnings and errors to `err`.  Exit status: 0 success, 1 usage
// error, 2 numeric non-convergence, 3 degenerate statistics, 4 validation
// failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace cdmacap
