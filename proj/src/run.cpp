#include "cdmacap/run.hpp"

#include <ostream>
#include <sstream>

#include "cdmacap/acceptance.hpp"
#include "cdmacap/awgn_outage.hpp"
#include "cdmacap/codeword_enumeration.hpp"
#include "cdmacap/grid_spec.hpp"
#include "cdmacap/saddle_capacity.hpp"

namespace cdmacap {
namespace {

std::string shown_path(const RunConfig& cfg) {
  return cfg.output_path == "-" ? "stdout" : cfg.output_path;
}

void check_common(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (cfg.max_iter < 1) throw UsageError("--max-iter must be at least 1");
  if (cfg.workers < 1) throw UsageError("--workers must be at least 1");
}

void check_beta_grid(const std::vector<double>& grid, const char* flag) {
  if (grid.empty()) throw UsageError(std::string(flag) + " must not be empty");
  for (double b : grid) {
    if (!(b >= kBetaMin && b <= kBetaMax)) {
      std::ostringstream os;
      os << flag << " value " << b << " outside supported range [" << kBetaMin
         << ", " << kBetaMax << "]";
      throw UsageError(os.str());
    }
  }
}

void check_kappa_grid(const std::vector<double>& grid, const char* flag) {
  if (grid.empty()) throw UsageError(std::string(flag) + " must not be empty");
  for (double k : grid) {
    if (!(k >= kKappaMin && k <= kKappaMax)) {
      std::ostringstream os;
      os << flag << " value " << k << " outside supported range ["
         << kKappaMin << ", " << kKappaMax << "]";
      throw UsageError(os.str());
    }
  }
}

int run_sweep(const RunConfig& cfg, const char* name, const char* beta_flag,
              const char* kappa_flag, std::ostream& out, std::ostream& err) {
  check_beta_grid(cfg.beta_grid, beta_flag);
  check_kappa_grid(cfg.kappa_grid, kappa_flag);

  const auto rows =
      capacity_sweep(cfg.beta_grid, cfg.kappa_grid, cfg.tol, cfg.max_iter);

  Table table;
  table.columns = {"beta",          "kappa",         "a_star",
                   "t_star",        "capacity_nats", "capacity_bits",
                   "clamped",       "iterations",    "residual"};
  int failed = 0;
  for (const auto& row : rows) {
    if (!row.converged) ++failed;
    table.rows.push_back({row.beta, row.kappa, row.cap.saddle.a_star,
                          row.cap.saddle.t_star, row.cap.nats, row.cap.bits,
                          row.cap.clamped,
                          static_cast<int64_t>(row.cap.saddle.iterations),
                          row.cap.saddle.residual});
  }
  emit_table(table, cfg.format, cfg.output_path, out);
  out << name << ": " << table.rows.size() << " rows -> " << shown_path(cfg)
      << "\n";
  if (failed > 0) {
    err << "warning: " << failed << " of " << rows.size()
        << " points did not converge (residual column exceeds tol)\n";
    return 2;
  }
  return 0;
}

Table simulate_table(const EnsembleStats& stats) {
  Table table;
  table.columns = {"trial", "seed",  "users", "chips",
                   "realized_beta", "kappa", "count", "capacity_bits"};
  for (const auto& rec : stats.per_trial) {
    table.rows.push_back({static_cast<int64_t>(rec.trial),
                          std::to_string(rec.seed),
                          static_cast<int64_t>(stats.users),
                          static_cast<int64_t>(stats.chips),
                          stats.realized_beta, stats.kappa,
                          static_cast<int64_t>(rec.count), rec.bits});
  }
  return table;
}

Summary simulate_summary(const EnsembleStats& stats) {
  return Summary{{"trials", static_cast<int64_t>(stats.trials)},
                 {"zero_trials", static_cast<int64_t>(stats.zero_trials)},
                 {"mean_bits", stats.mean_bits},
                 {"std_bits", stats.std_bits}};
}

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.users < 1 || cfg.users > kMaxUsers) {
    throw UsageError("--users must lie in [1, 32]");
  }
  if (!(cfg.beta >= kBetaMin && cfg.beta <= kBetaMax)) {
    throw UsageError("--beta must lie in [0.001, 100]");
  }
  if (cfg.trials < 1) throw UsageError("--trials must be at least 1");

  NoiseThreshold kappa;
  try {
    kappa = NoiseThreshold::parse(cfg.kappa_text);
  } catch (const std::domain_error& e) {
    throw UsageError(std::string("--kappa: ") + e.what());
  }
  if (!(kappa.value() >= kKappaMin && kappa.value() <= kKappaMax)) {
    throw UsageError("--kappa must lie in [0, 2]");
  }

  const auto report = [&](const EnsembleStats& stats) {
    const Summary summary = simulate_summary(stats);
    emit_table(simulate_table(stats), cfg.format, cfg.output_path, out,
               &summary);
    out << "simulate: trials=" << stats.trials
        << " zero_trials=" << stats.zero_trials
        << " mean_bits=" << format_real(stats.mean_bits)
        << " std_bits=" << format_real(stats.std_bits) << " -> "
        << shown_path(cfg) << "\n";
  };

  try {
    report(empirical_capacity(cfg.users, cfg.beta, kappa, cfg.trials,
                              cfg.seed, cfg.workers));
    return 0;
  } catch (const DegenerateStatisticsError& degenerate) {
    // Still write everything that was measured, then fail loudly.
    report(degenerate.stats);
    err << "error: " << degenerate.what() << "\n";
    return 3;
  }
}

int run_outage(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.beta >= kBetaMin && cfg.beta <= kBetaMax)) {
    throw UsageError("--beta must lie in [0.001, 100]");
  }
  if (cfg.ebn0_grid.empty()) throw UsageError("--ebn0 must not be empty");
  check_kappa_grid(cfg.kappa_grid, "--kappa-grid");

  Table table;
  table.columns = {"ebn0_db", "kappa", "ber", "rate_bits", "clamped"};
  int failed = 0;
  for (double db : cfg.ebn0_grid) {
    for (const auto& pt :
         outage_curve(cfg.beta, db, cfg.kappa_grid, cfg.tol, cfg.max_iter)) {
      if (!pt.converged) ++failed;
      table.rows.push_back(
          {pt.ebn0_db, pt.kappa, pt.ber, pt.rate_bits, pt.clamped});
    }
  }
  emit_table(table, cfg.format, cfg.output_path, out);
  out << "outage: " << table.rows.size() << " rows -> " << shown_path(cfg)
      << "\n";
  if (failed > 0) {
    err << "warning: " << failed << " of " << table.rows.size()
        << " points did not converge\n";
    return 2;
  }
  return 0;
}

int run_validate(const RunConfig& cfg, std::ostream& out) {
  const auto results = run_acceptance(out, cfg.workers);
  int passed = 0;
  for (const auto& r : results) passed += r.pass;
  out << "validate: " << passed << "/" << results.size()
      << " criteria passed\n";
  return all_pass(results) ? 0 : 4;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_common(cfg);
    switch (cfg.command) {
      case RunConfig::Command::analytic:
        return run_sweep(cfg, "analytic", "--beta-grid", "--kappa", out, err);
      case RunConfig::Command::kappa_sweep:
        return run_sweep(cfg, "kappa-sweep", "--beta", "--kappa-grid", out,
                         err);
      case RunConfig::Command::simulate:
        return run_simulate(cfg, out, err);
      case RunConfig::Command::outage:
        return run_outage(cfg, out, err);
      case RunConfig::Command::validate:
        return run_validate(cfg, out);
    }
    throw UsageError("unknown command");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {  // domain/range violations
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {  // I/O and similar
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cdmacap
