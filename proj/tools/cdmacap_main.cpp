// cdmacap: asymptotic capacity curves, exact finite-size codeword counts,
// and AWGN outage tables for the hard-decision random-spreading downlink.
// Every run is reproducible: all randomness derives from --seed and output
// bytes are independent of --workers.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdmacap/grid_spec.hpp"
#include "cdmacap/run.hpp"

namespace {

std::vector<double> parse_grid_flag(const std::string& spec,
                                    const char* flag) {
  try {
    return cdmacap::parse_grid(spec);
  } catch (const cdmacap::UsageError& e) {
    throw cdmacap::UsageError(std::string(flag) + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity toolkit for the hard-decision random-spreading "
               "downlink: analytic saddle-point curves, exact codeword "
               "enumeration, and AWGN outage tables."};
  app.require_subcommand(1);

  std::string beta_grid = "0.01:10:60:log";
  std::string kappa_list = "0";
  std::string beta_list = "0.01,0.1,1";
  std::string kappa_grid = "0:1.4:71";
  std::string ebn0_list = "5,7,10";
  std::string sim_kappa = "0";
  std::string outage_kappa_grid = "0:1.1:100";
  double beta_scalar = 0.5;
  double outage_beta = 0.1;

  cdmacap::RunConfig cfg;
  std::string format = "csv";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol,
                    "Fixed-point residual tolerance (default 1e-12)");
    sub->add_option("--max-iter", cfg.max_iter,
                    "Fixed-point iteration cap (default 10000)");
    sub->add_option("--workers", cfg.workers,
                    "Worker threads; never changes results or output bytes");
    sub->add_option("-o,--output", cfg.output_path,
                    "Output file, '-' for stdout (default)");
    sub->add_option("--format", format, "Output format (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* analytic =
      app.add_subcommand("analytic", "Capacity vs load at fixed margins");
  analytic->add_option("--beta-grid", beta_grid,
                       "Load grid, start:stop:points[:lin|log] or comma list");
  analytic->add_option("--kappa", kappa_list, "Margin values, comma list");
  add_common(analytic);

  CLI::App* ksweep =
      app.add_subcommand("kappa-sweep", "Capacity vs margin at fixed loads");
  ksweep->add_option("--beta", beta_list, "Load values, comma list");
  ksweep->add_option("--kappa-grid", kappa_grid,
                     "Margin grid, start:stop:points[:lin|log]");
  add_common(ksweep);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Exact codeword counts over random code realizations");
  simulate->add_option("--users", cfg.users, "Number of users K (<= 32)")
      ->required();
  simulate->add_option("--beta", beta_scalar, "Target load K/N")->required();
  simulate->add_option("--kappa", sim_kappa,
                       "Margin as a plain decimal (exact, e.g. 0.9)");
  simulate->add_option("--trials", cfg.trials,
                       "Code realizations to average (default 20)");
  simulate->add_option("--seed", cfg.seed,
                       "Master seed; trial seeds derive from it (default 0)");
  add_common(simulate);

  CLI::App* outage = app.add_subcommand(
      "outage", "Rate/BER trade-off across margins at given Eb/N0 levels");
  outage->add_option("--beta", outage_beta, "System load");
  outage->add_option("--ebn0", ebn0_list, "Eb/N0 levels in dB, comma list");
  outage->add_option("--kappa-grid", outage_kappa_grid, "Margin grid");
  add_common(outage);

  CLI::App* validate =
      app.add_subcommand("validate", "Run the release acceptance checks");
  validate->add_option("--workers", cfg.workers,
                       "Worker threads for the enumeration checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (const char* env = std::getenv("CDMACAP_WORKERS")) {
      // Environment takes precedence over the flag.
      char* end = nullptr;
      const long value = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || value < 1) {
        throw cdmacap::UsageError(
            "CDMACAP_WORKERS must be a positive integer");
      }
      cfg.workers = static_cast<int>(value);
    }
    cfg.format = format == "json" ? cdmacap::TableFormat::json
                                  : cdmacap::TableFormat::csv;

    if (app.got_subcommand(analytic)) {
      cfg.command = cdmacap::RunConfig::Command::analytic;
      cfg.beta_grid = parse_grid_flag(beta_grid, "--beta-grid");
      cfg.kappa_grid = parse_grid_flag(kappa_list, "--kappa");
    } else if (app.got_subcommand(ksweep)) {
      cfg.command = cdmacap::RunConfig::Command::kappa_sweep;
      cfg.beta_grid = parse_grid_flag(beta_list, "--beta");
      cfg.kappa_grid = parse_grid_flag(kappa_grid, "--kappa-grid");
    } else if (app.got_subcommand(simulate)) {
      cfg.command = cdmacap::RunConfig::Command::simulate;
      cfg.beta = beta_scalar;
      cfg.kappa_text = sim_kappa;
    } else if (app.got_subcommand(outage)) {
      cfg.command = cdmacap::RunConfig::Command::outage;
      cfg.beta = outage_beta;
      cfg.ebn0_grid = parse_grid_flag(ebn0_list, "--ebn0");
      cfg.kappa_grid = parse_grid_flag(outage_kappa_grid, "--kappa-grid");
    } else {
      cfg.command = cdmacap::RunConfig::Command::validate;
    }
  } catch (const cdmacap::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  return cdmacap::run(cfg, std::cout, std::cerr);
}
