#include "cdmacap/awgn_outage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdmacap {

double ebn0_linear(double ebn0_db) {
  if (!std::isfinite(ebn0_db)) {
    throw std::domain_error("ebn0_db must be finite");
  }
  return std::pow(10.0, ebn0_db / 10.0);
}

Probability ber_from_threshold(double kappa, double ebn0_db, bool two_sided) {
  if (!(std::isfinite(kappa) && kappa >= 0.0)) {
    throw std::domain_error("kappa must be finite and non-negative");
  }
  const double arg = kappa * std::sqrt(2.0 * ebn0_linear(ebn0_db));
  const double q = gaussian_tail(arg).value();
  return Probability(two_sided ? std::min(1.0, 2.0 * q) : q);
}

double threshold_from_ber(Probability ber, double ebn0_db) {
  if (!(ber.value() > 0.0 && ber.value() < 0.5)) {
    throw std::domain_error("target ber must lie in (0, 1/2)");
  }
  return inverse_gaussian_tail(ber) / std::sqrt(2.0 * ebn0_linear(ebn0_db));
}

std::vector<OutagePoint> outage_curve(double beta, double ebn0_db,
                                      const std::vector<double>& kappas,
                                      double tol, int max_iter) {
  require_beta_supported(beta);
  for (double k : kappas) require_kappa_supported(k);

  std::vector<OutagePoint> out;
  out.reserve(kappas.size());
  for (double k : kappas) {
    OutagePoint pt;
    pt.ebn0_db = ebn0_db;
    pt.kappa = k;
    pt.ber = ber_from_threshold(k, ebn0_db).value();
    try {
      const CapacityResult cap = capacity(LoadNoisePoint(beta, k), tol,
                                          max_iter);
      pt.rate_bits = cap.bits;
      pt.clamped = cap.clamped;
    } catch (const ConvergenceError&) {
      pt.converged = false;
    }
    out.push_back(pt);
  }
  return out;
}

double rate_at_ber(double beta, double ebn0_db, Probability ber, double tol,
                   int max_iter) {
  const double kappa = threshold_from_ber(ber, ebn0_db);
  require_kappa_supported(kappa);
  return capacity(LoadNoisePoint(beta, kappa), tol, max_iter).bits;
}

}  // namespace cdmacap
