#pragma once

#include <vector>

#include "cdmacap/saddle_capacity.hpp"
#include "cdmacap/special_functions.hpp"

// Link between the slicer margin kappa and an AWGN operating point: a
// single-user BER target at a given Eb/N0 fixes kappa, and the capacity
// surface then gives the achievable rate at that reliability.

namespace cdmacap {

// 10^(db/10)
double ebn0_linear(double ebn0_db);

// Single-sided slip probability Q(kappa sqrt(2 Eb/N0)).  two_sided doubles
// it (clipped at 1) for the symmetric |noise| > margin event; the tables
// use the single-sided convention.
Probability ber_from_threshold(double kappa, double ebn0_db,
                               bool two_sided = false);

// Margin that meets the target BER: Qinv(ber)/sqrt(2 Eb/N0).  Requires
// 0 < ber < 1/2 (at 1/2 the margin collapses to zero).
double threshold_from_ber(Probability ber, double ebn0_db);

struct OutagePoint {
  double ebn0_db = 0.0;
  double kappa = 0.0;
  double ber = 0.0;
  double rate_bits = 0.0;
  bool clamped = false;
  bool converged = true;
};

// Rate/BER trade-off along a kappa grid at fixed load and Eb/N0, rows in
// grid order; non-converged saddle points are flagged, not fatal.
std::vector<OutagePoint> outage_curve(double beta, double ebn0_db,
                                      const std::vector<double>& kappas,
                                      double tol = 1e-12, int max_iter = 10000);

// Achievable bits/user at the margin implied by (ber, Eb/N0).  Propagates
// range errors when the implied kappa leaves the supported box.
double rate_at_ber(double beta, double ebn0_db, Probability ber,
                   double tol = 1e-12, int max_iter = 10000);

}  // namespace cdmacap
