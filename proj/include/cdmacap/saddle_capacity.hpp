#pragma once

#include <stdexcept>
#include <vector>

// Asymptotic per-user capacity of the random-signature hard-decision
// channel, obtained from the replica free energy at its dominant saddle.
// The saddle reduces to a one-dimensional fixed point in the variance
// parameter a; capacity in nats is the free energy there, clamped at zero.

namespace cdmacap {

// Supported operating box.  Constructors accept anything mathematically
// valid; operations below reject points outside this box with
// std::out_of_range naming the offending parameter.
inline constexpr double kBetaMin = 0.001;
inline constexpr double kBetaMax = 100.0;
inline constexpr double kKappaMin = 0.0;
inline constexpr double kKappaMax = 2.0;

// Operating point: load beta = users/chips, slicer margin kappa.
struct LoadNoisePoint {
  LoadNoisePoint(double beta, double kappa);
  double beta;
  double kappa;
};

struct SaddleSolution {
  double a_star = 0.0;
  double b_star = 0.0;  // identically 0 at the dominant saddle
  double t_star = 0.0;  // (kappa - 1) / sqrt(a_star * beta)
  int iterations = 0;
  double residual = 0.0;  // |a - (1 + sqrt(a beta) hazard(t))| at exit
};

struct CapacityResult {
  double nats = 0.0;
  double bits = 0.0;  // max(0, nats)/ln 2
  bool clamped = false;  // true iff nats < 0
  SaddleSolution saddle;
};

struct SweepRow {
  double beta = 0.0;
  double kappa = 0.0;
  CapacityResult cap;
  bool converged = true;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double last_a, double residual, int iterations);
  double last_a;
  double residual;
  int iterations;
};

class BracketError : public std::runtime_error {
 public:
  BracketError(double lo, double hi, double nats_lo, double nats_hi);
  double lo, hi;
  double nats_lo, nats_hi;
};

void require_beta_supported(double beta);
void require_kappa_supported(double kappa);

// Free energy g(a, b) at the operating point; requires a > 0, b finite.
// Capacity in nats is g at the saddle with b = 0.
double free_energy(double a, double b, const LoadNoisePoint& pt);

// Damped fixed-point iteration for a = 1 + sqrt(a beta) hazard(t(a)),
// t(a) = (kappa - 1)/sqrt(a beta), started from a = 1.  The damping factor
// halves whenever the residual fails to decrease.  Throws ConvergenceError
// (carrying the last iterate) after max_iter updates above tol.
SaddleSolution solve_saddle(const LoadNoisePoint& pt, double tol = 1e-12,
                            int max_iter = 10000);

CapacityResult capacity(const LoadNoisePoint& pt, double tol = 1e-12,
                        int max_iter = 10000);

// Smallest kappa in [1, 2] where capacity hits zero, located by bisection
// on the sign of nats to width tol.  Throws BracketError (with the
// endpoint values) when nats does not change sign over [1, 2]; that
// happens for beta large enough (~25 and above) that capacity stays
// positive even at kappa = 2.
double zero_capacity_threshold(double beta, double tol = 1e-6);

// Cartesian sweep, beta outer and kappa inner, in the given grid order.
// Non-converged points are flagged on the row (carrying the last iterate)
// instead of aborting the sweep.
std::vector<SweepRow> capacity_sweep(const std::vector<double>& betas,
                                     const std::vector<double>& kappas,
                                     double tol = 1e-12, int max_iter = 10000);

}  // namespace cdmacap
