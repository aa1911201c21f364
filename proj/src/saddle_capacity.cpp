#include "cdmacap/saddle_capacity.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cdmacap/special_functions.hpp"

namespace cdmacap {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string convergence_message(double last_a, double residual, int iterations) {
  std::ostringstream os;
  os << "saddle iteration did not reach tolerance after " << iterations
     << " updates (a = " << last_a << ", residual = " << residual << ")";
  return os.str();
}

std::string bracket_message(double lo, double hi, double nats_lo,
                            double nats_hi) {
  std::ostringstream os;
  os << "no zero-capacity crossing in [" << lo << ", " << hi
     << "]: nats = " << nats_lo << " and " << nats_hi << " at the endpoints";
  return os.str();
}

}  // namespace

LoadNoisePoint::LoadNoisePoint(double beta_in, double kappa_in)
    : beta(beta_in), kappa(kappa_in) {
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw std::domain_error("beta must be finite and positive");
  }
  if (!(std::isfinite(kappa) && kappa >= 0.0)) {
    throw std::domain_error("kappa must be finite and non-negative");
  }
}

ConvergenceError::ConvergenceError(double last_a_in, double residual_in,
                                   int iterations_in)
    : std::runtime_error(
          convergence_message(last_a_in, residual_in, iterations_in)),
      last_a(last_a_in),
      residual(residual_in),
      iterations(iterations_in) {}

BracketError::BracketError(double lo_in, double hi_in, double nats_lo_in,
                           double nats_hi_in)
    : std::runtime_error(bracket_message(lo_in, hi_in, nats_lo_in, nats_hi_in)),
      lo(lo_in),
      hi(hi_in),
      nats_lo(nats_lo_in),
      nats_hi(nats_hi_in) {}

void require_beta_supported(double beta) {
  if (!(beta >= kBetaMin && beta <= kBetaMax)) {
    std::ostringstream os;
    os << "beta = " << beta << " outside supported range [" << kBetaMin << ", "
       << kBetaMax << "]";
    throw std::out_of_range(os.str());
  }
}

void require_kappa_supported(double kappa) {
  if (!(kappa >= kKappaMin && kappa <= kKappaMax)) {
    std::ostringstream os;
    os << "kappa = " << kappa << " outside supported range [" << kKappaMin
       << ", " << kKappaMax << "]";
    throw std::out_of_range(os.str());
  }
}

double free_energy(double a, double b, const LoadNoisePoint& pt) {
  if (!(std::isfinite(a) && a > 0.0)) {
    throw std::domain_error("free_energy requires a > 0");
  }
  if (!std::isfinite(b)) {
    throw std::domain_error("free_energy requires finite b");
  }
  const double one_minus_b = 1.0 - b;
  const double quad =
      b - 0.5 + one_minus_b * one_minus_b / (2.0 * a) + 0.5 * std::log(a);
  const double t = (b + pt.kappa - 1.0) / std::sqrt(a * pt.beta);
  return quad / pt.beta + log_two_tail(t);
}

SaddleSolution solve_saddle(const LoadNoisePoint& pt, double tol,
                            int max_iter) {
  require_beta_supported(pt.beta);
  require_kappa_supported(pt.kappa);
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");
  if (max_iter < 1) throw std::domain_error("max_iter must be at least 1");

  const auto t_of = [&](double a) {
    return (pt.kappa - 1.0) / std::sqrt(a * pt.beta);
  };
  const auto step = [&](double a) {
    return 1.0 + std::sqrt(a * pt.beta) * hazard(t_of(a));
  };

  double a = step(1.0);
  double theta = 1.0;
  double prev_residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    const double next = step(a);
    const double residual = std::fabs(a - next);
    if (residual <= tol) {
      return SaddleSolution{a, 0.0, t_of(a), it, residual};
    }
    if (residual > prev_residual) theta *= 0.5;
    prev_residual = residual;
    a = (1.0 - theta) * a + theta * next;
  }
  throw ConvergenceError(a, std::fabs(a - step(a)), max_iter);
}

CapacityResult capacity(const LoadNoisePoint& pt, double tol, int max_iter) {
  CapacityResult out;
  out.saddle = solve_saddle(pt, tol, max_iter);
  out.nats = free_energy(out.saddle.a_star, 0.0, pt);
  out.clamped = out.nats < 0.0;
  out.bits = out.clamped ? 0.0 : out.nats / kLn2;
  return out;
}

double zero_capacity_threshold(double beta, double tol) {
  require_beta_supported(beta);
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");

  const auto nats_at = [&](double kappa) {
    return capacity(LoadNoisePoint(beta, kappa)).nats;
  };
  double lo = 1.0, hi = 2.0;
  const double nats_lo = nats_at(lo);
  const double nats_hi = nats_at(hi);
  if (!(nats_lo > 0.0 && nats_hi < 0.0)) {
    throw BracketError(lo, hi, nats_lo, nats_hi);
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (nats_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepRow> capacity_sweep(const std::vector<double>& betas,
                                     const std::vector<double>& kappas,
                                     double tol, int max_iter) {
  for (double b : betas) require_beta_supported(b);
  for (double k : kappas) require_kappa_supported(k);

  std::vector<SweepRow> rows;
  rows.reserve(betas.size() * kappas.size());
  for (double b : betas) {
    for (double k : kappas) {
      SweepRow row;
      row.beta = b;
      row.kappa = k;
      const LoadNoisePoint pt(b, k);
      try {
        row.cap = capacity(pt, tol, max_iter);
      } catch (const ConvergenceError& err) {
        row.converged = false;
        row.cap.saddle = SaddleSolution{
            err.last_a, 0.0, (k - 1.0) / std::sqrt(err.last_a * b),
            err.iterations, err.residual};
        row.cap.nats = free_energy(err.last_a, 0.0, pt);
        row.cap.clamped = row.cap.nats < 0.0;
        row.cap.bits = row.cap.clamped ? 0.0 : row.cap.nats / kLn2;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace cdmacap
