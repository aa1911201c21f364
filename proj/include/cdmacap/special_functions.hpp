#pragma once

// Gaussian tail utilities: Q(x) = P(Z > x) for standard normal Z, its
// inverse, the hazard ratio phi(x)/Q(x), and log(2 Q(x)) evaluated in forms
// that stay accurate far into the tails.  All entry points reject
// non-finite arguments with std::domain_error.

namespace cdmacap {

// Value constrained to [0, 1]; the constructor rejects anything else,
// including NaN.
class Probability {
 public:
  explicit Probability(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// Upper tail Q(x) = 1/2 erfc(x / sqrt(2)).  Relative accuracy ~1e-15 across
// the representable range; underflows to exactly 0 beyond x ~ 37.5 where the
// true value drops below the smallest normal double.
Probability gaussian_tail(double x);

// Unique x with Q(x) = p.  Requires 0 < p < 1 strictly.
double inverse_gaussian_tail(Probability p);

// phi(t) / Q(t).  Positive, increasing, hazard(t) - t -> 0 from above as
// t -> +inf.  For t >= 0 the exp(-t^2/2) factor cancels analytically, so
// large positive t never forms a subnormal intermediate.
double hazard(double t);

// log(2 Q(t)), exact 0 at t = 0, ~ -t^2/2 for large positive t without
// underflow.
double log_two_tail(double t);

namespace detail {

// Rational Chebyshev approximations (W. J. Cody, Math. Comp. 23, 1969;
// SPECFUN CALERF with IEEE double thresholds).  erfcx(x) = exp(x^2) erfc(x).
double erf_cody(double x);
double erfc_cody(double x);
double erfcx_cody(double x);

}  // namespace detail
}  // namespace cdmacap
