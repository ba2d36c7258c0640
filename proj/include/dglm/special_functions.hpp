#pragma once

#include "dglm/types.hpp"

namespace dglm::sf {

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// log Beta(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a+b), a, b > 0.
double log_beta(double a, double b);

/// Digamma psi(x) for x > 0, absolute error below 1e-12.
///
/// Arguments below 10 are lifted with psi(x) = psi(x+1) - 1/x, then the
/// asymptotic expansion in 1/x^2 is summed through the x^-14 term.
double digamma(double x);

/// Trigamma psi'(x) for x > 0, same recurrence-plus-series scheme
/// (psi'(x) = psi'(x+1) + 1/x^2, series through the x^-15 term).
double trigamma(double x);

/// Logarithmic approximation psi(x) ~ log x + 1/(2x), used by
/// ApproxMode::PaperApprox.
double digamma_approx(double x);

/// Logarithmic approximation psi'(x) ~ (2x - 1)/(2x^2), used by
/// ApproxMode::PaperApprox.
double trigamma_approx(double x);

/// Mode dispatchers.
double digamma(double x, ApproxMode mode);
double trigamma(double x, ApproxMode mode);

/// int_0^inf exp(-b (y - a)^2) dy = (1/2) sqrt(pi/b) (1 + erf(a sqrt(b))),
/// for b > 0 and any real a.
double gaussian_tail_integral(double a, double b);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Inverse of P(a, .): returns x with P(a, x) = p, for p in [0, 1).
/// Bisection on a bracketed interval; deterministic across platforms.
double inverse_gamma_p(double a, double p);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double inc_beta(double a, double b, double x);

}  // namespace dglm::sf
