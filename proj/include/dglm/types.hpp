#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dglm {

/// Flavour of the closed-form posterior-moment and discount expressions.
///
/// Exact evaluates digamma/trigamma to full precision and uses the
/// derivation-consistent discount maps. PaperApprox substitutes the
/// logarithmic approximations psi(x) ~ log x + 1/(2x),
/// psi'(x) ~ (2x - 1)/(2x^2) and the published discount-map variants,
/// reproducing the closed forms as printed in the source literature.
enum class ApproxMode { Exact, PaperApprox };

/// What to do when moment matching lands outside the conjugate domain
/// (e.g. a predictor variance too large for the negative-binomial map).
enum class ClampPolicy { Error, ClampAndLog };

/// Mean and variance of the linear predictor eta = F'theta.
struct PredictorMoments {
    double f{0.0};
    double q{1.0};
};

/// Conjugate-prior parameter pair (r, s). The meaning of (r, s) is
/// family-specific; each family documents its parametrization and domain.
struct ConjugateParams {
    double r{1.0};
    double s{1.0};
};

/// Per-observation nuisance parameters. Each family reads only its own
/// field; the others are ignored.
struct ObsContext {
    double n{1.0};       ///< binomial / negative-binomial count parameter
    double V{1.0};       ///< normal / log-normal observation variance
    double alpha{1.0};   ///< gamma shape
    double nu{1.0};      ///< Weibull shape
    double lambda{1.0};  ///< inverse-Gaussian scale
};

/// Non-fatal event recorded during a run (clamped covariance eigenvalue,
/// clamped conjugate domain, truncation cap, ...). t is the 1-based step
/// index, or -1 when the event is not tied to a step.
struct Warning {
    long long t{-1};
    std::string message;
};

/// Invalid run configuration (bad flag value, inconsistent model spec).
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-support input data.
class data_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: conjugate-domain violation under ClampPolicy::Error,
/// covariance eigenvalue below tolerance, divergent evaluation.
class numeric_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A capability the active family does not provide (e.g. closed-form
/// moment matching for the inverse-Gaussian family).
class unsupported_capability : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace dglm
