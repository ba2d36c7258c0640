#pragma once

#include <cmath>
#include <sstream>

#include "dglm/families.hpp"
#include "dglm/special_functions.hpp"

namespace dglm::fam::detail {

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

inline double logistic(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                    : std::exp(x) / (1.0 + std::exp(x));
}

constexpr double kLog2Pi = 1.8378770664093454836;

/// log N(x; mean, var).
inline double normal_logpdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

/// log of the LogN(log_mean, var) density at x > 0.
inline double lognormal_logpdf(double x, double log_mean, double var) {
    return normal_logpdf(std::log(x), log_mean, var) - std::log(x);
}

inline void require_integer_count(double y, double n, const char* family) {
    if (!(y >= 0.0) || y != std::floor(y)) {
        std::ostringstream msg;
        msg << family << ": observation must be a nonnegative integer, got "
            << y;
        throw data_error(msg.str());
    }
    if (n > 0.0 && y > n) {
        std::ostringstream msg;
        msg << family << ": observation " << y << " exceeds count " << n;
        throw data_error(msg.str());
    }
}

/// Enforce q < q_max (the conjugate-domain boundary). Error policy throws;
/// ClampAndLog returns a value just inside the boundary and records it.
inline double enforce_q_bound(double q, double q_max, const char* family,
                              ClampPolicy policy,
                              std::vector<Warning>* warnings, long long t) {
    if (q < q_max) return q;
    if (policy == ClampPolicy::Error) {
        std::ostringstream msg;
        msg << family << ": predictor variance q=" << q
            << " is at or beyond the conjugate boundary " << q_max
            << "; reduce q (smaller innovation variance or larger discount "
               "factor)";
        throw numeric_error(msg.str());
    }
    const double clamped = q_max * (1.0 - 1e-9);
    if (warnings != nullptr) {
        std::ostringstream msg;
        msg << family << ": predictor variance q=" << q
            << " clamped to conjugate boundary " << clamped;
        warnings->push_back({t, msg.str()});
    }
    return clamped;
}

inline void require_param(bool ok, const char* family, const char* what) {
    if (!ok) {
        throw numeric_error(std::string(family) +
                            ": conjugate parameters out of domain (" + what +
                            ")");
    }
}

/// Generic continuous quantile by bracketed bisection on the predictive CDF.
double continuous_quantile_by_cdf(const ResponseFamily& family,
                                  const ConjugateParams& params, double p,
                                  const ObsContext& ctx, double lower_support);

/// Generic discrete quantile by pmf accumulation (cap 1e6 terms).
double discrete_quantile_by_pmf(const ResponseFamily& family,
                                const ConjugateParams& params, double p,
                                const ObsContext& ctx);

}  // namespace dglm::fam::detail
