#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "dglm/rng.hpp"
#include "dglm/types.hpp"

namespace dglm::fam {

/// Statistic whose predictive mean/variance forecast_moments reports.
/// Most families forecast y itself; the Weibull family forecasts y^nu
/// (the conjugate-exponential statistic) and the Pareto family forecasts
/// log y, whose predictive moments exist for all parameter values while
/// the predictive mean of y itself diverges.
enum class ForecastStat { Y, YPowNu, LogY };

const char* forecast_stat_label(ForecastStat stat);

struct ForecastMoments {
    double mean{0.0};
    double variance{0.0};
    bool mean_defined{false};
    bool variance_defined{false};
    ForecastStat stat{ForecastStat::Y};
};

/// One exponential-family response distribution: conjugate moment matching,
/// posterior updating, predictor moments, forecast densities and moments,
/// power discounting, transition densities, and sampling.
///
/// ConjugateParams (r, s) are kept in a single family-specific coordinate
/// system in which the posterior update is always (r, s) -> (r + z(y)/a,
/// s + 1/a); the documented prior laws are:
///   binomial            pi     ~ Beta(r, s - r)
///   Poisson             lambda ~ Gamma(r, s)           (rate s)
///   negative binomial   pi     ~ Beta(n s + 1, r)
///   normal              mu     ~ N(r/s, 1/s)
///   log-normal          lambda ~ N(r/s, 1/s)           (log-scale mean)
///   gamma               beta   ~ Gamma(alpha s + 1, r) (rate beta)
///   Weibull             1/lambda ~ Gamma(s - 1, r)
///   Pareto              lambda ~ Gamma(s + 1, r)
///   inverse Gaussian    mu: density prop. to exp(-r/mu^2 + 2 s/mu)/mu^3
class ResponseFamily {
  public:
    virtual ~ResponseFamily() = default;

    virtual std::string_view name() const = 0;
    virtual bool is_discrete() const = 0;
    virtual bool has_closed_moment_matching() const { return true; }
    virtual bool has_closed_forecast_moments() const { return true; }
    virtual ForecastStat forecast_stat() const { return ForecastStat::Y; }

    /// Checks the family's own ObsContext field; throws config_error.
    virtual void validate_context(const ObsContext& ctx) const;

    /// Support check; throws data_error outside the family support.
    virtual void validate_observation(double y, const ObsContext& ctx) const = 0;

    /// Conjugate-parameter domain check; throws numeric_error on violation.
    virtual void validate_params(const ConjugateParams& params,
                                 const ObsContext& ctx) const = 0;

    /// Solve the moment-matching identities for (r, s) given (f, q).
    /// Conjugate-domain violations follow `policy`: Error throws
    /// numeric_error, ClampAndLog clamps q to just inside the boundary and
    /// appends a Warning.
    virtual ConjugateParams conjugate_from_moments(
        const PredictorMoments& moments, const ObsContext& ctx,
        ClampPolicy policy = ClampPolicy::Error,
        std::vector<Warning>* warnings = nullptr, long long t = -1) const = 0;

    /// The (f, q) the matching identities assign to (r, s); the exact
    /// algebraic inverse of conjugate_from_moments.
    virtual PredictorMoments matching_moments(const ConjugateParams& params,
                                              const ObsContext& ctx) const = 0;

    /// Conjugate posterior after observing y.
    virtual ConjugateParams posterior_params(const ConjugateParams& prior,
                                             double y,
                                             const ObsContext& ctx) const = 0;

    /// Mean and variance (f*, q*) of the linear predictor under the
    /// conjugate law with the given parameters. Exact mode uses full
    /// digamma/trigamma; PaperApprox substitutes the logarithmic
    /// approximations.
    virtual PredictorMoments posterior_predictor_moments(
        const ConjugateParams& params, const ObsContext& ctx,
        ApproxMode mode) const = 0;

    /// Log of the one-step predictive density (pmf for discrete families)
    /// at y given prior parameters (r, s).
    virtual double forecast_logdensity(const ConjugateParams& params, double y,
                                       const ObsContext& ctx) const = 0;

    /// Closed-form mean/variance of the predictive distribution of the
    /// family's forecast statistic; moment-undefined parameter regions are
    /// signalled through the defined flags.
    virtual ForecastMoments forecast_moments(const ConjugateParams& params,
                                             const ObsContext& ctx) const = 0;

    /// Predictive CDF at y (P(Y <= y); for discrete families, inclusive).
    virtual double forecast_cdf(const ConjugateParams& params, double y,
                                const ObsContext& ctx) const = 0;

    /// Predictive quantile. Default: closed-CDF bisection for continuous
    /// families, pmf accumulation for discrete ones. Families with a
    /// closed inverse CDF override.
    virtual double forecast_quantile(const ConjugateParams& params, double p,
                                     const ObsContext& ctx) const;

    /// Next-step prior from the delta-power of the posterior conjugate
    /// density (renormalized). Exact mode uses the law derived from the
    /// density power; PaperApprox uses the published map where the two
    /// differ (binomial, Weibull constants; normal/log-normal delta^2).
    virtual ConjugateParams power_discount(
        const ConjugateParams& posterior, double delta,
        const ObsContext& ctx_now, const ObsContext& ctx_next,
        ApproxMode mode = ApproxMode::Exact) const = 0;

    /// Log density of state_now given state_prev for the family's state
    /// parameter under the Gaussian-shock evolution with variance Omega.
    virtual double transition_logdensity(double state_now, double state_prev,
                                         double Omega,
                                         const ObsContext& ctx_now,
                                         const ObsContext& ctx_prev) const = 0;

    /// Observation log density at the family's state parameter (success
    /// probability, rate, scale, ... - the same scale transition_logdensity
    /// and evolve_state use).
    virtual double obs_logdensity(double y, double state,
                                  const ObsContext& ctx) const = 0;

    /// Plug-in point estimate of the state parameter from posterior (r, s),
    /// used by the plug-in log-likelihood.
    virtual double plugin_state(const ConjugateParams& posterior,
                                const ObsContext& ctx) const = 0;

    /// One step of the family's state evolution given a Gaussian shock.
    virtual double evolve_state(double state_prev, double omega) const = 0;

    /// Draw one observation given the state parameter. Inverse-CDF or
    /// bounded constructions only, so streams are platform-stable.
    virtual double sample_obs(double state, const ObsContext& ctx,
                              Philox4x32& rng) const = 0;
};

const ResponseFamily& binomial_family();
const ResponseFamily& poisson_family();
const ResponseFamily& negative_binomial_family();
const ResponseFamily& normal_family();
const ResponseFamily& lognormal_family();
const ResponseFamily& gamma_family();
const ResponseFamily& weibull_family();
const ResponseFamily& pareto_family();
const ResponseFamily& inverse_gaussian_family();

/// Beta responses with one unit shape parameter, handled through the Pareto
/// machinery: x ~ Beta(lambda, 1) via y = 1/x, and x ~ Beta(1, lambda) via
/// y = 1/(1 - x); both transforms give y ~ Pareto(lambda) on [1, inf).
const ResponseFamily& beta_inverse_family();
const ResponseFamily& beta_complement_family();

/// Lookup by CLI name ("binomial", "poisson", "negative-binomial",
/// "geometric", "normal", "log-normal", "gamma", "weibull", "exponential",
/// "pareto", "inverse-gaussian", "beta-inverse", "beta-complement").
/// Throws config_error for unknown names.
const ResponseFamily& family_by_name(std::string_view name);

/// All registered family names (for --help and validation messages).
std::vector<std::string_view> family_names();

/// Volatility filtering helpers: squared returns y^2 | sigma^2 ~
/// Gamma(1/2, 1/(2 sigma^2)) are gamma-family observations with
/// alpha = 1/2, so the gamma machinery applies to data y_t^2 directly.
namespace volatility {

/// Inverted-gamma posterior of sigma^2 from the gamma-family posterior
/// (r*, s*) at alpha = 1/2: shape (s* + 2)/2, scale r*/2.
std::pair<double, double> sigma2_posterior(const ConjugateParams& posterior);

/// Posterior mean of sigma^2: r*/s*.
double sigma2_posterior_mean(const ConjugateParams& posterior);

}  // namespace volatility

}  // namespace dglm::fam
