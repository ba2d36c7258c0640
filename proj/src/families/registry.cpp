#include <cmath>
#include <string>

#include "family_common.hpp"

namespace dglm::fam {

const char* forecast_stat_label(ForecastStat stat) {
    switch (stat) {
        case ForecastStat::Y: return "y";
        case ForecastStat::YPowNu: return "y^nu";
        case ForecastStat::LogY: return "log y";
    }
    return "?";
}

void ResponseFamily::validate_context(const ObsContext&) const {}

double ResponseFamily::forecast_quantile(const ConjugateParams& params,
                                         double p,
                                         const ObsContext& ctx) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw config_error("forecast_quantile: p must lie in (0,1)");
    }
    if (is_discrete()) {
        return detail::discrete_quantile_by_pmf(*this, params, p, ctx);
    }
    return detail::continuous_quantile_by_cdf(*this, params, p, ctx, 0.0);
}

namespace detail {

double continuous_quantile_by_cdf(const ResponseFamily& family,
                                  const ConjugateParams& params, double p,
                                  const ObsContext& ctx,
                                  double lower_support) {
    double lo = lower_support;
    double hi = std::max(1.0, lower_support + 1.0);
    int expand = 0;
    while (family.forecast_cdf(params, hi, ctx) < p) {
        hi = lower_support + (hi - lower_support) * 2.0;
        if (++expand > 400) {
            throw numeric_error(
                "forecast_quantile: failed to bracket quantile");
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (family.forecast_cdf(params, mid, ctx) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double discrete_quantile_by_pmf(const ResponseFamily& family,
                                const ConjugateParams& params, double p,
                                const ObsContext& ctx) {
    double cum = 0.0;
    for (double y = 0.0; y < 1e6; y += 1.0) {
        cum += std::exp(family.forecast_logdensity(params, y, ctx));
        if (cum >= p) return y;
    }
    throw numeric_error("forecast_quantile: pmf walk exceeded 1e6 terms");
}

}  // namespace detail

namespace volatility {

std::pair<double, double> sigma2_posterior(const ConjugateParams& posterior) {
    return {0.5 * (posterior.s + 2.0), 0.5 * posterior.r};
}

double sigma2_posterior_mean(const ConjugateParams& posterior) {
    if (!(posterior.s > 0.0)) {
        throw numeric_error(
            "volatility: posterior mean of sigma^2 requires s > 0");
    }
    return posterior.r / posterior.s;
}

}  // namespace volatility

const ResponseFamily& family_by_name(std::string_view name) {
    if (name == "binomial" || name == "bernoulli") return binomial_family();
    if (name == "poisson") return poisson_family();
    if (name == "negative-binomial" || name == "geometric") {
        return negative_binomial_family();
    }
    if (name == "normal") return normal_family();
    if (name == "lognormal" || name == "log-normal") {
        return lognormal_family();
    }
    if (name == "gamma") return gamma_family();
    if (name == "weibull" || name == "exponential") return weibull_family();
    if (name == "pareto") return pareto_family();
    if (name == "inverse-gaussian") return inverse_gaussian_family();
    if (name == "beta-inverse") return beta_inverse_family();
    if (name == "beta-complement") return beta_complement_family();
    throw config_error("unknown family '" + std::string(name) + "'");
}

std::vector<std::string_view> family_names() {
    return {"binomial",  "poisson", "negative-binomial", "normal",
            "lognormal", "gamma",   "weibull",           "pareto",
            "inverse-gaussian"};
}

}  // namespace dglm::fam
