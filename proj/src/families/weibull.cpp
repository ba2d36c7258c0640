#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

/// Weibull responses with known shape nu: survivor P(y > c) = exp(-c^nu /
/// lambda), scale lambda with 1/lambda ~ Gamma(s - 1, r), r > 0 and s > 1.
/// Matching on (f, q) = (E log lambda, Var log lambda) solves to
/// r = e^f / q, s = (1 + q)/q, inside the domain for every finite (f, q).
/// nu = 1 is the exponential family of survival analysis.
class WeibullFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "weibull"; }
    bool is_discrete() const override { return false; }
    ForecastStat forecast_stat() const override { return ForecastStat::YPowNu; }

    void validate_context(const ObsContext& ctx) const override {
        if (!(ctx.nu > 0.0)) {
            throw config_error("weibull: shape nu must be positive");
        }
    }

    void validate_observation(double y, const ObsContext&) const override {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw data_error("weibull: observation must be positive");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext&) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.r > 0.0 && p.s > 1.0,
                              "weibull", "requires r > 0 and s > 1");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy /*policy*/,
                                           std::vector<Warning>* /*warnings*/,
                                           long long /*t*/) const override {
        const ConjugateParams out{std::exp(moments.f) / moments.q,
                                  (1.0 + moments.q) / moments.q};
        validate_params(out, ctx);
        return out;
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        validate_params(p, ctx);
        return {std::log(p.r / (p.s - 1.0)), 1.0 / (p.s - 1.0)};
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double y,
                                     const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return {prior.r + std::pow(y, ctx.nu), prior.s + 1.0};
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode mode) const override {
        validate_params(p, ctx);
        return {std::log(p.r) - sf::digamma(p.s - 1.0, mode),
                sf::trigamma(p.s - 1.0, mode)};
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double nu = ctx.nu;
        return std::log(nu) + (nu - 1.0) * std::log(y) +
               (p.s - 1.0) * std::log(p.r) + std::log(p.s - 1.0) -
               p.s * std::log(p.r + std::pow(y, nu));
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        // Moments of z = y^nu, whose predictive is Lomax with shape s - 1
        // and scale r.
        ForecastMoments out;
        out.stat = ForecastStat::YPowNu;
        out.mean_defined = p.s > 2.0;
        if (out.mean_defined) out.mean = p.r / (p.s - 2.0);
        out.variance_defined = p.s > 3.0;
        if (out.variance_defined) {
            out.variance = p.r * p.r * (p.s - 1.0) /
                           ((p.s - 2.0) * (p.s - 2.0) * (p.s - 3.0));
        }
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        validate_params(p, ctx);
        if (!(y > 0.0)) return 0.0;
        const double z = std::pow(y, ctx.nu);
        return 1.0 - std::pow(p.r / (p.r + z), p.s - 1.0);
    }

    double forecast_quantile(const ConjugateParams& p, double prob,
                             const ObsContext& ctx) const override {
        if (!(prob > 0.0 && prob < 1.0)) {
            throw config_error("forecast_quantile: p must lie in (0,1)");
        }
        validate_params(p, ctx);
        const double z =
            p.r * (std::pow(1.0 - prob, -1.0 / (p.s - 1.0)) - 1.0);
        return std::pow(z, 1.0 / ctx.nu);
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext&, const ObsContext&,
                                   ApproxMode mode) const override {
        // Gamma(s - 1, r)^delta on 1/lambda renormalizes to
        // Gamma(d(s-2)+1, d r), i.e. s -> d(s-2)+2. The published map
        // carries s -> d s instead.
        if (mode == ApproxMode::PaperApprox) {
            return {delta * post.r, delta * post.s};
        }
        return {delta * post.r, delta * (post.s - 2.0) + 2.0};
    }

    double transition_logdensity(double lam_now, double lam_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        if (!(lam_now > 0.0 && lam_prev > 0.0)) {
            throw numeric_error("weibull: transition state must be positive");
        }
        return detail::lognormal_logpdf(lam_now, std::log(lam_prev), Omega);
    }

    double obs_logdensity(double y, double lam,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double nu = ctx.nu;
        return std::log(nu) - std::log(lam) + (nu - 1.0) * std::log(y) -
               std::pow(y, nu) / lam;
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return post.r / (post.s - 1.0);
    }

    double evolve_state(double lam_prev, double omega) const override {
        return lam_prev * std::exp(omega);
    }

    double sample_obs(double lam, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        const double u = rng.next_uniform();
        return std::pow(-lam * std::log(u), 1.0 / ctx.nu);
    }
};

}  // namespace

const ResponseFamily& weibull_family() {
    static const WeibullFamily instance;
    return instance;
}

}  // namespace dglm::fam
