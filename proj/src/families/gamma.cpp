#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

/// Gamma responses with known shape alpha: y ~ Gamma(alpha, beta) (rate
/// beta), beta ~ Gamma(alpha s + 1, r) with r > 0 and alpha s + 1 > 0.
/// Matching on (f, q) = (E log beta, Var log beta) solves to r = e^-f / q,
/// s = (1 - q)/(alpha q); the matched s turns nonpositive once q >= 1,
/// which is the conjugate boundary the clamp policy guards.
/// Squared-return volatility filtering is this family at alpha = 1/2
/// applied to data y_t^2.
class GammaFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "gamma"; }
    bool is_discrete() const override { return false; }

    void validate_context(const ObsContext& ctx) const override {
        if (!(ctx.alpha > 0.0)) {
            throw config_error("gamma: shape alpha must be positive");
        }
    }

    void validate_observation(double y, const ObsContext&) const override {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw data_error("gamma: observation must be positive");
        }
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext& ctx) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.r > 0.0 && ctx.alpha * p.s + 1.0 > 0.0,
                              "gamma", "requires r > 0 and alpha s + 1 > 0");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy policy,
                                           std::vector<Warning>* warnings,
                                           long long t) const override {
        const double q = detail::enforce_q_bound(moments.q, 1.0, "gamma",
                                                 policy, warnings, t);
        const ConjugateParams out{std::exp(-moments.f) / q,
                                  (1.0 - q) / (ctx.alpha * q)};
        validate_params(out, ctx);
        return out;
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        validate_params(p, ctx);
        const double a = ctx.alpha * p.s + 1.0;
        return {std::log(a / p.r), 1.0 / a};
    }

    ConjugateParams posterior_params(const ConjugateParams& prior, double y,
                                     const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return {prior.r + y, prior.s + 1.0};
    }

    PredictorMoments posterior_predictor_moments(
        const ConjugateParams& p, const ObsContext& ctx,
        ApproxMode mode) const override {
        validate_params(p, ctx);
        const double a = ctx.alpha * p.s + 1.0;
        return {sf::digamma(a, mode) - std::log(p.r),
                sf::trigamma(a, mode)};
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double alpha = ctx.alpha;
        const double a = alpha * p.s + 1.0;
        return a * std::log(p.r) + sf::log_gamma(a + alpha) -
               sf::log_gamma(a) - sf::log_gamma(alpha) +
               (alpha - 1.0) * std::log(y) -
               (a + alpha) * std::log(p.r + y);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        const double as = ctx.alpha * p.s;
        ForecastMoments out;
        out.mean_defined = p.s > 0.0;
        if (out.mean_defined) out.mean = p.r / p.s;
        out.variance_defined = as > 1.0;
        if (out.variance_defined) {
            out.variance = p.r * p.r * (p.s + 1.0) / (p.s * p.s * (as - 1.0));
        }
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        validate_params(p, ctx);
        if (!(y > 0.0)) return 0.0;
        return sf::inc_beta(ctx.alpha, ctx.alpha * p.s + 1.0,
                            y / (y + p.r));
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext& ctx_now,
                                   const ObsContext& ctx_next,
                                   ApproxMode) const override {
        // Gamma(alpha s + 1, r)^delta renormalizes to
        // Gamma(d alpha s + 1, d r); the next prior reads its own shape, so
        // s picks up alpha_now/alpha_next. The published map coincides.
        return {delta * post.r,
                delta * (ctx_now.alpha / ctx_next.alpha) * post.s};
    }

    double transition_logdensity(double beta_now, double beta_prev,
                                 double Omega, const ObsContext& ctx_now,
                                 const ObsContext& ctx_prev) const override {
        if (!(beta_now > 0.0 && beta_prev > 0.0)) {
            throw numeric_error("gamma: transition state must be positive");
        }
        const double mean = std::log(beta_prev) +
                            std::log(ctx_now.alpha / ctx_prev.alpha);
        return detail::lognormal_logpdf(beta_now, mean, Omega);
    }

    double obs_logdensity(double y, double beta,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        return ctx.alpha * std::log(beta) + (ctx.alpha - 1.0) * std::log(y) -
               beta * y - sf::log_gamma(ctx.alpha);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        return (ctx.alpha * post.s + 1.0) / post.r;
    }

    double evolve_state(double beta_prev, double omega) const override {
        return beta_prev * std::exp(-omega);
    }

    double sample_obs(double beta, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        // Inverse CDF through the regularized incomplete gamma.
        const double g = sf::inverse_gamma_p(ctx.alpha, rng.next_uniform());
        return g / beta;
    }
};

}  // namespace

const ResponseFamily& gamma_family() {
    static const GammaFamily instance;
    return instance;
}

}  // namespace dglm::fam
