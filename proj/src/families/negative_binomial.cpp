#include <cmath>

#include "family_common.hpp"

namespace dglm::fam {
namespace {

using detail::logistic;
using detail::logit;

/// Negative binomial responses: y failures before the n-th success, success
/// probability pi ~ Beta(n s + 1, r) with r > 0 and n s + 1 > 0. Matching on
/// (f, q) = (E logit pi, Var logit pi) solves to r = (1 + e^-f)/q and
/// s = (1 + e^f - q)/(n q); the matched s turns nonpositive once
/// q >= 1 + e^f, which is the conjugate boundary the clamp policy guards.
class NegativeBinomialFamily final : public ResponseFamily {
  public:
    std::string_view name() const override { return "negative-binomial"; }
    bool is_discrete() const override { return true; }

    void validate_context(const ObsContext& ctx) const override {
        if (!(ctx.n >= 1.0) || ctx.n != std::floor(ctx.n)) {
            throw config_error(
                "negative-binomial: success count n must be a positive "
                "integer");
        }
    }

    void validate_observation(double y, const ObsContext&) const override {
        detail::require_integer_count(y, 0.0, "negative-binomial");
    }

    void validate_params(const ConjugateParams& p,
                         const ObsContext& ctx) const override {
        detail::require_param(std::isfinite(p.r) && std::isfinite(p.s) &&
                                  p.r > 0.0 && ctx.n * p.s + 1.0 > 0.0,
                              "negative-binomial",
                              "requires r > 0 and n s + 1 > 0");
    }

    ConjugateParams conjugate_from_moments(const PredictorMoments& moments,
                                           const ObsContext& ctx,
                                           ClampPolicy policy,
                                           std::vector<Warning>* warnings,
                                           long long t) const override {
        const double ef = std::exp(moments.f);
        const double q =
            detail::enforce_q_bound(moments.q, 1.0 + ef, "negative-binomial",
                                    policy, warnings, t);
        const ConjugateParams out{(1.0 + 1.0 / ef) / q,
                                  (1.0 + ef - q) / (ctx.n * q)};
        validate_params(out, ctx);
        return out;
    }

    PredictorMoments matching_moments(const ConjugateParams& p,
                                      const ObsContext& ctx) const override {
        validate_params(p, ctx);
        const double a = ctx.n * p.s + 1.0;
        return {std::log(a / p.r), 1.0 / p.r + 1.0 / a};
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
        const double a = ctx.n * p.s + 1.0;
        return {sf::digamma(a, mode) - sf::digamma(p.r, mode),
                sf::trigamma(a, mode) + sf::trigamma(p.r, mode)};
    }

    double forecast_logdensity(const ConjugateParams& p, double y,
                               const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double n = ctx.n;
        const double a = n * p.s + 1.0;
        return sf::log_gamma(y + n) - sf::log_gamma(n) -
               sf::log_gamma(y + 1.0) + sf::log_beta(a + n, p.r + y) -
               sf::log_beta(a, p.r);
    }

    ForecastMoments forecast_moments(const ConjugateParams& p,
                                     const ObsContext& ctx) const override {
        validate_params(p, ctx);
        const double ns = ctx.n * p.s;
        ForecastMoments out;
        out.mean_defined = p.s > 0.0;
        if (out.mean_defined) out.mean = p.r / p.s;
        out.variance_defined = ns > 1.0;
        if (out.variance_defined) {
            out.variance = p.r * (p.r + ns) * (p.s + 1.0) /
                           (p.s * p.s * (ns - 1.0));
        }
        return out;
    }

    double forecast_cdf(const ConjugateParams& p, double y,
                        const ObsContext& ctx) const override {
        if (y < 0.0) return 0.0;
        const double top = std::floor(y);
        double cum = 0.0;
        for (double k = 0.0; k <= top; k += 1.0) {
            cum += std::exp(forecast_logdensity(p, k, ctx));
        }
        return std::min(cum, 1.0);
    }

    ConjugateParams power_discount(const ConjugateParams& post, double delta,
                                   const ObsContext& ctx_now,
                                   const ObsContext& ctx_next,
                                   ApproxMode) const override {
        // Beta(n s + 1, r)^delta renormalizes to Beta(d n s + 1, d(r-1)+1);
        // the next prior reads its own count, so s picks up n_now/n_next.
        return {delta * (post.r - 1.0) + 1.0,
                delta * (ctx_now.n / ctx_next.n) * post.s};
    }

    double transition_logdensity(double pi_now, double pi_prev, double Omega,
                                 const ObsContext&,
                                 const ObsContext&) const override {
        if (!(pi_now > 0.0 && pi_now < 1.0 && pi_prev > 0.0 && pi_prev < 1.0)) {
            throw numeric_error(
                "negative-binomial: transition state outside (0,1)");
        }
        return detail::normal_logpdf(logit(pi_now), logit(pi_prev), Omega) -
               std::log(pi_now) - std::log1p(-pi_now);
    }

    double obs_logdensity(double y, double pi,
                          const ObsContext& ctx) const override {
        validate_observation(y, ctx);
        const double n = ctx.n;
        return sf::log_gamma(y + n) - sf::log_gamma(n) -
               sf::log_gamma(y + 1.0) + n * std::log(pi) +
               y * std::log1p(-pi);
    }

    double plugin_state(const ConjugateParams& post,
                        const ObsContext& ctx) const override {
        validate_params(post, ctx);
        const double a = ctx.n * post.s + 1.0;
        return a / (a + post.r);
    }

    double evolve_state(double pi_prev, double omega) const override {
        // The evolution drives the log odds against success, so the shock
        // enters the success-probability logit with a minus sign.
        return logistic(logit(pi_prev) - omega);
    }

    double sample_obs(double pi, const ObsContext& ctx,
                      Philox4x32& rng) const override {
        // Sum of n geometric draws by inverse CDF; no rejection.
        const auto n = static_cast<long long>(ctx.n);
        const double log1mp = std::log1p(-pi);
        double total = 0.0;
        for (long long i = 0; i < n; ++i) {
            const double u = rng.next_uniform();
            total += std::floor(std::log(u) / log1mp);
        }
        return total;
    }
};

}  // namespace

const ResponseFamily& negative_binomial_family() {
    static const NegativeBinomialFamily instance;
    return instance;
}

}  // namespace dglm::fam
